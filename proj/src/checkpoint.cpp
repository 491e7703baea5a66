#include "pptqmc/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "pptqmc/errors.hpp"

namespace pptqmc {

using nlohmann::json;

namespace {

constexpr const char* format_tag = "pptqmc-checkpoint";
constexpr int format_version = 1;

std::string hex_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

double parse_hex_real(const json& j) {
    const auto s = j.get<std::string>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw CheckpointError("bad real '" + s + "' in checkpoint");
    return x;
}

json sums_to_json(const std::vector<CompensatedSum>& sums) {
    json a = json::array();
    for (const auto& s : sums) a.push_back({hex_real(s.raw_sum()), hex_real(s.compensation())});
    return a;
}

std::vector<CompensatedSum> sums_from_json(const json& a) {
    std::vector<CompensatedSum> sums;
    for (const auto& pair : a) sums.emplace_back(parse_hex_real(pair.at(0)), parse_hex_real(pair.at(1)));
    return sums;
}

std::string checksum(const json& payload) {
    const std::string text = payload.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

json accumulator_to_json(const Accumulator& acc) {
    return json{{"n_points", acc.n_points},
                {"sum_weight", sums_to_json(acc.sum_weight)},
                {"sum_weight_sq", sums_to_json(acc.sum_weight_sq)},
                {"sum_weight_pass", sums_to_json(acc.sum_weight_pass)},
                {"sum_weight_sq_pass", sums_to_json(acc.sum_weight_sq_pass)},
                {"contingency", acc.contingency},
                {"clipped", acc.clipped}};
}

Accumulator accumulator_from_json(const json& j) {
    Accumulator acc;
    acc.n_points = j.at("n_points").get<std::int64_t>();
    acc.sum_weight = sums_from_json(j.at("sum_weight"));
    acc.sum_weight_sq = sums_from_json(j.at("sum_weight_sq"));
    acc.sum_weight_pass = sums_from_json(j.at("sum_weight_pass"));
    acc.sum_weight_sq_pass = sums_from_json(j.at("sum_weight_sq_pass"));
    acc.contingency = j.at("contingency").get<std::array<std::array<std::int64_t, 2>, 2>>();
    acc.clipped = j.at("clipped").get<std::vector<std::int64_t>>();
    return acc;
}

void checkpoint_save(const RunConfig& config, const RunState& state,
                     const std::filesystem::path& path) {
    json st{{"next_index", state.next_index}, {"intervals_done", state.intervals_done}};
    st["full"] = state.full ? accumulator_to_json(*state.full) : json(nullptr);
    st["boundary"] = state.boundary ? accumulator_to_json(*state.boundary) : json(nullptr);
    json payload{{"config", to_json(config)}, {"config_hash", config_hash_hex(config)}, {"state", st}};
    json doc = payload;
    doc["format"] = format_tag;
    doc["version"] = format_version;
    doc["checksum"] = checksum(payload);

    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw CheckpointError("cannot write checkpoint " + tmp.string());
        out << doc.dump(1) << '\n';
        if (!out) throw CheckpointError("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw CheckpointError("checkpoint " + path.string() + " is not valid JSON");
    }
    try {
        if (doc.at("format") != format_tag) throw CheckpointError("not a pptqmc checkpoint");
        if (doc.at("version") != format_version)
            throw CheckpointError("unsupported checkpoint version");
        json payload{{"config", doc.at("config")},
                     {"config_hash", doc.at("config_hash")},
                     {"state", doc.at("state")}};
        if (doc.at("checksum") != checksum(payload))
            throw CheckpointError("checkpoint checksum mismatch (file corrupted?)");

        Checkpoint cp;
        cp.config = run_config_from_json(doc.at("config"));
        cp.config_hash = doc.at("config_hash").get<std::string>();
        if (cp.config_hash != config_hash_hex(cp.config))
            throw CheckpointError("checkpoint config does not match its recorded hash");
        const auto& st = doc.at("state");
        cp.state.next_index = st.at("next_index").get<std::int64_t>();
        cp.state.intervals_done = st.at("intervals_done").get<std::int64_t>();
        if (!st.at("full").is_null()) cp.state.full = accumulator_from_json(st.at("full"));
        if (!st.at("boundary").is_null()) cp.state.boundary = accumulator_from_json(st.at("boundary"));

        const Layout layout = cp.config.layout();
        for (const auto* acc : {cp.state.full ? &*cp.state.full : nullptr,
                                cp.state.boundary ? &*cp.state.boundary : nullptr}) {
            if (!acc) continue;
            if (acc->sum_weight.size() != layout.metrics.size() ||
                acc->sum_weight_pass.size() != layout.metrics.size() * layout.cells.size() ||
                acc->clipped.size() != layout.metrics.size())
                throw CheckpointError("checkpoint accumulator does not match the config layout");
        }
        return cp;
    } catch (const json::exception& e) {
        throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("checkpoint config invalid: ") + e.what());
    }
}

}  // namespace pptqmc
