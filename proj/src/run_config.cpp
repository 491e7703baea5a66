#include "pptqmc/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "pptqmc/errors.hpp"

namespace pptqmc {

using nlohmann::json;

const char* to_string(RankMode m) {
    switch (m) {
    case RankMode::full: return "full";
    case RankMode::boundary: return "boundary";
    case RankMode::paired: return "paired";
    }
    return "?";
}

const char* to_string(SequenceKind k) { return k == SequenceKind::faure ? "faure" : "prng"; }
const char* to_string(BoundaryStream b) {
    return b == BoundaryStream::subset ? "subset" : "independent";
}

namespace {

template <typename E>
E enum_from(const std::string& s, std::initializer_list<E> values, const char* what) {
    for (E v : values)
        if (s == to_string(v)) return v;
    throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

const char* scrambling_name(Scrambling s) {
    return s == Scrambling::none ? "none" : "digit_permutation";
}

Scrambling scrambling_from(const std::string& s) {
    if (s == "none") return Scrambling::none;
    if (s == "digit_permutation") return Scrambling::digit_permutation;
    throw ConfigError("unknown scrambling '" + s + "'");
}

const char* family_name(CFunction::Family f) {
    switch (f) {
    case CFunction::Family::power_mean: return "power_mean";
    case CFunction::Family::log_mean: return "log_mean";
    case CFunction::Family::mixture: return "mixture";
    }
    return "?";
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* where) {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
}

json metric_to_json(const MetricSpec& m) {
    const bool builtin = m.kind == MetricKind::Bures || m.kind == MetricKind::KuboMori ||
                         m.kind == MetricKind::WignerYanase;
    if (!m.c || (builtin && to_json(*m.c) == to_json(*metric_spec(m.kind).c)))
        return to_string(m.kind);
    return json{{"name", to_string(m.kind)}, {"c_function", to_json(*m.c)}};
}

MetricSpec metric_from_json(const json& j) {
    if (j.is_string()) return metric_spec(metric_kind_from_string(j.get<std::string>()));
    if (!j.is_object()) throw ConfigError("metric entries must be names or objects");
    reject_unknown(j, {"name", "c_function"}, "metric");
    const auto kind = metric_kind_from_string(j.at("name").get<std::string>());
    if (!j.contains("c_function")) return metric_spec(kind);
    return metric_spec(kind, cfunction_from_json(j.at("c_function")));
}

}  // namespace

json to_json(const CFunction& c) {
    json j{{"family", family_name(c.family)}};
    if (c.family == CFunction::Family::mixture) {
        json parts = json::array();
        for (const auto& [w, part] : c.components) parts.push_back({{"weight", w}, {"c", to_json(part)}});
        j["components"] = parts;
    } else {
        j["scale"] = c.scale;
        if (c.family == CFunction::Family::power_mean) j["p"] = c.p;
    }
    return j;
}

CFunction cfunction_from_json(const json& j) {
    reject_unknown(j, {"family", "p", "scale", "components"}, "c_function");
    CFunction c;
    const auto family = j.at("family").get<std::string>();
    if (family == "power_mean") {
        c.family = CFunction::Family::power_mean;
        c.p = j.at("p").get<double>();
        if (c.p < -1.0 || c.p > 1.0)
            throw ConfigError("power_mean exponent must lie in [-1, 1] for a monotone metric");
    } else if (family == "log_mean") {
        c.family = CFunction::Family::log_mean;
    } else if (family == "mixture") {
        c.family = CFunction::Family::mixture;
        for (const auto& part : j.at("components")) {
            const double w = part.at("weight").get<double>();
            if (!(w >= 0.0)) throw ConfigError("mixture weights must be non-negative");
            c.components.emplace_back(w, cfunction_from_json(part.at("c")));
        }
        if (c.components.empty()) throw ConfigError("mixture needs at least one component");
    } else {
        throw ConfigError("unknown c_function family '" + family + "'");
    }
    if (j.contains("scale")) c.scale = j.at("scale").get<double>();
    if (!(c.scale > 0.0)) throw ConfigError("c_function scale must be positive");
    return c;
}

Layout RunConfig::layout() const { return Layout::make(d_a, d_b, metrics, ppt, cross_norm); }

void RunConfig::validate() const {
    if (d_a < 1 || d_b < 1 || dim() < 2) throw ConfigError("need d_A, d_B >= 1 with d_A*d_B >= 2");
    if (metrics.empty()) throw ConfigError("at least one metric is required");
    std::set<MetricKind> seen;
    for (const auto& m : metrics) {
        if (!seen.insert(m.kind).second) throw ConfigError("metrics must be distinct");
        if (m.kind != MetricKind::HS && !m.c)
            throw ConfigError(std::string("metric ") + to_string(m.kind) + " needs a c_function");
    }
    if (total_points < 0) throw ConfigError("total_points must be non-negative");
    if (points_per_interval <= 0) throw ConfigError("points_per_interval must be positive");
    if (ppt_tol < 0 || cn_tol < 0) throw ConfigError("tolerances must be non-negative");
    if (!(clip_threshold >= 0)) throw ConfigError("clip_threshold must be non-negative");
    if (checkpoint_every <= 0) throw ConfigError("checkpoint_every must be positive");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    edit_rule.validate();
    if (sequence.kind == SequenceKind::faure) {
        // Constructing the sequences validates base and index capacity.
        SequenceConfig sc;
        sc.dimension = dim() * dim() - 1;
        sc.base = sequence.base;
        FaureSequence probe(sc);
        if (static_cast<std::uint64_t>(total_points) + sequence.skip > probe.max_index())
            throw ConfigError("total_points + skip exceeds the Faure digit capacity");
    }
}

json to_json(const RunConfig& c) {
    json metrics = json::array();
    for (const auto& m : c.metrics) metrics.push_back(metric_to_json(m));
    json criteria = json::array();
    if (c.ppt) criteria.push_back("PPT");
    if (c.cross_norm) criteria.push_back("CN");
    return json{
        {"d_a", c.d_a},
        {"d_b", c.d_b},
        {"rank_mode", to_string(c.rank_mode)},
        {"metrics", metrics},
        {"criteria", criteria},
        {"sequence",
         {{"kind", to_string(c.sequence.kind)},
          {"scrambling", scrambling_name(c.sequence.scrambling)},
          {"seed", c.sequence.seed},
          {"skip", c.sequence.skip},
          {"base", c.sequence.base},
          {"boundary_stream", to_string(c.sequence.boundary)}}},
        {"total_points", c.total_points},
        {"points_per_interval", c.points_per_interval},
        {"ppt_tol", c.ppt_tol},
        {"cn_tol", c.cn_tol},
        {"clip_threshold", c.clip_threshold},
        {"edit_rule", {{"window", c.edit_rule.window}, {"threshold", c.edit_rule.threshold}}},
        {"pooling", to_string(c.pooling)},
        {"absolute_jacobian", c.absolute_jacobian},
        {"checkpoint_every", c.checkpoint_every},
        {"workers", c.workers},
        {"output_dir", c.output_dir},
    };
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    reject_unknown(j,
                   {"d_a", "d_b", "rank_mode", "metrics", "criteria", "sequence", "total_points",
                    "points_per_interval", "ppt_tol", "cn_tol", "clip_threshold", "edit_rule",
                    "pooling", "absolute_jacobian", "checkpoint_every", "workers", "output_dir"},
                   "run config");
    RunConfig c;
    try {
        c.d_a = j.value("d_a", c.d_a);
        c.d_b = j.value("d_b", c.d_b);
        if (j.contains("rank_mode"))
            c.rank_mode = enum_from(j["rank_mode"].get<std::string>(),
                                    {RankMode::full, RankMode::boundary, RankMode::paired}, "rank_mode");
        if (j.contains("metrics")) {
            c.metrics.clear();
            for (const auto& m : j["metrics"]) c.metrics.push_back(metric_from_json(m));
        }
        if (j.contains("criteria")) {
            c.ppt = c.cross_norm = false;
            for (const auto& name : j["criteria"]) {
                const auto s = name.get<std::string>();
                if (s == "PPT") c.ppt = true;
                else if (s == "CN") c.cross_norm = true;
                else throw ConfigError("unknown criterion '" + s + "'");
            }
        }
        if (j.contains("sequence")) {
            const auto& s = j["sequence"];
            reject_unknown(s, {"kind", "scrambling", "seed", "skip", "base", "boundary_stream"},
                           "sequence");
            if (s.contains("kind"))
                c.sequence.kind = enum_from(s["kind"].get<std::string>(),
                                            {SequenceKind::faure, SequenceKind::prng}, "sequence kind");
            if (s.contains("scrambling")) c.sequence.scrambling = scrambling_from(s["scrambling"]);
            c.sequence.seed = s.value("seed", c.sequence.seed);
            c.sequence.skip = s.value("skip", c.sequence.skip);
            c.sequence.base = s.value("base", c.sequence.base);
            if (s.contains("boundary_stream"))
                c.sequence.boundary = enum_from(s["boundary_stream"].get<std::string>(),
                                                {BoundaryStream::subset, BoundaryStream::independent},
                                                "boundary_stream");
        }
        c.total_points = j.value("total_points", c.total_points);
        c.points_per_interval = j.value("points_per_interval", c.points_per_interval);
        c.ppt_tol = j.value("ppt_tol", c.ppt_tol);
        c.cn_tol = j.value("cn_tol", c.cn_tol);
        c.clip_threshold = j.value("clip_threshold", c.clip_threshold);
        if (j.contains("edit_rule")) {
            reject_unknown(j["edit_rule"], {"window", "threshold"}, "edit_rule");
            c.edit_rule.window = j["edit_rule"].value("window", c.edit_rule.window);
            c.edit_rule.threshold = j["edit_rule"].value("threshold", c.edit_rule.threshold);
        }
        if (j.contains("pooling")) c.pooling = pooling_mode_from_string(j["pooling"]);
        c.absolute_jacobian = j.value("absolute_jacobian", c.absolute_jacobian);
        c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
        c.workers = j.value("workers", c.workers);
        c.output_dir = j.value("output_dir", c.output_dir);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed run config: ") + e.what());
    }
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return run_config_from_json(j);
}

std::uint64_t config_hash(const RunConfig& config) {
    json j = to_json(config);
    j.erase("workers");
    j.erase("output_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash_hex(const RunConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(config)));
    return buf;
}

}  // namespace pptqmc
