#include "pptqmc/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pptqmc/checkpoint.hpp"
#include "pptqmc/errors.hpp"
#include "pptqmc/oracle_exact.hpp"
#include "pptqmc/state_param.hpp"

namespace pptqmc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json real_or_null(std::optional<double> x) {
    if (!x || !std::isfinite(*x)) return nullptr;
    return *x;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_real(const std::string& s, const fs::path& path) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw ConfigError("malformed number '" + s + "' in " + path.string());
    return x;
}

std::int64_t parse_int(const std::string& s, const fs::path& path) {
    char* end = nullptr;
    const long long x = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0') throw ConfigError("malformed integer '" + s + "' in " + path.string());
    return x;
}

// Keeps the header and rows whose interval index is <= last.
void truncate_log(const fs::path& path, std::int64_t last) {
    if (!fs::exists(path)) return;
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    std::vector<std::string> keep;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto pos = line.find(',');
        if (std::strtoll(line.substr(0, pos).c_str(), nullptr, 10) <= last) keep.push_back(line);
    }
    in.close();
    std::ofstream out(path, std::ios::trunc);
    out << header << '\n';
    for (const auto& l : keep) out << l << '\n';
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

RunState execute(Integrator& integrator, const RunFiles& files, std::ostream& progress) {
    const RunConfig& config = integrator.config();
    std::ofstream log(files.intervals(), std::ios::app);
    std::ofstream sums(files.interval_sums(), std::ios::app);
    if (!log || !sums) throw std::runtime_error("cannot open interval logs in " + files.dir.string());

    while (!integrator.done()) {
        const IntervalRecord rec = integrator.step();
        const RunState& st = integrator.state();
        write_interval_rows(log, rec);
        write_interval_sums(sums, rec.interval_index, integrator.layout(),
                            st.full ? &*st.full : nullptr, st.boundary ? &*st.boundary : nullptr);
        log.flush();
        sums.flush();
        if (!log || !sums) throw std::runtime_error("failed writing interval logs");

        progress << "interval " << rec.interval_index << "  points " << rec.n_points << '/'
                 << config.total_points;
        for (const auto& v : rec.values)
            if (v.metric == MetricKind::HS && v.criterion == Criterion::ppt && v.omega)
                progress << "  omega[" << v.convention << "]=" << format_real(v.omega);
        progress << '\n';

        if (rec.interval_index % config.checkpoint_every == 0 || integrator.done())
            checkpoint_save(config, st, files.checkpoint());
    }
    write_json(files.summary(), run_summary(config, integrator.state()));
    return integrator.state();
}

json contingency_json(const Accumulator& acc) {
    return json{{"ppt_pass_cn_pass", acc.contingency[1][1]},
                {"ppt_pass_cn_fail", acc.contingency[1][0]},
                {"ppt_fail_cn_pass", acc.contingency[0][1]},
                {"ppt_fail_cn_fail", acc.contingency[0][0]}};
}

}  // namespace

json run_summary(const RunConfig& config, const RunState& state) {
    const Layout layout = config.layout();
    const Accumulator* full = state.full ? &*state.full : nullptr;
    const Accumulator* boundary = state.boundary ? &*state.boundary : nullptr;
    const IntervalRecord rec =
        make_record(state.intervals_done, config.points_per_interval, layout, full, boundary,
                    config.pooling);

    json results = json::array();
    for (const auto& v : rec.values) {
        json r{{"metric", to_string(v.metric)},
               {"criterion", to_string(v.criterion)},
               {"convention", v.convention},
               {"prob_full", real_or_null(v.prob_full)},
               {"prob_boundary", real_or_null(v.prob_boundary)},
               {"omega", real_or_null(v.omega)}};
        if (v.convention != "pooled") {
            const int m = layout.metric_index(v.metric);
            const int c = layout.cell_index(v.criterion, v.convention == "inner"
                                                             ? BlockConvention::transpose_inner_blocks
                                                             : BlockConvention::transpose_outer_blocks);
            if (full) r["se_full"] = real_or_null(standard_error(*full, m, c));
            if (boundary && v.metric == MetricKind::HS)
                r["se_boundary"] = real_or_null(standard_error(*boundary, m, c));
        }
        results.push_back(r);
    }

    json summary{{"config_hash", config_hash_hex(config)},
                 {"d_a", config.d_a},
                 {"d_b", config.d_b},
                 {"intervals", state.intervals_done},
                 {"next_index", state.next_index},
                 {"results", results}};
    json points, clipped, contingency;
    for (const auto& [name, acc] : {std::pair{"full", full}, std::pair{"boundary", boundary}}) {
        if (!acc) continue;
        points[name] = acc->n_points;
        json per_metric;
        for (std::size_t m = 0; m < layout.metrics.size(); ++m)
            per_metric[to_string(layout.metrics[m].kind)] = acc->clipped[m];
        clipped[name] = per_metric;
        if (layout.has_contingency()) contingency[name] = contingency_json(*acc);
    }
    summary["n_points"] = points;
    summary["clipped"] = clipped;
    if (layout.has_contingency()) summary["contingency"] = contingency;

    if (config.absolute_jacobian && full && boundary && layout.metric_index(MetricKind::HS) >= 0 &&
        full->n_points > 0) {
        const auto f = hs_integral(config, state, false);
        const auto b = hs_integral(config, state, true);
        const auto exact = exact_reference(config.dim());
        summary["hs_absolute"] = {{"volume", absolute_measure(f)},
                                  {"hyperarea", absolute_measure(b)},
                                  {"area_to_volume", numeric_area_to_volume(f, b)},
                                  {"exact_volume", exact.hs_volume},
                                  {"exact_area_to_volume", exact.area_to_volume_ratio},
                                  {"relative_error", qmc_area_to_volume_check(f, b)}};
    }
    return summary;
}

RunState run(const RunConfig& config, std::ostream& progress, bool overwrite) {
    config.validate();
    const RunFiles files{config.output_dir};
    fs::create_directories(files.dir);
    if (!overwrite && fs::exists(files.intervals()))
        throw ConfigError("run directory " + files.dir.string() +
                          " already holds an interval log (use resume, or overwrite)");
    write_json(files.config(), to_json(config));
    {
        std::ofstream log(files.intervals(), std::ios::trunc);
        log << interval_csv_header << '\n';
        std::ofstream sums(files.interval_sums(), std::ios::trunc);
        sums << interval_sums_csv_header << '\n';
    }
    fs::remove(files.checkpoint());
    Integrator integrator(config);
    // An initial checkpoint makes even the first interval resumable.
    checkpoint_save(config, integrator.state(), files.checkpoint());
    return execute(integrator, files, progress);
}

RunState resume(const fs::path& checkpoint_path, std::ostream& progress,
                const std::optional<fs::path>& config_path, std::optional<int> workers) {
    Checkpoint cp = checkpoint_load(checkpoint_path);
    const fs::path cfg_path = config_path ? *config_path : checkpoint_path.parent_path() / "config.json";
    RunConfig config = fs::exists(cfg_path) ? load_run_config(cfg_path) : cp.config;
    if (config_hash_hex(config) != cp.config_hash)
        throw CheckpointError("config " + cfg_path.string() +
                              " does not match the checkpoint (hash " + config_hash_hex(config) +
                              " vs " + cp.config_hash + "); refusing to resume");
    if (workers) config.workers = *workers;
    config.output_dir = checkpoint_path.parent_path().string();
    const RunFiles files{checkpoint_path.parent_path()};

    truncate_log(files.intervals(), cp.state.intervals_done);
    truncate_log(files.interval_sums(), cp.state.intervals_done);
    Integrator integrator(config, cp.state);
    if (integrator.done()) {
        progress << "run already complete; nothing to resume\n";
        write_json(files.summary(), run_summary(config, integrator.state()));
        return integrator.state();
    }
    return execute(integrator, files, progress);
}

std::vector<IntervalRow> read_interval_log(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open interval log " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != interval_csv_header)
        throw ConfigError("interval log " + path.string() + " lacks the expected header");
    std::vector<IntervalRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 8) throw ConfigError("malformed interval log row: " + line);
        rows.push_back({parse_int(f[0], path), parse_int(f[1], path), f[2], f[3], f[4],
                        parse_real(f[5], path), parse_real(f[6], path), parse_real(f[7], path)});
    }
    if (rows.empty()) throw ConfigError("interval log " + path.string() + " has no records");
    return rows;
}

namespace {

using SumsKey = std::tuple<std::int64_t, std::string, std::string, std::string, std::string>;

// (interval, stream, metric, criterion, convention) -> (sum_weight, sum_weight_pass), cumulative.
std::map<SumsKey, std::pair<double, double>> read_interval_sums(const fs::path& path) {
    std::map<SumsKey, std::pair<double, double>> sums;
    std::ifstream in(path);
    std::string line;
    if (!std::getline(in, line) || line != interval_sums_csv_header)
        throw ConfigError("interval sums " + path.string() + " lacks the expected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 8) throw ConfigError("malformed interval sums row: " + line);
        sums[{parse_int(f[0], path), f[2], f[3], f[4], f[5]}] = {parse_real(f[6], path),
                                                                 parse_real(f[7], path)};
    }
    return sums;
}

std::optional<std::vector<CellSums>> cumulative_cells(
    const std::map<SumsKey, std::pair<double, double>>& sums, std::int64_t interval,
    const std::string& metric, const std::string& criterion, const std::vector<std::string>& conventions) {
    std::vector<CellSums> cells;
    for (const auto& conv : conventions) {
        CellSums c;
        if (interval > 0) {
            const auto f = sums.find({interval, "full", metric, criterion, conv});
            const auto b = sums.find({interval, "boundary", metric, criterion, conv});
            if (f == sums.end() || b == sums.end()) return std::nullopt;
            c = {f->second.first, f->second.second, b->second.first, b->second.second};
        }
        cells.push_back(c);
    }
    return cells;
}

void write_series(std::ostream& out, const SeriesReport& s, const std::vector<SeriesPoint>& pts) {
    for (const auto& p : pts)
        out << s.metric << ',' << s.criterion << ',' << s.convention << ',' << p.interval << ','
            << format_real(p.value) << ',' << format_real(p.value - 2.0) << '\n';
}

}  // namespace

std::vector<SeriesReport> report(const fs::path& log_path, const EditRule& rule,
                                 const std::optional<fs::path>& out_dir, PoolingMode pooling) {
    rule.validate();
    const auto rows = read_interval_log(log_path);
    const fs::path dir = out_dir ? *out_dir : log_path.parent_path();
    const fs::path sums_path = log_path.parent_path() / "interval_sums.csv";
    std::optional<std::map<SumsKey, std::pair<double, double>>> sums;
    if (fs::exists(sums_path)) sums = read_interval_sums(sums_path);

    std::vector<SeriesReport> series;
    std::map<std::string, std::size_t> index;
    for (const auto& r : rows) {
        const std::string key = r.metric + ',' + r.criterion + ',' + r.convention;
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, series.size()).first;
            series.push_back({r.metric, r.criterion, r.convention, {}, {}, false});
        }
        auto& s = series[it->second];
        if (!s.unedited.empty() && r.interval <= s.unedited.back().interval)
            throw ConfigError("interval indices must increase within a series");
        s.unedited.push_back({r.interval, r.omega, {}});
    }

    for (auto& s : series) {
        if (sums) {
            const std::vector<std::string> convs =
                s.convention == "pooled" ? std::vector<std::string>{"inner", "outer"}
                                         : std::vector<std::string>{s.convention};
            std::vector<SeriesPoint> with_delta = s.unedited;
            bool complete = true;
            std::int64_t prev = 0;
            for (auto& p : with_delta) {
                const auto now = cumulative_cells(*sums, p.interval, s.metric, s.criterion, convs);
                const auto before = cumulative_cells(*sums, prev, s.metric, s.criterion, convs);
                if (!now || !before) {
                    complete = false;
                    break;
                }
                for (std::size_t c = 0; c < now->size(); ++c)
                    p.delta.push_back({(*now)[c].full_weight - (*before)[c].full_weight,
                                       (*now)[c].full_pass - (*before)[c].full_pass,
                                       (*now)[c].boundary_weight - (*before)[c].boundary_weight,
                                       (*now)[c].boundary_pass - (*before)[c].boundary_pass});
                prev = p.interval;
            }
            if (complete) {
                s.edited = edit_series(with_delta, rule, pooling);
                s.recomputed = true;
                continue;
            }
        }
        s.edited = edit_series(s.unedited, rule, pooling);
    }

    fs::create_directories(dir);
    const char* header = "metric,criterion,convention,interval,omega,omega_minus_2\n";
    std::ofstream unedited(dir / "series_unedited.csv", std::ios::trunc);
    std::ofstream edited(dir / "series_edited.csv", std::ios::trunc);
    std::ofstream discarded(dir / "discarded.csv", std::ios::trunc);
    unedited << header;
    edited << header;
    discarded << "metric,criterion,convention,interval\n";
    json summary = json::array();
    for (const auto& s : series) {
        write_series(unedited, s, s.unedited);
        write_series(edited, s, s.edited.kept);
        for (auto i : s.edited.discarded)
            discarded << s.metric << ',' << s.criterion << ',' << s.convention << ',' << i << '\n';
        auto last = [](const std::vector<SeriesPoint>& v) -> json {
            return v.empty() ? json(nullptr) : real_or_null(v.back().value);
        };
        summary.push_back({{"metric", s.metric},
                           {"criterion", s.criterion},
                           {"convention", s.convention},
                           {"final_unedited", last(s.unedited)},
                           {"final_edited", last(s.edited.kept)},
                           {"discarded", s.edited.discarded},
                           {"recomputed_from_sums", s.recomputed}});
    }
    write_json(dir / "report_summary.json",
               json{{"edit_rule", {{"window", rule.window}, {"threshold", rule.threshold}}},
                    {"pooling", to_string(pooling)},
                    {"series", summary}});
    return series;
}

void dump_points(const RunConfig& config, bool boundary, std::uint64_t start, std::uint64_t count,
                 std::ostream& out) {
    config.validate();
    const StreamSampler sampler(config, boundary);
    for (std::uint64_t i = 0; i < count; ++i) {
        const Point p = sampler.point(start + i);
        for (std::size_t k = 0; k < p.size(); ++k) out << (k ? "," : "") << format_real(p[k]);
        out << '\n';
    }
}

json show_state(const RunConfig& config, bool boundary, std::uint64_t index) {
    config.validate();
    const StreamSampler sampler(config, boundary);
    const Point p = sampler.point(index);
    const auto [rho, spectrum] = cube_to_state(p, config.dim(), boundary);
    json re = json::array(), im = json::array();
    for (int i = 0; i < rho.dim(); ++i) {
        json rr = json::array(), ii = json::array();
        for (int j = 0; j < rho.dim(); ++j) {
            rr.push_back(rho.entries(i, j).real());
            ii.push_back(rho.entries(i, j).imag());
        }
        re.push_back(rr);
        im.push_back(ii);
    }
    return json{{"index", index},
                {"stream", boundary ? "boundary" : "full"},
                {"d", config.dim()},
                {"coords", p},
                {"lambdas", spectrum.lambdas},
                {"real", re},
                {"imag", im}};
}

}  // namespace pptqmc
