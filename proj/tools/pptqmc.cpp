// Command-line front end: run, resume, report, validate, dump-points, show-state.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pptqmc/commands.hpp"
#include "pptqmc/errors.hpp"
#include "pptqmc/validation.hpp"

namespace {

using nlohmann::json;

/// Config-file fields that may be overridden from the command line. Unset
/// options leave the file (or default) value untouched.
struct Overrides {
    std::string config_path;
    std::optional<int> d_a, d_b, workers;
    std::optional<std::int64_t> total_points, points_per_interval, checkpoint_every;
    std::optional<std::string> rank_mode, sequence, scrambling, boundary_stream, pooling, output;
    std::optional<std::uint64_t> seed, skip;
    std::vector<std::string> metrics, criteria;
    std::optional<double> ppt_tol, cn_tol;
    bool absolute = false;

    void add_to(CLI::App* app) {
        app->add_option("-c,--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        app->add_option("--d-a", d_a, "dimension of the first factor");
        app->add_option("--d-b", d_b, "dimension of the second factor");
        app->add_option("--rank-mode", rank_mode, "full, boundary or paired");
        app->add_option("--metric", metrics, "metric name (repeatable)");
        app->add_option("--criteria", criteria, "PPT and/or CN");
        app->add_option("--sequence", sequence, "faure or prng");
        app->add_option("--scrambling", scrambling, "none or digit_permutation");
        app->add_option("--boundary-stream", boundary_stream, "subset or independent");
        app->add_option("--seed", seed, "sequence seed");
        app->add_option("--skip", skip, "leading sequence points to skip");
        app->add_option("-n,--points", total_points, "points per stream");
        app->add_option("--interval", points_per_interval, "points per logged interval");
        app->add_option("--checkpoint-every", checkpoint_every, "intervals between checkpoints");
        app->add_option("--ppt-tol", ppt_tol, "PPT eigenvalue tolerance");
        app->add_option("--cn-tol", cn_tol, "cross-norm tolerance");
        app->add_option("--pooling", pooling, "pass_weighted or arithmetic");
        app->add_option("-j,--workers", workers, "worker threads");
        app->add_option("-o,--output", output, "run directory");
        app->add_flag("--absolute", absolute, "enable absolute-measure HS integrals");
    }

    pptqmc::RunConfig resolve() const {
        json j = config_path.empty() ? pptqmc::to_json(pptqmc::RunConfig{})
                                     : pptqmc::to_json(pptqmc::load_run_config(config_path));
        if (d_a) j["d_a"] = *d_a;
        if (d_b) j["d_b"] = *d_b;
        if (rank_mode) j["rank_mode"] = *rank_mode;
        if (!metrics.empty()) j["metrics"] = metrics;
        if (!criteria.empty()) j["criteria"] = criteria;
        if (sequence) j["sequence"]["kind"] = *sequence;
        if (scrambling) j["sequence"]["scrambling"] = *scrambling;
        if (boundary_stream) j["sequence"]["boundary_stream"] = *boundary_stream;
        if (seed) j["sequence"]["seed"] = *seed;
        if (skip) j["sequence"]["skip"] = *skip;
        if (total_points) j["total_points"] = *total_points;
        if (points_per_interval) j["points_per_interval"] = *points_per_interval;
        if (checkpoint_every) j["checkpoint_every"] = *checkpoint_every;
        if (ppt_tol) j["ppt_tol"] = *ppt_tol;
        if (cn_tol) j["cn_tol"] = *cn_tol;
        if (pooling) j["pooling"] = *pooling;
        if (workers) j["workers"] = *workers;
        if (output) j["output_dir"] = *output;
        if (absolute) j["absolute_jacobian"] = true;
        pptqmc::RunConfig config = pptqmc::run_config_from_json(j);
        config.validate();
        return config;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"QMC estimation of PPT probability ratios for bipartite density matrices"};
    app.require_subcommand(1);

    Overrides run_opts;
    bool overwrite = false;
    auto* run_cmd = app.add_subcommand("run", "integrate a fresh run");
    run_opts.add_to(run_cmd);
    run_cmd->add_flag("--overwrite", overwrite, "replace an existing run directory's logs");

    std::string checkpoint_path, resume_config;
    std::optional<int> resume_workers;
    auto* resume_cmd = app.add_subcommand("resume", "continue a run from its checkpoint");
    resume_cmd->add_option("checkpoint", checkpoint_path, "checkpoint file")->required();
    resume_cmd->add_option("-c,--config", resume_config, "config to check against the checkpoint");
    resume_cmd->add_option("-j,--workers", resume_workers, "worker threads");

    std::string log_path, report_out, report_pooling = "pass_weighted";
    pptqmc::EditRule rule;
    auto* report_cmd = app.add_subcommand("report", "edited and unedited series from an interval log");
    report_cmd->add_option("log", log_path, "intervals.csv")->required();
    report_cmd->add_option("-o,--output", report_out, "output directory (default: next to the log)");
    report_cmd->add_option("--window", rule.window, "running-median window");
    report_cmd->add_option("--threshold", rule.threshold, "relative discard threshold");
    report_cmd->add_option("--pooling", report_pooling, "pass_weighted or arithmetic");

    pptqmc::ValidationOptions vopt;
    std::string validate_out;
    auto* validate_cmd = app.add_subcommand("validate", "built-in correctness checks");
    validate_cmd->add_option("--area-points", vopt.area_points);
    validate_cmd->add_option("--area-points-d4", vopt.area_points_d4);
    validate_cmd->add_option("--qmc-points", vopt.qmc_points);
    validate_cmd->add_option("--oracle-draws", vopt.oracle_draws);
    validate_cmd->add_option("--property-instances", vopt.property_instances);
    validate_cmd->add_option("--seed", vopt.seed);
    validate_cmd->add_option("-j,--workers", vopt.workers);
    validate_cmd->add_option("-o,--output", validate_out, "write the JSON report here");

    Overrides dump_opts;
    bool dump_boundary = false;
    std::uint64_t dump_start = 0, dump_count = 10;
    auto* dump_cmd = app.add_subcommand("dump-points", "print raw cube points as CSV");
    dump_opts.add_to(dump_cmd);
    dump_cmd->add_flag("--boundary", dump_boundary, "boundary stream");
    dump_cmd->add_option("--start", dump_start);
    dump_cmd->add_option("--count", dump_count);

    Overrides show_opts;
    bool show_boundary = false;
    std::uint64_t show_index = 0;
    auto* show_cmd = app.add_subcommand("show-state", "print the density matrix for one index");
    show_opts.add_to(show_cmd);
    show_cmd->add_flag("--boundary", show_boundary, "boundary stream");
    show_cmd->add_option("--index", show_index);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            pptqmc::run(run_opts.resolve(), std::cerr, overwrite);
        } else if (*resume_cmd) {
            std::optional<std::filesystem::path> cfg;
            if (!resume_config.empty()) cfg = resume_config;
            pptqmc::resume(checkpoint_path, std::cerr, cfg, resume_workers);
        } else if (*report_cmd) {
            std::optional<std::filesystem::path> out;
            if (!report_out.empty()) out = report_out;
            const auto series =
                pptqmc::report(log_path, rule, out, pptqmc::pooling_mode_from_string(report_pooling));
            for (const auto& s : series)
                std::cout << s.metric << ' ' << s.criterion << ' ' << s.convention << ": "
                          << s.edited.discarded.size() << " discarded, final "
                          << pptqmc::format_real(s.edited.kept.empty()
                                                     ? std::nullopt
                                                     : std::optional<double>(s.edited.kept.back().value))
                          << '\n';
        } else if (*validate_cmd) {
            const auto checks = pptqmc::run_validation(vopt);
            for (const auto& c : checks)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
            json rep = pptqmc::validation_report(checks);
            const json diag = pptqmc::boundary_measure_comparison(vopt.qmc_points, vopt.oracle_draws,
                                                                  vopt.seed, vopt.workers);
            std::cout << "INFO " << diag["name"].get<std::string>() << "  qmc "
                      << diag["qmc_boundary_probability"] << ", ginibre "
                      << diag["ginibre_rank3_probability"] << ", z " << diag["z"] << '\n';
            rep["diagnostics"] = json::array({diag});
            if (!validate_out.empty()) std::ofstream(validate_out) << rep.dump(2) << '\n';
            return rep["pass"].get<bool>() ? 0 : 1;
        } else if (*dump_cmd) {
            pptqmc::dump_points(dump_opts.resolve(), dump_boundary, dump_start, dump_count, std::cout);
        } else if (*show_cmd) {
            std::cout << pptqmc::show_state(show_opts.resolve(), show_boundary, show_index).dump(2) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
