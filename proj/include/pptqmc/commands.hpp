#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptqmc/engine.hpp"
#include "pptqmc/run_config.hpp"
#include "pptqmc/series_edit.hpp"

namespace pptqmc {

/// Files of a run directory.
struct RunFiles {
    std::filesystem::path dir;

    std::filesystem::path config() const { return dir / "config.json"; }
    std::filesystem::path intervals() const { return dir / "intervals.csv"; }
    std::filesystem::path interval_sums() const { return dir / "interval_sums.csv"; }
    std::filesystem::path summary() const { return dir / "summary.json"; }
    std::filesystem::path checkpoint() const { return dir / "checkpoint.json"; }
};

/// Runs `config` to completion in config.output_dir: writes the effective
/// config, the interval log and sums, periodic checkpoints, and the summary.
/// Progress goes to `progress`. Refuses to overwrite an existing log unless
/// `overwrite` is set.
RunState run(const RunConfig& config, std::ostream& progress, bool overwrite = false);

/// Continues the run saved in `checkpoint_path`. The config is read from
/// `config_path` (default: config.json next to the checkpoint) and must hash
/// to the checkpoint's value. `workers` may differ from the original run.
RunState resume(const std::filesystem::path& checkpoint_path, std::ostream& progress,
                const std::optional<std::filesystem::path>& config_path = std::nullopt,
                std::optional<int> workers = std::nullopt);

/// Final summary of a finished (or partial) run.
nlohmann::json run_summary(const RunConfig& config, const RunState& state);

/// One parsed row of an interval log.
struct IntervalRow {
    std::int64_t interval = 0;
    std::int64_t n_points = 0;
    std::string metric, criterion, convention;
    double prob_full = 0.0, prob_boundary = 0.0, omega = 0.0;
};

std::vector<IntervalRow> read_interval_log(const std::filesystem::path& path);

struct SeriesReport {
    std::string metric, criterion, convention;
    std::vector<SeriesPoint> unedited;
    EditResult edited;
    /// True when the edited values were recomputed from interval sums.
    bool recomputed = false;
};

/// Edits every series of an interval log and writes series_unedited.csv,
/// series_edited.csv, discarded.csv and report_summary.json into `out_dir`
/// (default: the log's directory). Uses interval_sums.csv next to the log when
/// present.
std::vector<SeriesReport> report(const std::filesystem::path& log_path, const EditRule& rule,
                                 const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                                 PoolingMode pooling = PoolingMode::pass_weighted);

/// Writes stream points as CSV, one point per row, shortest round-trip decimals.
void dump_points(const RunConfig& config, bool boundary, std::uint64_t start, std::uint64_t count,
                 std::ostream& out);

/// Assembled state of one stream point as JSON (real and imaginary parts).
nlohmann::json show_state(const RunConfig& config, bool boundary, std::uint64_t index);

}  // namespace pptqmc
