#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pptqmc/accumulator.hpp"

namespace pptqmc {

/// How the two per-convention ratios are combined for N != M.
enum class PoolingMode {
    /// Each convention's ratio weighted by its boundary pass-weight.
    pass_weighted,
    arithmetic,
};

const char* to_string(PoolingMode mode);
PoolingMode pooling_mode_from_string(const std::string& name);

/// sum_weight_pass / sum_weight, or nullopt while the total weight is zero.
std::optional<double> probability(const Accumulator& acc, std::size_t metric, std::size_t cell);

/// Standard error of the weighted-mean estimate under i.i.d. sampling,
/// sqrt(sum w^2 (I - p)^2) / sum w. Used as a precision proxy for QMC runs.
std::optional<double> standard_error(const Accumulator& acc, std::size_t metric, std::size_t cell);

/// Full-rank probability over boundary probability; nullopt when either is
/// undefined or the boundary probability is zero.
std::optional<double> omega(const Accumulator& full, const Accumulator& boundary,
                            std::size_t metric, std::size_t cell);

std::optional<double> combine_conventions(double omega_inner, double omega_outer,
                                          double weight_inner, double weight_outer,
                                          PoolingMode mode);

/// Pooled PPT ratio over both block conventions. Throws NotApplicable for N = M.
std::optional<double> pooled_omega(const Accumulator& full, const Accumulator& boundary,
                                   const Layout& layout, std::size_t metric,
                                   PoolingMode mode = PoolingMode::pass_weighted);

/// One row of the interval log: a (metric, criterion, convention) series value.
struct SeriesValue {
    MetricKind metric = MetricKind::HS;
    Criterion criterion = Criterion::ppt;
    std::string convention;  // "inner", "outer" or "pooled"
    std::optional<double> prob_full;
    std::optional<double> prob_boundary;
    std::optional<double> omega;

    bool operator==(const SeriesValue&) const = default;
};

struct IntervalRecord {
    std::int64_t interval_index = 0;  // 1-based
    std::int64_t points_per_interval = 0;
    /// Cumulative points per stream when the record was taken.
    std::int64_t n_points = 0;
    std::vector<SeriesValue> values;
    /// Wall-clock seconds since the epoch; not part of the CSV.
    double timestamp = 0.0;
};

/// Builds a cumulative record from the full accumulators. Either stream may be
/// absent (single-stream runs); missing sides log as nan.
IntervalRecord make_record(std::int64_t interval_index, std::int64_t points_per_interval,
                           const Layout& layout, const Accumulator* full,
                           const Accumulator* boundary, PoolingMode pooling);

inline constexpr const char* interval_csv_header =
    "interval,n_points,metric,criterion,convention,prob_full,prob_boundary,omega";

/// Shortest round-tripping decimal for doubles, "nan" for undefined values.
std::string format_real(std::optional<double> x);

void write_interval_rows(std::ostream& out, const IntervalRecord& record);

/// Splits a run into interval blocks: records after every `every_n_points`
/// points and once more for a final partial block.
std::vector<std::int64_t> interval_boundaries(std::int64_t total_points, std::int64_t every_n_points);

/// Cumulative sums behind a record, one row per (stream, metric, cell). Lets
/// the report recompute edited series from interval deltas.
inline constexpr const char* interval_sums_csv_header =
    "interval,n_points,stream,metric,criterion,convention,sum_weight,sum_weight_pass";

void write_interval_sums(std::ostream& out, std::int64_t interval_index, const Layout& layout,
                         const Accumulator* full, const Accumulator* boundary);

}  // namespace pptqmc
