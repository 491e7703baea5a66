#pragma once

#include <cstdint>
#include <vector>

#include "pptqmc/estimator.hpp"

namespace pptqmc {

/// Discard rule for large fluctuations in a cumulative series.
struct EditRule {
    /// Running-median window over previously kept values; odd, >= 3.
    int window = 5;
    /// Maximum |estimate - median| as a fraction of the median.
    double threshold = 0.5;

    void validate() const;
};

/// Interval-level sums of one (metric, cell) pair, both streams.
struct CellSums {
    double full_weight = 0.0;
    double full_pass = 0.0;
    double boundary_weight = 0.0;
    double boundary_pass = 0.0;
};

/// One interval of a cumulative ratio series. When `delta` is non-empty it
/// holds that interval's own sums (one cell, or inner+outer for a pooled
/// series) and edited values are recomputed from the kept deltas; otherwise
/// values are taken as given.
struct SeriesPoint {
    std::int64_t interval = 0;
    double value = 0.0;
    std::vector<CellSums> delta;
};

struct EditResult {
    std::vector<SeriesPoint> kept;
    std::vector<std::int64_t> discarded;
};

/// Ratio implied by cumulative cell sums (pooled when two cells are given).
double series_estimate(const std::vector<CellSums>& cumulative, PoolingMode pooling);

/// Walks the series once. An interval is discarded when its cumulative
/// estimate (kept intervals plus itself) deviates from the median of the last
/// `window` kept finite values by more than `threshold` times that median.
/// Deterministic and idempotent.
EditResult edit_series(const std::vector<SeriesPoint>& series, const EditRule& rule,
                       PoolingMode pooling = PoolingMode::pass_weighted);

}  // namespace pptqmc
