#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pptqmc/accumulator.hpp"
#include "pptqmc/estimator.hpp"
#include "pptqmc/qmc_sequence.hpp"
#include "pptqmc/run_config.hpp"

namespace pptqmc {

/// Points per work unit. Blocks are merged in index order, so results do not
/// depend on how many threads evaluate them.
inline constexpr std::uint64_t chunk_size = 4096;

/// Produces the cube points and accumulates the outcome of one stream
/// (full rank or boundary) of a run.
class StreamSampler {
public:
    StreamSampler(const RunConfig& config, bool rank_deficient);

    int point_dimension() const { return point_dim_; }
    bool rank_deficient() const { return rank_deficient_; }
    const Layout& layout() const { return layout_; }

    /// Cube point `index` of this stream.
    Point point(std::uint64_t index) const;

    /// Serially accumulates indices [start, start + count).
    Accumulator evaluate(std::uint64_t start, std::uint64_t count) const;

    /// Chunked evaluation of [start, start + count) on `workers` threads.
    Accumulator evaluate_parallel(std::uint64_t start, std::uint64_t count, int workers) const;

    /// Adds the point with the given coordinates to `acc`.
    void accumulate_point(Accumulator& acc, std::span<const double> coords) const;

private:
    void fill(std::uint64_t start, std::uint64_t count, std::vector<double>& rows) const;

    int d_;
    int d_a_, d_b_;
    bool rank_deficient_;
    int point_dim_;
    Layout layout_;
    CriterionOptions criteria_;
    bool any_criterion_;
    double clip_threshold_;
    std::optional<FaureSequence> faure_;
    std::optional<PrngSequence> prng_;
};

/// Everything a run needs to continue: next point index and the cumulative
/// accumulators of each stream.
struct RunState {
    std::int64_t next_index = 0;
    std::int64_t intervals_done = 0;
    std::optional<Accumulator> full;
    std::optional<Accumulator> boundary;

    bool operator==(const RunState&) const = default;
};

RunState initial_state(const RunConfig& config);

/// Drives a run interval by interval.
class Integrator {
public:
    explicit Integrator(RunConfig config);
    Integrator(RunConfig config, RunState state);

    const RunConfig& config() const { return config_; }
    const Layout& layout() const { return layout_; }
    const RunState& state() const { return state_; }

    bool done() const { return state_.next_index >= config_.total_points; }

    /// Evaluates the next interval and returns its cumulative record.
    IntervalRecord step();

    IntervalRecord current_record() const;

private:
    RunConfig config_;
    Layout layout_;
    RunState state_;
    std::optional<StreamSampler> full_;
    std::optional<StreamSampler> boundary_;
};

}  // namespace pptqmc
