#include "pptqmc/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "pptqmc/errors.hpp"
#include "pptqmc/state_param.hpp"

namespace pptqmc {

namespace {

constexpr std::uint64_t independent_seed_offset = 0x9e3779b97f4a7c15ULL;

}  // namespace

StreamSampler::StreamSampler(const RunConfig& config, bool rank_deficient)
    : d_(config.dim()),
      d_a_(config.d_a),
      d_b_(config.d_b),
      rank_deficient_(rank_deficient),
      point_dim_(state_coordinate_count(config.dim(), rank_deficient)),
      layout_(config.layout()),
      criteria_(layout_.criterion_options(config.ppt_tol, config.cn_tol)),
      any_criterion_(criteria_.ppt || criteria_.cross_norm),
      clip_threshold_(config.clip_threshold) {
    const int full_dim = state_coordinate_count(d_, false);
    const auto& seq = config.sequence;
    const bool independent = rank_deficient && seq.boundary == BoundaryStream::independent;
    if (seq.kind == SequenceKind::faure) {
        SequenceConfig sc;
        sc.scrambling = seq.scrambling;
        sc.seed = independent ? seq.seed + independent_seed_offset : seq.seed;
        sc.skip = seq.skip;
        if (independent) {
            sc.dimension = point_dim_;
        } else {
            sc.dimension = full_dim;
            sc.base = seq.base;
            if (rank_deficient) {
                std::vector<int> subset(point_dim_);
                for (int i = 0; i < point_dim_; ++i) subset[i] = i;
                sc.coordinate_subset = subset;
            }
        }
        faure_.emplace(sc);
    } else {
        prng_.emplace(independent ? seq.seed + independent_seed_offset : seq.seed,
                      independent ? point_dim_ : full_dim);
    }
}

void StreamSampler::fill(std::uint64_t start, std::uint64_t count, std::vector<double>& rows) const {
    rows.resize(count * point_dim_);
    if (faure_) {
        for (std::uint64_t i = 0; i < count; ++i)
            faure_->point_into(start + i, std::span<double>(rows.data() + i * point_dim_, point_dim_));
        return;
    }
    // Prng points may carry more coordinates than this stream uses (subset mode).
    const auto points = prng_->stream(start, count);
    for (std::uint64_t i = 0; i < count; ++i)
        std::copy_n(points[i].begin(), point_dim_, rows.begin() + i * point_dim_);
}

Point StreamSampler::point(std::uint64_t index) const {
    std::vector<double> row;
    fill(index, 1, row);
    return row;
}

void StreamSampler::accumulate_point(Accumulator& acc, std::span<const double> coords) const {
    const int ns = simplex_coordinate_count(d_, rank_deficient_);
    SpectrumPoint spectrum = simplex_from_cube(coords.first(ns), rank_deficient_);

    std::vector<Weight> weights(layout_.metrics.size());
    for (std::size_t m = 0; m < weights.size(); ++m) {
        if (rank_deficient_ && layout_.metrics[m].kind != MetricKind::HS) continue;
        weights[m] = weight(spectrum, layout_.metrics[m], clip_threshold_);
    }

    CriterionOutcome outcome;
    if (any_criterion_) {
        const UnitaryMatrix u = unitary_from_cube(coords.subspan(ns), d_);
        const DensityMatrix rho = assemble_state(spectrum, u);
        outcome = evaluate_criteria(rho, d_a_, d_b_, criteria_);
    }
    accumulate(acc, layout_, weights, outcome);
}

Accumulator StreamSampler::evaluate(std::uint64_t start, std::uint64_t count) const {
    Accumulator acc(layout_);
    std::vector<double> rows;
    fill(start, count, rows);
    for (std::uint64_t i = 0; i < count; ++i)
        accumulate_point(acc, std::span<const double>(rows.data() + i * point_dim_, point_dim_));
    return acc;
}

Accumulator StreamSampler::evaluate_parallel(std::uint64_t start, std::uint64_t count,
                                             int workers) const {
    const std::uint64_t n_chunks = (count + chunk_size - 1) / chunk_size;
    std::vector<Accumulator> parts(n_chunks);
    auto run_chunk = [&](std::uint64_t k) {
        const std::uint64_t begin = start + k * chunk_size;
        const std::uint64_t len = std::min(chunk_size, start + count - begin);
        parts[k] = evaluate(begin, len);
    };

    const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
    if (threads == 1 || n_chunks <= 1) {
        for (std::uint64_t k = 0; k < n_chunks; ++k) run_chunk(k);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::uint64_t t = 0; t < std::min(threads, n_chunks); ++t)
            pool.emplace_back([&] {
                for (std::uint64_t k = next++; k < n_chunks; k = next++) {
                    try {
                        run_chunk(k);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    Accumulator total(layout_);
    for (const auto& part : parts) merge_into(total, part);
    return total;
}

RunState initial_state(const RunConfig& config) {
    RunState s;
    const Layout layout = config.layout();
    if (config.has_full()) s.full.emplace(layout);
    if (config.has_boundary()) s.boundary.emplace(layout);
    return s;
}

Integrator::Integrator(RunConfig config) : Integrator(config, initial_state(config)) {}

Integrator::Integrator(RunConfig config, RunState state)
    : config_(std::move(config)), layout_(config_.layout()), state_(std::move(state)) {
    config_.validate();
    if (config_.has_full() != state_.full.has_value() ||
        config_.has_boundary() != state_.boundary.has_value())
        throw ConfigError("run state does not match the rank mode");
    if (config_.has_full()) full_.emplace(config_, false);
    if (config_.has_boundary()) boundary_.emplace(config_, true);
}

IntervalRecord Integrator::step() {
    if (done()) throw std::logic_error("run already complete");
    const std::int64_t start = state_.next_index;
    const std::int64_t count = std::min(config_.points_per_interval, config_.total_points - start);
    if (full_)
        merge_into(*state_.full, full_->evaluate_parallel(start, count, config_.workers));
    if (boundary_)
        merge_into(*state_.boundary, boundary_->evaluate_parallel(start, count, config_.workers));
    state_.next_index = start + count;
    ++state_.intervals_done;
    return current_record();
}

IntervalRecord Integrator::current_record() const {
    IntervalRecord rec = make_record(state_.intervals_done, config_.points_per_interval, layout_,
                                     state_.full ? &*state_.full : nullptr,
                                     state_.boundary ? &*state_.boundary : nullptr, config_.pooling);
    rec.timestamp = std::chrono::duration<double>(
                        std::chrono::system_clock::now().time_since_epoch())
                        .count();
    return rec;
}

}  // namespace pptqmc
