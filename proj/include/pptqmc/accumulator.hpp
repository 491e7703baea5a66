#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pptqmc/criteria.hpp"
#include "pptqmc/measures.hpp"

namespace pptqmc {

/// Neumaier (improved Kahan) summation. Merging adds the partner's running
/// sum and carries its compensation.
class CompensatedSum {
public:
    CompensatedSum() = default;
    CompensatedSum(double sum, double compensation) : sum_(sum), comp_(compensation) {}

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void merge(const CompensatedSum& other) {
        add(other.sum_);
        comp_ += other.comp_;
    }
    double value() const { return sum_ + comp_; }
    double raw_sum() const { return sum_; }
    double compensation() const { return comp_; }

    bool operator==(const CompensatedSum&) const = default;

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

enum class Criterion { ppt, cross_norm };
const char* to_string(Criterion c);

/// One tracked (criterion, convention) pair.
struct Cell {
    Criterion criterion = Criterion::ppt;
    BlockConvention convention = BlockConvention::transpose_inner_blocks;
};

/// What an accumulator tracks: metrics x cells, plus the split it refers to.
struct Layout {
    int d_a = 2;
    int d_b = 2;
    std::vector<MetricSpec> metrics;
    std::vector<Cell> cells;

    static Layout make(int d_a, int d_b, std::vector<MetricSpec> metrics, bool ppt, bool cross_norm);

    int dim() const { return d_a * d_b; }
    /// PPT x cross-norm counts need both criteria.
    bool has_contingency() const;
    int metric_index(MetricKind kind) const;  // -1 when absent
    int cell_index(Criterion criterion, BlockConvention convention) const;  // -1 when absent
    /// Index of the PPT cell used for the contingency table (inner convention).
    int primary_ppt_cell() const;
    CriterionOptions criterion_options(double ppt_tol, double cn_tol) const;
};

/// Mergeable weighted sums for one stream (full rank or boundary).
/// contingency[ppt_pass][cn_pass] counts points, unweighted.
struct Accumulator {
    std::int64_t n_points = 0;
    std::vector<CompensatedSum> sum_weight;        // [metric]
    std::vector<CompensatedSum> sum_weight_sq;     // [metric]
    std::vector<CompensatedSum> sum_weight_pass;   // [metric * cells + cell]
    std::vector<CompensatedSum> sum_weight_sq_pass;
    std::array<std::array<std::int64_t, 2>, 2> contingency{};
    std::vector<std::int64_t> clipped;             // [metric]

    Accumulator() = default;
    explicit Accumulator(const Layout& layout);

    std::size_t metric_count() const { return sum_weight.size(); }
    std::size_t cell_count() const {
        return sum_weight.empty() ? 0 : sum_weight_pass.size() / sum_weight.size();
    }
    const CompensatedSum& pass(std::size_t metric, std::size_t cell) const {
        return sum_weight_pass[metric * cell_count() + cell];
    }
    std::int64_t clipped_count() const;

    bool operator==(const Accumulator&) const = default;
};

/// Per-cell pass flags of one evaluated point, in layout order.
std::vector<bool> cell_passes(const Layout& layout, const CriterionOutcome& outcome);

/// Adds one point. Weights are parallel to layout.metrics and must be >= 0.
void accumulate(Accumulator& acc, const Layout& layout, std::span<const Weight> weights,
                const CriterionOutcome& outcome);
void accumulate(Accumulator& acc, std::span<const Weight> weights, const std::vector<bool>& passes,
                bool contingency_ppt, bool contingency_cn, bool has_contingency);

/// a += b. Layout dimensions must agree.
void merge_into(Accumulator& a, const Accumulator& b);
Accumulator merge(Accumulator a, const Accumulator& b);

}  // namespace pptqmc
