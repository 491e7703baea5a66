#include "pptqmc/accumulator.hpp"

#include <stdexcept>

#include "pptqmc/errors.hpp"

namespace pptqmc {

const char* to_string(Criterion c) { return c == Criterion::ppt ? "PPT" : "CN"; }

Layout Layout::make(int d_a, int d_b, std::vector<MetricSpec> metrics, bool ppt, bool cross_norm) {
    Layout layout;
    layout.d_a = d_a;
    layout.d_b = d_b;
    layout.metrics = std::move(metrics);
    if (ppt)
        for (auto c : conventions_for(d_a, d_b)) layout.cells.push_back({Criterion::ppt, c});
    if (cross_norm)
        layout.cells.push_back({Criterion::cross_norm, BlockConvention::transpose_inner_blocks});
    return layout;
}

bool Layout::has_contingency() const {
    return primary_ppt_cell() >= 0 &&
           cell_index(Criterion::cross_norm, BlockConvention::transpose_inner_blocks) >= 0;
}

int Layout::metric_index(MetricKind kind) const {
    for (std::size_t i = 0; i < metrics.size(); ++i)
        if (metrics[i].kind == kind) return static_cast<int>(i);
    return -1;
}

int Layout::cell_index(Criterion criterion, BlockConvention convention) const {
    for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i].criterion == criterion && cells[i].convention == convention)
            return static_cast<int>(i);
    return -1;
}

int Layout::primary_ppt_cell() const {
    return cell_index(Criterion::ppt, BlockConvention::transpose_inner_blocks);
}

CriterionOptions Layout::criterion_options(double ppt_tol, double cn_tol) const {
    CriterionOptions o;
    o.ppt = primary_ppt_cell() >= 0;
    o.cross_norm = cell_index(Criterion::cross_norm, BlockConvention::transpose_inner_blocks) >= 0;
    o.ppt_tol = ppt_tol;
    o.cn_tol = cn_tol;
    return o;
}

Accumulator::Accumulator(const Layout& layout)
    : sum_weight(layout.metrics.size()),
      sum_weight_sq(layout.metrics.size()),
      sum_weight_pass(layout.metrics.size() * layout.cells.size()),
      sum_weight_sq_pass(layout.metrics.size() * layout.cells.size()),
      clipped(layout.metrics.size(), 0) {}

std::int64_t Accumulator::clipped_count() const {
    std::int64_t total = 0;
    for (auto c : clipped) total += c;
    return total;
}

std::vector<bool> cell_passes(const Layout& layout, const CriterionOutcome& outcome) {
    std::vector<bool> passes(layout.cells.size(), false);
    for (std::size_t i = 0; i < layout.cells.size(); ++i) {
        const Cell& cell = layout.cells[i];
        if (cell.criterion == Criterion::cross_norm) {
            if (!outcome.has_cross_norm) throw std::logic_error("outcome lacks the cross-norm result");
            passes[i] = outcome.cross_norm.pass;
            continue;
        }
        bool found = false;
        for (std::size_t k = 0; k < outcome.conventions.size(); ++k)
            if (outcome.conventions[k] == cell.convention) {
                passes[i] = outcome.ppt[k].pass;
                found = true;
            }
        if (!found) throw std::logic_error("outcome lacks a PPT convention required by the layout");
    }
    return passes;
}

void accumulate(Accumulator& acc, std::span<const Weight> weights, const std::vector<bool>& passes,
                bool contingency_ppt, bool contingency_cn, bool has_contingency) {
    const std::size_t cells = acc.cell_count();
    if (weights.size() != acc.metric_count() || passes.size() != cells)
        throw DimensionError("point outcome does not match the accumulator layout");
    for (std::size_t m = 0; m < weights.size(); ++m) {
        const double w = weights[m].value;
        if (!(w >= 0.0)) throw std::logic_error("negative or NaN integration weight");
        if (weights[m].clipped) ++acc.clipped[m];
        acc.sum_weight[m].add(w);
        acc.sum_weight_sq[m].add(w * w);
        for (std::size_t c = 0; c < cells; ++c)
            if (passes[c]) {
                acc.sum_weight_pass[m * cells + c].add(w);
                acc.sum_weight_sq_pass[m * cells + c].add(w * w);
            }
    }
    if (has_contingency) ++acc.contingency[contingency_ppt ? 1 : 0][contingency_cn ? 1 : 0];
    ++acc.n_points;
}

void accumulate(Accumulator& acc, const Layout& layout, std::span<const Weight> weights,
                const CriterionOutcome& outcome) {
    const auto passes = cell_passes(layout, outcome);
    const int ppt_cell = layout.primary_ppt_cell();
    const bool has_table = layout.has_contingency();
    accumulate(acc, weights, passes, has_table && passes[ppt_cell],
               has_table && outcome.cross_norm.pass, has_table);
}

void merge_into(Accumulator& a, const Accumulator& b) {
    if (a.sum_weight.size() != b.sum_weight.size() ||
        a.sum_weight_pass.size() != b.sum_weight_pass.size())
        throw DimensionError("cannot merge accumulators with different layouts");
    a.n_points += b.n_points;
    for (std::size_t i = 0; i < a.sum_weight.size(); ++i) {
        a.sum_weight[i].merge(b.sum_weight[i]);
        a.sum_weight_sq[i].merge(b.sum_weight_sq[i]);
        a.clipped[i] += b.clipped[i];
    }
    for (std::size_t i = 0; i < a.sum_weight_pass.size(); ++i) {
        a.sum_weight_pass[i].merge(b.sum_weight_pass[i]);
        a.sum_weight_sq_pass[i].merge(b.sum_weight_sq_pass[i]);
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a.contingency[i][j] += b.contingency[i][j];
}

Accumulator merge(Accumulator a, const Accumulator& b) {
    merge_into(a, b);
    return a;
}

}  // namespace pptqmc
