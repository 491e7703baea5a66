#include "pptqmc/estimator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "pptqmc/errors.hpp"

namespace pptqmc {

const char* to_string(PoolingMode mode) {
    return mode == PoolingMode::pass_weighted ? "pass_weighted" : "arithmetic";
}

PoolingMode pooling_mode_from_string(const std::string& name) {
    if (name == "pass_weighted") return PoolingMode::pass_weighted;
    if (name == "arithmetic") return PoolingMode::arithmetic;
    throw ConfigError("unknown pooling mode '" + name + "'");
}

std::optional<double> probability(const Accumulator& acc, std::size_t metric, std::size_t cell) {
    const double total = acc.sum_weight.at(metric).value();
    if (!(total > 0.0)) return std::nullopt;
    const double p = acc.pass(metric, cell).value() / total;
    return std::clamp(p, 0.0, 1.0);
}

std::optional<double> standard_error(const Accumulator& acc, std::size_t metric, std::size_t cell) {
    const auto p = probability(acc, metric, cell);
    if (!p) return std::nullopt;
    const double total = acc.sum_weight[metric].value();
    const double sq_all = acc.sum_weight_sq[metric].value();
    const double sq_pass = acc.sum_weight_sq_pass[metric * acc.cell_count() + cell].value();
    // sum w^2 (I - p)^2 = sq_pass (1 - p)^2 + (sq_all - sq_pass) p^2
    const double var = sq_pass * (1 - *p) * (1 - *p) + (sq_all - sq_pass) * (*p) * (*p);
    return std::sqrt(std::max(var, 0.0)) / total;
}

std::optional<double> omega(const Accumulator& full, const Accumulator& boundary,
                            std::size_t metric, std::size_t cell) {
    const auto num = probability(full, metric, cell);
    const auto den = probability(boundary, metric, cell);
    if (!num || !den || !(*den > 0.0)) return std::nullopt;
    return *num / *den;
}

std::optional<double> combine_conventions(double omega_inner, double omega_outer,
                                          double weight_inner, double weight_outer,
                                          PoolingMode mode) {
    if (mode == PoolingMode::arithmetic) return 0.5 * (omega_inner + omega_outer);
    const double total = weight_inner + weight_outer;
    if (!(total > 0.0)) return std::nullopt;
    return (weight_inner * omega_inner + weight_outer * omega_outer) / total;
}

std::optional<double> pooled_omega(const Accumulator& full, const Accumulator& boundary,
                                   const Layout& layout, std::size_t metric, PoolingMode mode) {
    if (layout.d_a == layout.d_b)
        throw NotApplicable("pooling needs two inequivalent conventions (N != M)");
    const int inner = layout.cell_index(Criterion::ppt, BlockConvention::transpose_inner_blocks);
    const int outer = layout.cell_index(Criterion::ppt, BlockConvention::transpose_outer_blocks);
    if (inner < 0 || outer < 0) throw NotApplicable("layout does not track both PPT conventions");
    const auto a = omega(full, boundary, metric, inner);
    const auto b = omega(full, boundary, metric, outer);
    if (!a || !b) return std::nullopt;
    return combine_conventions(*a, *b, boundary.pass(metric, inner).value(),
                               boundary.pass(metric, outer).value(), mode);
}

IntervalRecord make_record(std::int64_t interval_index, std::int64_t points_per_interval,
                           const Layout& layout, const Accumulator* full,
                           const Accumulator* boundary, PoolingMode pooling) {
    IntervalRecord rec;
    rec.interval_index = interval_index;
    rec.points_per_interval = points_per_interval;
    rec.n_points = full ? full->n_points : (boundary ? boundary->n_points : 0);

    const bool has_pooled = layout.d_a != layout.d_b &&
        layout.cell_index(Criterion::ppt, BlockConvention::transpose_outer_blocks) >= 0;
    for (std::size_t m = 0; m < layout.metrics.size(); ++m) {
        const MetricSpec& metric = layout.metrics[m];
        // Monotone densities do not exist on the boundary.
        const bool boundary_defined = boundary && metric.kind == MetricKind::HS;
        for (std::size_t c = 0; c < layout.cells.size(); ++c) {
            SeriesValue v;
            v.metric = metric.kind;
            v.criterion = layout.cells[c].criterion;
            v.convention = to_string(layout.cells[c].convention);
            if (full) v.prob_full = probability(*full, m, c);
            if (boundary_defined) v.prob_boundary = probability(*boundary, m, c);
            if (full && boundary_defined) v.omega = omega(*full, *boundary, m, c);
            rec.values.push_back(std::move(v));
        }
        if (has_pooled) {
            SeriesValue v;
            v.metric = metric.kind;
            v.criterion = Criterion::ppt;
            v.convention = "pooled";
            if (full && boundary_defined) v.omega = pooled_omega(*full, *boundary, layout, m, pooling);
            rec.values.push_back(std::move(v));
        }
    }
    return rec;
}

std::string format_real(std::optional<double> x) {
    if (!x || std::isnan(*x)) return "nan";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *x);
    if (ec != std::errc()) throw std::runtime_error("to_chars failed");
    return std::string(buf, end);
}

void write_interval_rows(std::ostream& out, const IntervalRecord& record) {
    for (const auto& v : record.values)
        out << record.interval_index << ',' << record.n_points << ',' << to_string(v.metric) << ','
            << to_string(v.criterion) << ',' << v.convention << ',' << format_real(v.prob_full)
            << ',' << format_real(v.prob_boundary) << ',' << format_real(v.omega) << '\n';
}

std::vector<std::int64_t> interval_boundaries(std::int64_t total_points, std::int64_t every_n_points) {
    if (every_n_points <= 0) throw ConfigError("points per interval must be positive");
    if (total_points < 0) throw ConfigError("total points must be non-negative");
    std::vector<std::int64_t> ends;
    for (std::int64_t end = every_n_points; end < total_points; end += every_n_points)
        ends.push_back(end);
    if (total_points > 0) ends.push_back(total_points);
    return ends;
}

void write_interval_sums(std::ostream& out, std::int64_t interval_index, const Layout& layout,
                         const Accumulator* full, const Accumulator* boundary) {
    auto emit = [&](const char* stream, const Accumulator* acc) {
        if (!acc) return;
        for (std::size_t m = 0; m < layout.metrics.size(); ++m)
            for (std::size_t c = 0; c < layout.cells.size(); ++c)
                out << interval_index << ',' << acc->n_points << ',' << stream << ','
                    << to_string(layout.metrics[m].kind) << ',' << to_string(layout.cells[c].criterion)
                    << ',' << to_string(layout.cells[c].convention) << ','
                    << format_real(acc->sum_weight[m].value()) << ','
                    << format_real(acc->pass(m, c).value()) << '\n';
    };
    emit("full", full);
    emit("boundary", boundary);
}

}  // namespace pptqmc
