#include "pptqmc/series_edit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pptqmc/errors.hpp"

namespace pptqmc {

void EditRule::validate() const {
    if (window < 3 || window % 2 == 0) throw ConfigError("edit window must be odd and >= 3");
    if (!(threshold > 0.0)) throw ConfigError("edit threshold must be positive");
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double cell_ratio(const CellSums& s) {
    if (!(s.full_weight > 0.0) || !(s.boundary_weight > 0.0)) return nan;
    const double den = s.boundary_pass / s.boundary_weight;
    if (!(den > 0.0)) return nan;
    return (s.full_pass / s.full_weight) / den;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double series_estimate(const std::vector<CellSums>& cumulative, PoolingMode pooling) {
    if (cumulative.size() == 1) return cell_ratio(cumulative[0]);
    if (cumulative.size() == 2) {
        const double a = cell_ratio(cumulative[0]);
        const double b = cell_ratio(cumulative[1]);
        if (std::isnan(a) || std::isnan(b)) return nan;
        return combine_conventions(a, b, cumulative[0].boundary_pass, cumulative[1].boundary_pass,
                                   pooling)
            .value_or(nan);
    }
    throw DimensionError("series deltas must hold one or two cells");
}

EditResult edit_series(const std::vector<SeriesPoint>& series, const EditRule& rule,
                       PoolingMode pooling) {
    rule.validate();
    EditResult result;
    std::vector<CellSums> kept_sums;
    std::vector<double> recent;  // finite kept values, oldest first

    for (const auto& point : series) {
        double candidate = point.value;
        std::vector<CellSums> trial;
        if (!point.delta.empty()) {
            trial = kept_sums.empty() ? std::vector<CellSums>(point.delta.size()) : kept_sums;
            if (trial.size() != point.delta.size())
                throw DimensionError("series deltas change shape between intervals");
            for (std::size_t c = 0; c < trial.size(); ++c) {
                trial[c].full_weight += point.delta[c].full_weight;
                trial[c].full_pass += point.delta[c].full_pass;
                trial[c].boundary_weight += point.delta[c].boundary_weight;
                trial[c].boundary_pass += point.delta[c].boundary_pass;
            }
            candidate = series_estimate(trial, pooling);
        }

        bool discard = false;
        if (std::isfinite(candidate) && !recent.empty()) {
            const std::size_t take = std::min<std::size_t>(recent.size(), rule.window);
            const double med = median_of({recent.end() - take, recent.end()});
            discard = std::abs(candidate - med) > rule.threshold * std::abs(med);
        }
        if (discard) {
            result.discarded.push_back(point.interval);
            continue;
        }
        if (!point.delta.empty()) kept_sums = std::move(trial);
        if (std::isfinite(candidate)) recent.push_back(candidate);
        result.kept.push_back({point.interval, candidate, point.delta});
    }
    return result;
}

}  // namespace pptqmc
