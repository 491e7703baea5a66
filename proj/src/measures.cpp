#include "pptqmc/measures.hpp"

#include <algorithm>
#include <cmath>

#include "pptqmc/errors.hpp"

namespace pptqmc {

namespace {

double power_mean(double x, double y, double p) {
    if (p == 0.0) return std::sqrt(x * y);
    if (p == 1.0) return 0.5 * (x + y);
    if (p == -1.0) return 2.0 * x * y / (x + y);
    return std::pow(0.5 * (std::pow(x, p) + std::pow(y, p)), 1.0 / p);
}

}  // namespace

double kubo_mori_kernel(double x, double y) {
    const double diff = x - y;
    const double sum = x + y;
    if (std::abs(diff) < 1e-6 * sum) {
        // (ln x - ln y)/(x - y) = (1/m) atanh(r)/r, m = (x+y)/2, r = (x-y)/(x+y)
        const double m = 0.5 * sum;
        const double r2 = (diff / sum) * (diff / sum);
        return (1.0 + r2 / 3.0 + r2 * r2 / 5.0) / m;
    }
    // x - y is exact near the diagonal; log1p keeps ln(x/y) accurate there.
    return std::log1p(diff / y) / diff;
}

double CFunction::operator()(double x, double y) const {
    switch (family) {
    case Family::power_mean:
        return scale / power_mean(x, y, p);
    case Family::log_mean:
        return scale * kubo_mori_kernel(x, y);
    case Family::mixture: {
        double total = 0.0;
        for (const auto& [w, c] : components) total += w * c(x, y);
        return total;
    }
    }
    return 0.0;
}

CFunction CFunction::bures() { return CFunction{Family::power_mean, 1.0, 1.0, {}}; }
CFunction CFunction::kubo_mori() { return CFunction{Family::log_mean, 0.0, 1.0, {}}; }
CFunction CFunction::wigner_yanase() { return CFunction{Family::power_mean, 0.5, 1.0, {}}; }

MetricSpec metric_spec(MetricKind kind) {
    switch (kind) {
    case MetricKind::HS:
        return {kind, std::nullopt};
    case MetricKind::Bures:
        return {kind, CFunction::bures()};
    case MetricKind::KuboMori:
        return {kind, CFunction::kubo_mori()};
    case MetricKind::WignerYanase:
        return {kind, CFunction::wigner_yanase()};
    case MetricKind::ArithmeticAverage:
    case MetricKind::QuasiBures:
        break;
    }
    throw ConfigError(std::string("metric ") + to_string(kind) +
                      " has no built-in c-function; supply one in the run config");
}

MetricSpec metric_spec(MetricKind kind, CFunction c) {
    if (kind == MetricKind::HS) throw ConfigError("HS metric takes no c-function");
    return {kind, std::move(c)};
}

const char* to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::HS: return "HS";
    case MetricKind::Bures: return "Bures";
    case MetricKind::KuboMori: return "KuboMori";
    case MetricKind::WignerYanase: return "WignerYanase";
    case MetricKind::ArithmeticAverage: return "ArithmeticAverage";
    case MetricKind::QuasiBures: return "QuasiBures";
    }
    return "?";
}

MetricKind metric_kind_from_string(const std::string& name) {
    for (auto k : {MetricKind::HS, MetricKind::Bures, MetricKind::KuboMori,
                   MetricKind::WignerYanase, MetricKind::ArithmeticAverage,
                   MetricKind::QuasiBures})
        if (name == to_string(k)) return k;
    throw ConfigError("unknown metric '" + name + "'");
}

double hs_density(const SpectrumPoint& spectrum) {
    const auto& l = spectrum.lambdas;
    double product = 1.0;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            const double diff = l[i] - l[j];
            product *= diff * diff;
        }
    return product;
}

double monotone_density(const SpectrumPoint& spectrum, const CFunction& c) {
    const auto& l = spectrum.lambdas;
    double product = 1.0;
    for (double x : l) {
        if (!(x > 0.0)) throw DomainError("monotone density needs strictly positive eigenvalues");
        product /= std::sqrt(x);
    }
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j) {
            const double diff = l[i] - l[j];
            product *= diff * diff * c(l[i], l[j]);
        }
    return product;
}

Weight weight(const SpectrumPoint& spectrum, const MetricSpec& metric, double clip_threshold) {
    if (metric.kind == MetricKind::HS) return {hs_density(spectrum), false};
    if (spectrum.rank_deficient)
        throw DomainError(std::string("rank-deficient spectra have no ") + to_string(metric.kind) +
                          " density");
    if (!metric.c) throw ConfigError(std::string("metric ") + to_string(metric.kind) +
                                     " is missing its c-function");
    const double min_lambda = *std::min_element(spectrum.lambdas.begin(), spectrum.lambdas.end());
    if (min_lambda < clip_threshold) return {0.0, true};
    return {monotone_density(spectrum, *metric.c), false};
}

}  // namespace pptqmc
