#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pptqmc/state_param.hpp"

namespace pptqmc {

enum class MetricKind { HS, Bures, KuboMori, WignerYanase, ArithmeticAverage, QuasiBures };

/// Symmetric Morozova-Chentsov kernel c(x, y). Built from a few closed
/// families so that user-defined kernels can be written in the run config:
///   power_mean(p):  c = scale / M_p(x, y)   (p = 0 is the geometric mean)
///   log_mean:       c = scale * (ln x - ln y) / (x - y)
///   mixture:        c = sum_k w_k c_k(x, y)
struct CFunction {
    enum class Family { power_mean, log_mean, mixture };

    Family family = Family::power_mean;
    double p = 1.0;
    double scale = 1.0;
    std::vector<std::pair<double, CFunction>> components;

    double operator()(double x, double y) const;

    static CFunction bures();          // 2 / (x + y)
    static CFunction kubo_mori();      // (ln x - ln y) / (x - y)
    static CFunction wigner_yanase();  // 4 / (sqrt x + sqrt y)^2
};

struct MetricSpec {
    MetricKind kind = MetricKind::HS;
    /// Absent for HS.
    std::optional<CFunction> c;
};

/// Metric with its shipped kernel. ArithmeticAverage and QuasiBures have no
/// shipped kernel and throw ConfigError; build those with an explicit CFunction.
MetricSpec metric_spec(MetricKind kind);
MetricSpec metric_spec(MetricKind kind, CFunction c);

const char* to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// Kubo-Mori kernel; switches to a series when |x - y| < 1e-6 (x + y).
double kubo_mori_kernel(double x, double y);

/// prod_{i<j} (l_i - l_j)^2 over all d eigenvalues (a pinned zero included).
double hs_density(const SpectrumPoint& spectrum);

/// prod_i l_i^{-1/2} prod_{i<j} (l_i - l_j)^2 c(l_i, l_j). Requires every l_i > 0.
double monotone_density(const SpectrumPoint& spectrum, const CFunction& c);

inline constexpr double default_clip_threshold = 1e-12;

struct Weight {
    double value = 0.0;
    /// Monotone weight skipped because min lambda fell below the clip threshold.
    bool clipped = false;
};

Weight weight(const SpectrumPoint& spectrum, const MetricSpec& metric,
              double clip_threshold = default_clip_threshold);

}  // namespace pptqmc
