#include "pptqmc/oracle_exact.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

#include "pptqmc/errors.hpp"

namespace pptqmc {

double exact_area_to_volume_ratio(int d) {
    if (d < 2) throw DomainError("area-to-volume ratio needs d >= 2");
    const double dd = d;
    return std::sqrt(dd * (dd - 1)) * (dd * dd - 1);
}

double flag_volume(int d) {
    double log_v = 0.5 * d * (d - 1) * std::log(2 * std::numbers::pi);
    for (int k = 1; k <= d; ++k) log_v -= std::lgamma(static_cast<double>(k));
    return std::exp(log_v);
}

ExactReference exact_reference(int d) {
    ExactReference r;
    r.d = d;
    r.area_to_volume_ratio = exact_area_to_volume_ratio(d);
    double log_v = 0.5 * std::log(static_cast<double>(d)) +
                   0.5 * d * (d - 1) * std::log(2 * std::numbers::pi) -
                   std::lgamma(static_cast<double>(d) * d);
    for (int k = 1; k <= d; ++k) log_v += std::lgamma(static_cast<double>(k));
    r.hs_volume = std::exp(log_v);
    r.hs_hyperarea = r.hs_volume * r.area_to_volume_ratio;
    return r;
}

DensityMatrix ginibre_state(std::mt19937_64& engine, int d, int k) {
    if (k < 1 || k > d) throw DomainError("Ginibre rank must satisfy 1 <= k <= d");
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(d, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < d; ++i) {
            const double re = normal(engine);
            const double im = normal(engine);
            g(i, j) = complex(re, im);
        }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    for (int j = 0; j < d; ++j) {
        rho(j, j) = rho(j, j).real();
        for (int i = j + 1; i < d; ++i) rho(j, i) = std::conj(rho(i, j));
    }
    return DensityMatrix{std::move(rho)};
}

DensityMatrix ginibre_draw(std::uint64_t seed, std::uint64_t index, int d, int k) {
    auto engine = seeded_engine(seed, index);
    return ginibre_state(engine, d, k);
}

McEstimate mc_ppt_probability(int d_a, int d_b, int rank, std::int64_t n, std::uint64_t seed,
                              BlockConvention convention, int workers) {
    if (n < 1) throw DomainError("need at least one draw");
    const int d = d_a * d_b;
    const Split split{d_a, d_b, convention};
    // Fixed chunks keep the count independent of the thread count.
    const std::int64_t chunk = 4096;
    const std::int64_t n_chunks = (n + chunk - 1) / chunk;
    std::vector<std::int64_t> passes(n_chunks, 0);
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t c = next++; c < n_chunks; c = next++) {
            std::int64_t count = 0;
            for (std::int64_t i = c * chunk; i < std::min(n, (c + 1) * chunk); ++i)
                if (is_ppt(ginibre_draw(seed, i, d, rank), split).pass) ++count;
            passes[c] = count;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    std::int64_t total = 0;
    for (auto p : passes) total += p;
    McEstimate e;
    e.n = n;
    e.estimate = static_cast<double>(total) / n;
    e.standard_error = std::sqrt(e.estimate * (1 - e.estimate) / n);
    return e;
}

HsIntegral hs_integral(const RunConfig& config, const RunState& state, bool boundary) {
    const auto& acc = boundary ? state.boundary : state.full;
    if (!acc) throw NotApplicable(boundary ? "run has no boundary stream" : "run has no full stream");
    const int m = config.layout().metric_index(MetricKind::HS);
    if (m < 0) throw NotApplicable("run does not track the HS metric");
    HsIntegral h;
    h.d = config.dim();
    h.rank_deficient = boundary;
    h.absolute_jacobian = config.absolute_jacobian;
    h.n_points = acc->n_points;
    h.weight_sum = acc->sum_weight[m].value();
    return h;
}

double absolute_measure(const HsIntegral& integral) {
    if (!integral.absolute_jacobian)
        throw NotApplicable("run was made without absolute-Jacobian mode");
    if (integral.n_points <= 0) throw NotApplicable("run has no points");
    // Free eigenvalues k: simplex Lebesgue volume 1/(k-1)!, embedding factor
    // sqrt(k), and k! orderings of the same state.
    const int k = integral.rank_deficient ? integral.d - 1 : integral.d;
    const double log_factor = 0.5 * std::log(static_cast<double>(k)) -
                              std::lgamma(static_cast<double>(k)) -
                              std::lgamma(static_cast<double>(k) + 1);
    return integral.mean() * std::exp(log_factor) * flag_volume(integral.d);
}

double numeric_area_to_volume(const HsIntegral& full, const HsIntegral& boundary) {
    if (full.rank_deficient || !boundary.rank_deficient)
        throw NotApplicable("expected a full-rank and a boundary integral");
    if (full.d != boundary.d) throw DimensionError("integrals refer to different dimensions");
    return absolute_measure(boundary) / absolute_measure(full);
}

double qmc_area_to_volume_check(const HsIntegral& full, const HsIntegral& boundary) {
    return std::abs(numeric_area_to_volume(full, boundary) / exact_area_to_volume_ratio(full.d) - 1.0);
}

std::pair<HsIntegral, HsIntegral> run_hs_integrals(int d, std::int64_t n_points,
                                                   const SequenceSpec& sequence, int workers) {
    RunConfig config;
    config.d_a = d;
    config.d_b = 1;
    config.ppt = false;
    config.cross_norm = false;
    config.sequence = sequence;
    config.total_points = n_points;
    config.points_per_interval = std::max<std::int64_t>(n_points, 1);
    config.absolute_jacobian = true;
    config.workers = workers;
    Integrator run(config);
    while (!run.done()) run.step();
    return {hs_integral(config, run.state(), false), hs_integral(config, run.state(), true)};
}

}  // namespace pptqmc
