#include "pptqmc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pptqmc/accumulator.hpp"
#include "pptqmc/engine.hpp"
#include "pptqmc/measures.hpp"
#include "pptqmc/oracle_exact.hpp"
#include "pptqmc/pt_oracle.hpp"
#include "pptqmc/qmc_sequence.hpp"

namespace pptqmc {

using nlohmann::json;

namespace {

constexpr std::pair<int, int> property_splits[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}, {4, 2}};

struct RandomInstance {
    Split split;
    ComplexMatrix rho;
};

RandomInstance random_instance(std::mt19937_64& engine, bool equal_factors = false) {
    std::pair<int, int> dims;
    if (equal_factors) {
        dims = (engine() % 2) ? std::pair{2, 2} : std::pair{3, 3};
    } else {
        dims = property_splits[engine() % std::size(property_splits)];
    }
    const int d = dims.first * dims.second;
    const int rank = 1 + static_cast<int>(engine() % d);
    const auto convention = (engine() % 2) ? BlockConvention::transpose_outer_blocks
                                           : BlockConvention::transpose_inner_blocks;
    return {Split{dims.first, dims.second, convention}, ginibre_state(engine, d, rank).entries};
}

ComplexMatrix werner_state(double p) {
    ComplexMatrix psi = ComplexMatrix::Zero(4, 1);
    psi(1, 0) = 1.0 / std::sqrt(2.0);
    psi(2, 0) = -1.0 / std::sqrt(2.0);
    return p * psi * psi.adjoint() + (1 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
}

CheckResult finish(std::string name, double worst, double threshold, std::int64_t failures,
                   std::int64_t instances) {
    CheckResult r;
    r.name = std::move(name);
    r.value = worst;
    r.threshold = threshold;
    r.pass = failures == 0 && worst <= threshold;
    std::ostringstream os;
    os << failures << " failures over " << instances << " instances";
    r.detail = os.str();
    return r;
}

double mean_density(int d, bool rank_deficient, std::int64_t n, const DensityFn& density) {
    const int dim = simplex_coordinate_count(d, rank_deficient);
    CompensatedSum sum;
    if (dim == 0) {
        const auto s = simplex_from_cube({}, rank_deficient);
        return density(s);
    }
    SequenceConfig sc;
    sc.dimension = dim;
    FaureSequence seq(sc);
    std::vector<double> u(dim);
    for (std::int64_t i = 0; i < n; ++i) {
        seq.point_into(i, u);
        sum.add(density(simplex_from_cube(u, rank_deficient)));
    }
    return sum.value() / static_cast<double>(n);
}

}  // namespace

json to_json(const CheckResult& r) {
    return json{{"name", r.name}, {"pass", r.pass},        {"value", r.value},
                {"threshold", r.threshold}, {"detail", r.detail}};
}

CheckResult check_area_to_volume(int d, std::int64_t n_points, double tolerance,
                                 const DensityFn& density) {
    const DensityFn f = density ? density : DensityFn(hs_density);
    HsIntegral full{d, false, true, n_points, 0.0};
    HsIntegral boundary{d, true, true, n_points, 0.0};
    full.weight_sum = mean_density(d, false, n_points, f) * n_points;
    boundary.weight_sum = mean_density(d, true, n_points, f) * n_points;
    const double err = qmc_area_to_volume_check(full, boundary);
    CheckResult r;
    r.name = "area_to_volume_d" + std::to_string(d);
    r.value = err;
    r.threshold = tolerance;
    r.pass = err < tolerance;
    std::ostringstream os;
    os.precision(10);
    os << "numeric " << numeric_area_to_volume(full, boundary) << " vs exact "
       << exact_area_to_volume_ratio(d) << " with " << n_points << " points";
    r.detail = os.str();
    return r;
}

CheckResult check_pt_oracle(int instances, std::uint64_t seed, const PartialTransposeFn& pt) {
    const PartialTransposeFn f =
        pt ? pt : PartialTransposeFn([](const ComplexMatrix& m, const Split& s) {
            return partial_transpose(m, s);
        });
    auto engine = seeded_engine(seed, 1);
    double worst = 0.0;
    std::int64_t failures = 0;
    for (int i = 0; i < instances; ++i) {
        const auto inst = random_instance(engine);
        const double diff =
            (f(inst.rho, inst.split) - oracle::naive_partial_transpose(inst.rho, inst.split))
                .cwiseAbs()
                .maxCoeff();
        worst = std::max(worst, diff);
        if (diff != 0.0) ++failures;
    }
    return finish("pt_oracle_equivalence", worst, 0.0, failures, instances);
}

CheckResult check_werner_threshold(double tolerance) {
    double worst = 0.0;
    std::int64_t failures = 0;
    for (double p : {0.0, 1.0 / 3.0, 0.5, 1.0}) {
        const auto res = is_ppt(werner_state(p), Split{2, 2});
        const double expected = (1 - 3 * p) / 4;
        worst = std::max(worst, std::abs(res.min_eigenvalue - expected));
        if (res.pass != (p <= 1.0 / 3.0)) ++failures;
    }
    return finish("werner_threshold", worst, tolerance, failures, 4);
}

CheckResult check_realignment_values(double tolerance) {
    double worst = 0.0;
    for (int d : {2, 3}) {
        const ComplexMatrix mixed = ComplexMatrix::Identity(d * d, d * d) / static_cast<double>(d * d);
        worst = std::max(worst, std::abs(cross_norm_pass(mixed, Split{d, d}).value - 1.0 / d));
    }
    ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const auto res = cross_norm_pass(bell, Split{2, 2});
    worst = std::max(worst, std::abs(res.value - 2.0));
    return finish("realignment_trace_norms", worst, tolerance, res.pass ? 1 : 0, 3);
}

CheckResult check_oracle_agreement(std::int64_t qmc_points, std::int64_t oracle_draws,
                                   std::uint64_t seed, int workers) {
    RunConfig config;
    config.rank_mode = RankMode::full;
    config.total_points = qmc_points;
    config.points_per_interval = qmc_points;
    config.workers = workers;
    Integrator run(config);
    while (!run.done()) run.step();
    const auto& acc = *run.state().full;
    const double qmc = *probability(acc, 0, 0);
    const double qmc_se = *standard_error(acc, 0, 0);
    const auto mc = mc_ppt_probability(2, 2, 4, oracle_draws, seed,
                                       BlockConvention::transpose_inner_blocks, workers);
    const double combined = std::sqrt(qmc_se * qmc_se + mc.standard_error * mc.standard_error);
    CheckResult r;
    r.name = "ginibre_vs_qmc_2x2";
    r.value = std::abs(qmc - mc.estimate);
    r.threshold = 3 * combined;
    r.pass = r.value <= r.threshold;
    std::ostringstream os;
    os.precision(8);
    os << "qmc " << qmc << " (se~" << qmc_se << "), ginibre " << mc.estimate << " (se "
       << mc.standard_error << ")";
    r.detail = os.str();
    return r;
}

CheckResult property_pt_involution(int instances, std::uint64_t seed) {
    auto engine = seeded_engine(seed, 2);
    std::int64_t failures = 0;
    for (int i = 0; i < instances; ++i) {
        const auto inst = random_instance(engine);
        if (partial_transpose(partial_transpose(inst.rho, inst.split), inst.split) != inst.rho)
            ++failures;
    }
    return finish("pt_involution", 0.0, 0.0, failures, instances);
}

CheckResult property_pt_trace_hermiticity(int instances, std::uint64_t seed) {
    auto engine = seeded_engine(seed, 3);
    std::int64_t failures = 0;
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        const auto inst = random_instance(engine);
        const ComplexMatrix pt = partial_transpose(inst.rho, inst.split);
        if (pt.trace() != inst.rho.trace() || hermiticity_defect(pt) != 0.0) ++failures;
        worst = std::max(worst, std::abs(hermitian_eigenvalues(pt).sum() - 1.0));
    }
    return finish("pt_trace_hermiticity", worst, 1e-12, failures, instances);
}

CheckResult property_convention_duality(int instances, std::uint64_t seed) {
    auto engine = seeded_engine(seed, 4);
    std::int64_t failures = 0;
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        const auto inst = random_instance(engine);
        const int a = inst.split.d_a, b = inst.split.d_b;
        const ComplexMatrix on_a = partial_transpose_factor(inst.rho, a, b, Subsystem::A);
        const ComplexMatrix on_b = partial_transpose_factor(inst.rho, a, b, Subsystem::B);
        if (on_a != on_b.transpose()) ++failures;
        worst = std::max(worst,
                         (hermitian_eigenvalues(on_a) - hermitian_eigenvalues(on_b)).cwiseAbs().maxCoeff());
    }
    return finish("convention_duality", worst, 1e-10, failures, instances);
}

CheckResult property_equal_factor_agreement(int instances, std::uint64_t seed) {
    auto engine = seeded_engine(seed, 5);
    std::int64_t failures = 0;
    for (int i = 0; i < instances; ++i) {
        const auto inst = random_instance(engine, true);
        Split inner = inst.split, outer = inst.split;
        inner.convention = BlockConvention::transpose_inner_blocks;
        outer.convention = BlockConvention::transpose_outer_blocks;
        const auto x = is_ppt(inst.rho, inner), y = is_ppt(inst.rho, outer);
        if (x.pass != y.pass || x.min_eigenvalue != y.min_eigenvalue) ++failures;
    }
    return finish("equal_factor_convention_agreement", 0.0, 0.0, failures, instances);
}

CheckResult property_vandermonde_zero(int instances, std::uint64_t seed) {
    auto engine = seeded_engine(seed, 6);
    std::int64_t failures = 0;
    for (int i = 0; i < instances; ++i) {
        const int d = 2 + static_cast<int>(engine() % 8);
        std::vector<double> u(d - 1);
        for (auto& x : u) x = uniform01(engine);
        SpectrumPoint s = simplex_from_cube(u, false);
        const std::size_t a = engine() % d;
        std::size_t b = engine() % (d - 1);
        if (b >= a) ++b;
        s.lambdas[b] = s.lambdas[a];
        bool ok = hs_density(s) == 0.0;
        if (*std::min_element(s.lambdas.begin(), s.lambdas.end()) > 0.0)
            ok = ok && monotone_density(s, CFunction::bures()) == 0.0 &&
                 monotone_density(s, CFunction::kubo_mori()) == 0.0;
        if (!ok) ++failures;
    }
    return finish("vandermonde_zero_on_degenerate_spectra", 0.0, 0.0, failures, instances);
}

CheckResult property_merge_associativity(int instances, std::uint64_t seed) {
    auto engine = seeded_engine(seed, 7);
    const Layout layout = Layout::make(2, 3, {metric_spec(MetricKind::HS), metric_spec(MetricKind::Bures)},
                                       true, true);
    auto random_acc = [&] {
        Accumulator acc(layout);
        const int n = 1 + static_cast<int>(engine() % 20);
        for (int k = 0; k < n; ++k) {
            std::vector<Weight> w{{std::ldexp(uniform01(engine), static_cast<int>(engine() % 20) - 10), false},
                                  {uniform01(engine), false}};
            std::vector<bool> passes(layout.cells.size());
            for (std::size_t c = 0; c < passes.size(); ++c) passes[c] = engine() % 2;
            accumulate(acc, w, passes, passes[0], passes.back(), true);
        }
        return acc;
    };
    auto rel = [](double x, double y) {
        const double scale = std::max(std::abs(x), std::abs(y));
        return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
    };
    double worst = 0.0;
    std::int64_t failures = 0;
    for (int i = 0; i < instances; ++i) {
        const auto a = random_acc(), b = random_acc(), c = random_acc();
        const auto left = merge(merge(a, b), c);
        const auto right = merge(a, merge(b, c));
        const auto swapped = merge(merge(c, a), b);
        for (const auto* other : {&right, &swapped}) {
            if (left.n_points != other->n_points || left.contingency != other->contingency) ++failures;
            for (std::size_t k = 0; k < left.sum_weight.size(); ++k)
                worst = std::max(worst, rel(left.sum_weight[k].value(), other->sum_weight[k].value()));
            for (std::size_t k = 0; k < left.sum_weight_pass.size(); ++k)
                worst = std::max(worst, rel(left.sum_weight_pass[k].value(),
                                            other->sum_weight_pass[k].value()));
        }
    }
    return finish("accumulator_merge_associativity", worst, 1e-12, failures, instances);
}

std::vector<CheckResult> run_validation(const ValidationOptions& o) {
    std::vector<CheckResult> checks;
    checks.push_back(check_area_to_volume(2, o.area_points, 0.01));
    checks.push_back(check_area_to_volume(3, o.area_points, 0.01));
    checks.push_back(check_area_to_volume(4, o.area_points_d4, 0.02));
    checks.push_back(check_oracle_agreement(o.qmc_points, o.oracle_draws, o.seed, o.workers));
    checks.push_back(check_werner_threshold());
    checks.push_back(check_realignment_values());
    checks.push_back(check_pt_oracle(o.property_instances, o.seed));
    checks.push_back(property_pt_involution(o.property_instances, o.seed));
    checks.push_back(property_pt_trace_hermiticity(o.property_instances, o.seed));
    checks.push_back(property_convention_duality(o.property_instances, o.seed));
    checks.push_back(property_equal_factor_agreement(o.property_instances, o.seed));
    checks.push_back(property_vandermonde_zero(o.property_instances, o.seed));
    checks.push_back(property_merge_associativity(o.property_instances, o.seed));
    return checks;
}

json boundary_measure_comparison(std::int64_t qmc_points, std::int64_t oracle_draws,
                                 std::uint64_t seed, int workers) {
    RunConfig config;
    config.rank_mode = RankMode::boundary;
    config.total_points = qmc_points;
    config.points_per_interval = qmc_points;
    config.workers = workers;
    Integrator run(config);
    while (!run.done()) run.step();
    const auto& acc = *run.state().boundary;
    const double qmc = *probability(acc, 0, 0);
    const double qmc_se = *standard_error(acc, 0, 0);
    const auto mc = mc_ppt_probability(2, 2, 3, oracle_draws, seed,
                                       BlockConvention::transpose_inner_blocks, workers);
    const double combined = std::sqrt(qmc_se * qmc_se + mc.standard_error * mc.standard_error);
    return json{{"name", "rank3_boundary_vs_ginibre_2x2"},
                {"qmc_boundary_probability", qmc},
                {"qmc_standard_error", qmc_se},
                {"ginibre_rank3_probability", mc.estimate},
                {"ginibre_standard_error", mc.standard_error},
                {"z", (qmc - mc.estimate) / combined}};
}

json validation_report(const std::vector<CheckResult>& checks) {
    json list = json::array();
    bool all = true;
    for (const auto& c : checks) {
        list.push_back(to_json(c));
        all = all && c.pass;
    }
    return json{{"pass", all}, {"checks", list}};
}

}  // namespace pptqmc
