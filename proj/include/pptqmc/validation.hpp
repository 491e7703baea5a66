#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pptqmc/criteria.hpp"
#include "pptqmc/state_param.hpp"

namespace pptqmc {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured error / discrepancy
    double threshold = 0.0;  // pass iff value <= threshold (or as described)
    std::string detail;
};

nlohmann::json to_json(const CheckResult& r);

using DensityFn = std::function<double(const SpectrumPoint&)>;
using PartialTransposeFn = std::function<ComplexMatrix(const ComplexMatrix&, const Split&)>;

/// Hyperarea-to-volume ratio from a Faure stream pushed through the spectrum
/// map with the given density, against the closed form.
CheckResult check_area_to_volume(int d, std::int64_t n_points, double tolerance,
                                 const DensityFn& density = {});

/// Production partial transpose against the entry-wise oracle on random states.
CheckResult check_pt_oracle(int instances, std::uint64_t seed,
                            const PartialTransposeFn& pt = {});

/// Werner line: min PT eigenvalue (1 - 3p)/4 at p in {0, 1/3, 1/2, 1}.
CheckResult check_werner_threshold(double tolerance = 1e-10);

/// Realignment trace norms: 1/d for I/d^2, 2 for a Bell state.
CheckResult check_realignment_values(double tolerance = 1e-10);

/// 2x2 full-rank HS PPT probability: QMC (Faure) against the Ginibre oracle.
CheckResult check_oracle_agreement(std::int64_t qmc_points, std::int64_t oracle_draws,
                                   std::uint64_t seed, int workers = 1);

// Property suites over random instances.
CheckResult property_pt_involution(int instances, std::uint64_t seed);
CheckResult property_pt_trace_hermiticity(int instances, std::uint64_t seed);
CheckResult property_convention_duality(int instances, std::uint64_t seed);
CheckResult property_equal_factor_agreement(int instances, std::uint64_t seed);
CheckResult property_vandermonde_zero(int instances, std::uint64_t seed);
CheckResult property_merge_associativity(int instances, std::uint64_t seed);

struct ValidationOptions {
    std::int64_t area_points = 1'000'000;
    std::int64_t area_points_d4 = 10'000'000;
    std::int64_t qmc_points = 1'000'000;
    std::int64_t oracle_draws = 1'000'000;
    int property_instances = 10'000;
    std::uint64_t seed = 20050101;
    int workers = 1;
};

/// Informational: PPT probability on the rank-(d-1) boundary under the
/// Hilbert-Schmidt hyperarea density (QMC) next to the Ginibre d x (d-1)
/// induced measure, for 2x2. The two measures carry different eigenvalue
/// weights (prod l_i^2 vs prod l_i over the non-zero eigenvalues), so no
/// agreement is asserted.
nlohmann::json boundary_measure_comparison(std::int64_t qmc_points, std::int64_t oracle_draws,
                                           std::uint64_t seed, int workers = 1);

std::vector<CheckResult> run_validation(const ValidationOptions& options);

/// {"pass": all passed, "checks": [...]}
nlohmann::json validation_report(const std::vector<CheckResult>& checks);

}  // namespace pptqmc
