#pragma once

#include <cstdint>
#include <random>

#include "pptqmc/criteria.hpp"
#include "pptqmc/engine.hpp"
#include "pptqmc/state_param.hpp"

namespace pptqmc {

/// Closed-form Hilbert-Schmidt references for d x d states.
struct ExactReference {
    int d = 2;
    /// (d^2-2)-dimensional hyperarea over (d^2-1)-dimensional volume.
    double area_to_volume_ratio = 0.0;
    double hs_volume = 0.0;
    double hs_hyperarea = 0.0;
};

/// sqrt(d (d-1)) (d^2 - 1).
double exact_area_to_volume_ratio(int d);

/// HS volume sqrt(d) (2 pi)^{d(d-1)/2} prod_{k=1}^{d} Gamma(k) / Gamma(d^2);
/// the hyperarea follows from the ratio above.
ExactReference exact_reference(int d);

/// Volume of the flag manifold U(d)/U(1)^d in the normalization where the HS
/// volume element is (const) * Vandermonde^2 d(lambda) d(flag).
double flag_volume(int d);

/// G G^dagger / tr(G G^dagger) for a d x k matrix G of standard complex
/// Gaussians: HS-distributed for k = d, rank-k induced measure otherwise.
DensityMatrix ginibre_state(std::mt19937_64& engine, int d, int k);

/// Draw `index` of the counter-based Ginibre stream for `seed`.
DensityMatrix ginibre_draw(std::uint64_t seed, std::uint64_t index, int d, int k);

struct McEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::int64_t n = 0;
};

/// Plain Monte Carlo PPT probability over Ginibre draws.
McEstimate mc_ppt_probability(int d_a, int d_b, int rank, std::int64_t n, std::uint64_t seed,
                              BlockConvention convention = BlockConvention::transpose_inner_blocks,
                              int workers = 1);

/// HS weight integral of one finished stream.
struct HsIntegral {
    int d = 2;
    bool rank_deficient = false;
    bool absolute_jacobian = false;
    std::int64_t n_points = 0;
    double weight_sum = 0.0;

    double mean() const { return weight_sum / static_cast<double>(n_points); }
};

HsIntegral hs_integral(const RunConfig& config, const RunState& state, bool boundary);

/// Absolute HS volume (full stream) or hyperarea (boundary stream): the cube
/// mean of the density times simplex volume, embedding factor, ordering
/// multiplicity and flag volume. Throws NotApplicable without absolute mode.
double absolute_measure(const HsIntegral& integral);

/// Numeric hyperarea-to-volume ratio; flag volumes cancel.
double numeric_area_to_volume(const HsIntegral& full, const HsIntegral& boundary);

/// |numeric / exact - 1| for the hyperarea-to-volume ratio.
double qmc_area_to_volume_check(const HsIntegral& full, const HsIntegral& boundary);

/// Paired HS-only run (no criteria, absolute mode) over d x 1 states; the
/// inputs of qmc_area_to_volume_check.
std::pair<HsIntegral, HsIntegral> run_hs_integrals(int d, std::int64_t n_points,
                                                   const SequenceSpec& sequence = {},
                                                   int workers = 1);

}  // namespace pptqmc
