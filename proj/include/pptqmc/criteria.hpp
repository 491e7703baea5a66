#pragma once

#include <vector>

#include "pptqmc/linalg.hpp"
#include "pptqmc/state_param.hpp"

namespace pptqmc {

enum class BlockConvention {
    /// Read rho as N (x) M: the N^2 blocks of size M x M are transposed in place.
    transpose_inner_blocks,
    /// Read rho as M (x) N: the M^2 blocks of size N x N are transposed in place.
    transpose_outer_blocks,
};

enum class Subsystem { A, B };

struct Split {
    int d_a = 1;
    int d_b = 1;
    BlockConvention convention = BlockConvention::transpose_inner_blocks;

    int dim() const { return d_a * d_b; }
    /// Side of the sub-blocks this convention transposes.
    int block_size() const;
    /// Factor sizes of the tensor reading this convention uses (first, second).
    std::pair<int, int> reading() const;
};

inline constexpr double default_criterion_tolerance = 1e-10;

struct PptResult {
    bool pass = false;
    double min_eigenvalue = 0.0;
};

struct CrossNormResult {
    bool pass = false;
    double value = 0.0;
};

/// Conventions that are evaluated for a d_A x d_B split: both when the factor
/// sizes differ, one otherwise (for N = M the two block layouts coincide).
std::vector<BlockConvention> conventions_for(int d_a, int d_b);

/// Transposes every block x block sub-block of m in place.
ComplexMatrix transpose_blocks(const ComplexMatrix& m, int block);

ComplexMatrix partial_transpose(const DensityMatrix& rho, const Split& split);
ComplexMatrix partial_transpose(const ComplexMatrix& rho, const Split& split);

/// Partial transpose on one factor of the fixed d_a (x) d_b reading.
ComplexMatrix partial_transpose_factor(const ComplexMatrix& rho, int d_a, int d_b, Subsystem which);

PptResult is_ppt(const DensityMatrix& rho, const Split& split,
                 double tol = default_criterion_tolerance);
PptResult is_ppt(const ComplexMatrix& rho, const Split& split,
                 double tol = default_criterion_tolerance);

/// PPT decision alone: lambda_min >= -tol iff rho^Gamma + tol*I admits a
/// Cholesky factorization (up to rounding at the boundary).
bool ppt_passes(const ComplexMatrix& rho, const Split& split,
                double tol = default_criterion_tolerance);

/// Realignment under the split's reading (first factor n, second factor k):
/// R[(i,k),(j,l)] = rho[(i,j),(k,l)]; the result is n^2 x k^2.
ComplexMatrix realign(const ComplexMatrix& rho, const Split& split);

double trace_norm(const ComplexMatrix& m);

/// Trace norm of the realigned matrix; separable states satisfy value <= 1.
CrossNormResult cross_norm_pass(const DensityMatrix& rho, const Split& split,
                                double tol = default_criterion_tolerance);
CrossNormResult cross_norm_pass(const ComplexMatrix& rho, const Split& split,
                                double tol = default_criterion_tolerance);

struct CriterionOptions {
    bool ppt = true;
    bool cross_norm = false;
    double ppt_tol = default_criterion_tolerance;
    double cn_tol = default_criterion_tolerance;
    /// When false the PPT decision comes from a shifted Cholesky test and
    /// PptResult::min_eigenvalue is nan.
    bool report_min_eigenvalue = false;
};

/// Per-point outcome. `ppt` is parallel to `conventions`; the cross-norm uses
/// the first (inner-block) reading.
struct CriterionOutcome {
    std::vector<BlockConvention> conventions;
    std::vector<PptResult> ppt;
    bool has_cross_norm = false;
    CrossNormResult cross_norm;
};

CriterionOutcome evaluate_criteria(const DensityMatrix& rho, int d_a, int d_b,
                                   const CriterionOptions& options);

const char* to_string(BlockConvention c);

}  // namespace pptqmc
