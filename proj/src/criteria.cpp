#include "pptqmc/criteria.hpp"

#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "pptqmc/errors.hpp"

namespace pptqmc {

namespace {

void check_split(const Split& split, Eigen::Index d) {
    if (split.d_a < 1 || split.d_b < 1 || split.d_a * split.d_b != d)
        throw DimensionError("split " + std::to_string(split.d_a) + "x" +
                             std::to_string(split.d_b) + " does not factor dimension " +
                             std::to_string(d));
}

}  // namespace

int Split::block_size() const {
    return convention == BlockConvention::transpose_inner_blocks ? d_b : d_a;
}

std::pair<int, int> Split::reading() const {
    return convention == BlockConvention::transpose_inner_blocks ? std::pair{d_a, d_b}
                                                                 : std::pair{d_b, d_a};
}

std::vector<BlockConvention> conventions_for(int d_a, int d_b) {
    if (d_a == d_b) return {BlockConvention::transpose_inner_blocks};
    return {BlockConvention::transpose_inner_blocks, BlockConvention::transpose_outer_blocks};
}

ComplexMatrix transpose_blocks(const ComplexMatrix& m, int block) {
    const Eigen::Index d = m.rows();
    if (block < 1 || d % block != 0 || m.cols() != d)
        throw DimensionError("block size does not divide the matrix dimension");
    ComplexMatrix out(d, d);
    for (Eigen::Index bi = 0; bi < d; bi += block)
        for (Eigen::Index bj = 0; bj < d; bj += block)
            out.block(bi, bj, block, block) = m.block(bi, bj, block, block).transpose();
    return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, const Split& split) {
    check_split(split, rho.rows());
    return transpose_blocks(rho, split.block_size());
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, const Split& split) {
    return partial_transpose(rho.entries, split);
}

ComplexMatrix partial_transpose_factor(const ComplexMatrix& rho, int d_a, int d_b,
                                       Subsystem which) {
    check_split(Split{d_a, d_b}, rho.rows());
    if (which == Subsystem::B) return transpose_blocks(rho, d_b);
    // Swap block (i,k) with block (k,i); blocks themselves are untouched.
    ComplexMatrix out(rho.rows(), rho.cols());
    for (int i = 0; i < d_a; ++i)
        for (int k = 0; k < d_a; ++k)
            out.block(i * d_b, k * d_b, d_b, d_b) = rho.block(k * d_b, i * d_b, d_b, d_b);
    return out;
}

PptResult is_ppt(const ComplexMatrix& rho, const Split& split, double tol) {
    if (tol < 0) throw DomainError("tolerance must be non-negative");
    const RealVector ev = hermitian_eigenvalues(partial_transpose(rho, split));
    const double min_ev = ev.minCoeff();
    return {min_ev >= -tol, min_ev};
}

PptResult is_ppt(const DensityMatrix& rho, const Split& split, double tol) {
    return is_ppt(rho.entries, split, tol);
}

ComplexMatrix realign(const ComplexMatrix& rho, const Split& split) {
    check_split(split, rho.rows());
    const auto [n, k] = split.reading();
    ComplexMatrix r(n * n, k * k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p)
                for (int l = 0; l < k; ++l) r(i * n + p, j * k + l) = rho(i * k + j, p * k + l);
    return r;
}

double trace_norm(const ComplexMatrix& m) { return singular_values(m).sum(); }

CrossNormResult cross_norm_pass(const ComplexMatrix& rho, const Split& split, double tol) {
    if (tol < 0) throw DomainError("tolerance must be non-negative");
    const double value = trace_norm(realign(rho, split));
    return {value <= 1.0 + tol, value};
}

CrossNormResult cross_norm_pass(const DensityMatrix& rho, const Split& split, double tol) {
    return cross_norm_pass(rho.entries, split, tol);
}

bool ppt_passes(const ComplexMatrix& rho, const Split& split, double tol) {
    if (tol < 0) throw DomainError("tolerance must be non-negative");
    ComplexMatrix pt = partial_transpose(rho, split);
    pt.diagonal().array() += tol;
    Eigen::LLT<ComplexMatrix> llt(pt);
    return llt.info() == Eigen::Success;
}

CriterionOutcome evaluate_criteria(const DensityMatrix& rho, int d_a, int d_b,
                                   const CriterionOptions& options) {
    CriterionOutcome out;
    if (options.ppt) {
        out.conventions = conventions_for(d_a, d_b);
        out.ppt.reserve(out.conventions.size());
        for (auto c : out.conventions) {
            const Split split{d_a, d_b, c};
            if (options.report_min_eigenvalue)
                out.ppt.push_back(is_ppt(rho, split, options.ppt_tol));
            else
                out.ppt.push_back({ppt_passes(rho.entries, split, options.ppt_tol),
                                   std::numeric_limits<double>::quiet_NaN()});
        }
    }
    if (options.cross_norm) {
        out.has_cross_norm = true;
        out.cross_norm = cross_norm_pass(rho, Split{d_a, d_b}, options.cn_tol);
    }
    return out;
}

const char* to_string(BlockConvention c) {
    return c == BlockConvention::transpose_inner_blocks ? "inner" : "outer";
}

}  // namespace pptqmc
