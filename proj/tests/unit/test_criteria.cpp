#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pptqmc/criteria.hpp"
#include "pptqmc/errors.hpp"
#include "pptqmc/state_param.hpp"

using namespace pptqmc;
using ref::Mat;

namespace {

constexpr BlockConvention inner = BlockConvention::transpose_inner_blocks;
constexpr BlockConvention outer = BlockConvention::transpose_outer_blocks;

const std::pair<int, int> splits[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 4}, {4, 2}, {1, 3}, {3, 1}};

Eigen::VectorXcd row_vec(const Mat& m) {
    Eigen::VectorXcd v(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
    return v;
}

}  // namespace

TEST_CASE("block conventions against the index-formula oracle") {
    std::mt19937_64 rng(10);
    for (auto [n, m] : splits)
        for (int trial = 0; trial < 50; ++trial) {
            const Mat rho = ref::random_matrix(rng, n * m);
            CHECK(partial_transpose(rho, Split{n, m, inner}) == ref::pt_second(rho, n, m));
            CHECK(partial_transpose(rho, Split{n, m, outer}) == ref::pt_second(rho, m, n));
            CHECK(partial_transpose_factor(rho, n, m, Subsystem::B) == ref::pt_second(rho, n, m));
            CHECK(partial_transpose_factor(rho, n, m, Subsystem::A) == ref::pt_first(rho, n, m));
        }
}

TEST_CASE("maximally mixed state is fixed by both conventions") {
    for (auto [n, m] : splits) {
        const Mat id = Mat::Identity(n * m, n * m) / double(n * m);
        for (auto c : {inner, outer}) CHECK(partial_transpose(id, Split{n, m, c}) == id);
    }
}

TEST_CASE("Werner line: PT spectrum and threshold") {
    for (double p : {0.0, 1.0 / 3.0, 0.5, 1.0}) {
        const auto r = is_ppt(ref::werner(p), Split{2, 2, inner}, 0.0);
        CHECK(std::abs(r.min_eigenvalue - (1.0 - 3.0 * p) / 4.0) < 1e-10);
        const auto ev = ref::sorted_eigenvalues(partial_transpose(ref::werner(p), Split{2, 2}));
        for (int i = 1; i < 4; ++i) CHECK(std::abs(ev[i] - (1.0 + p) / 4.0) < 1e-10);
    }
    CHECK(std::abs(is_ppt(ref::werner(0.5), Split{2, 2}).min_eigenvalue + 0.125) < 1e-12);
    CHECK(is_ppt(ref::werner(1.0 / 3.0), Split{2, 2}).pass);
    CHECK_FALSE(is_ppt(ref::werner(0.9), Split{2, 2}).pass);
    CHECK(ppt_passes(ref::werner(1.0 / 3.0), Split{2, 2}));
    CHECK_FALSE(ppt_passes(ref::werner(0.9), Split{2, 2}));
}

TEST_CASE("product states pass PPT and sit on the cross-norm boundary when pure") {
    std::mt19937_64 rng(11);
    for (auto [n, m] : splits) {
        const Mat a = ref::random_state(rng, n, n), b = ref::random_state(rng, m, m);
        // Each convention reads the matrix as a product in its own factor order.
        CHECK(is_ppt(ref::kron(a, b), Split{n, m, inner}).pass);
        CHECK(is_ppt(ref::kron(b, a), Split{n, m, outer}).pass);
        const Mat pa = ref::random_state(rng, n, 1), pb = ref::random_state(rng, m, 1);
        const auto cn = cross_norm_pass(ref::kron(pa, pb), Split{n, m});
        CHECK(std::abs(cn.value - 1.0) < 1e-10);
        CHECK(cn.pass);
    }
}

TEST_CASE("equal factors admit a single convention and both orders agree exactly") {
    CHECK(conventions_for(3, 3).size() == 1);
    CHECK(conventions_for(2, 3).size() == 2);
    std::mt19937_64 rng(12);
    for (int n : {2, 3, 4}) {
        const Mat rho = ref::random_state(rng, n * n, n * n);
        CHECK(partial_transpose(rho, Split{n, n, inner}) == partial_transpose(rho, Split{n, n, outer}));
    }
}

TEST_CASE("the two conventions are inequivalent for 2x3") {
    // States mixing a random pure state with noise sit near the PPT boundary,
    // where the two block readings disagree.
    std::mt19937_64 rng(13);
    int inner_only = 0, outer_only = 0;
    for (int trial = 0; trial < 4000 && (inner_only == 0 || outer_only == 0); ++trial) {
        const double t = 0.15 + 0.25 * ref::unit(rng);
        const Mat rho = t * ref::random_state(rng, 6, 1) + (1.0 - t) * Mat::Identity(6, 6) / 6.0;
        const bool a = is_ppt(rho, Split{2, 3, inner}).pass, b = is_ppt(rho, Split{2, 3, outer}).pass;
        inner_only += a && !b;
        outer_only += b && !a;
    }
    CHECK(inner_only > 0);
    CHECK(outer_only > 0);
}

TEST_CASE("PT involution, hermiticity, trace, duality") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 400; ++trial) {
        const auto [n, m] = splits[trial % std::size(splits)];
        const Mat rho = ref::random_state(rng, n * m, 1 + trial % (n * m));
        for (auto c : {inner, outer}) {
            const Split s{n, m, c};
            const Mat pt = partial_transpose(rho, s);
            CHECK(partial_transpose(pt, s) == rho);
            CHECK(pt == pt.adjoint());
            CHECK(pt.trace() == rho.trace());
            const auto ev = ref::sorted_eigenvalues(pt);
            double sum = 0.0;
            for (double e : ev) sum += e;
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
        const Mat ta = partial_transpose_factor(rho, n, m, Subsystem::A);
        const Mat tb = partial_transpose_factor(rho, n, m, Subsystem::B);
        CHECK(ta == tb.transpose());
        const auto ea = ref::sorted_eigenvalues(ta), eb = ref::sorted_eigenvalues(tb);
        for (std::size_t i = 0; i < ea.size(); ++i) CHECK(std::abs(ea[i] - eb[i]) < 1e-10);
    }
}

TEST_CASE("Cholesky decision agrees with the eigenvalue decision away from the boundary") {
    std::mt19937_64 rng(15);
    int checked = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        const auto [n, m] = splits[trial % 6];
        const double t = ref::unit(rng);
        const Mat rho = t * ref::random_state(rng, n * m, n * m) +
                        (1.0 - t) * Mat::Identity(n * m, n * m) / double(n * m);
        for (auto c : {inner, outer}) {
            const Split s{n, m, c};
            const auto full = is_ppt(rho, s);
            if (std::abs(full.min_eigenvalue + default_criterion_tolerance) < 1e-12) continue;
            ++checked;
            REQUIRE(ppt_passes(rho, s) == full.pass);
        }
    }
    CHECK(checked > 5000);
}

TEST_CASE("realignment values") {
    for (int d : {2, 3}) {
        const Mat id = Mat::Identity(d * d, d * d) / double(d * d);
        CHECK(std::abs(trace_norm(realign(id, Split{d, d})) - 1.0 / d) < 1e-10);
    }
    CHECK(std::abs(trace_norm(realign(ref::bell_phi_plus(), Split{2, 2})) - 2.0) < 1e-10);
    const auto bell = cross_norm_pass(ref::bell_phi_plus(), Split{2, 2});
    CHECK(std::abs(bell.value - 2.0) < 1e-10);
    CHECK_FALSE(bell.pass);
    const auto mixed = cross_norm_pass(Mat(Mat::Identity(9, 9) / 9.0), Split{3, 3});
    CHECK(std::abs(mixed.value - 1.0 / 3.0) < 1e-10);
    CHECK(mixed.pass);
}

TEST_CASE("realignment of a product is the outer product of row-vectorized factors") {
    std::mt19937_64 rng(16);
    for (auto [n, m] : splits) {
        const Mat a = ref::random_matrix(rng, n), b = ref::random_matrix(rng, m);
        const Mat r = realign(ref::kron(a, b), Split{n, m});
        const Mat expected = row_vec(a) * row_vec(b).transpose();
        CHECK(ref::max_abs_diff(r, expected) < 1e-14);
        Eigen::JacobiSVD<Mat> svd(r);
        const auto sv = svd.singularValues();
        for (Eigen::Index i = 1; i < sv.size(); ++i) CHECK(sv(i) < 1e-12 * sv(0));
    }
}

TEST_CASE("cross-norm value is invariant under local unitaries") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto [n, m] = splits[trial % 6];
        const Mat rho = ref::random_state(rng, n * m, n * m);
        const Mat u = ref::kron(ref::random_unitary(rng, n), ref::random_unitary(rng, m));
        const double before = cross_norm_pass(rho, Split{n, m}).value;
        const double after = cross_norm_pass(Mat(u * rho * u.adjoint()), Split{n, m}).value;
        CHECK(std::abs(before - after) < 1e-8);
    }
}

TEST_CASE("evaluate_criteria reports per convention and the cross-norm") {
    const DensityMatrix w{ref::werner(0.5)};
    CriterionOptions opts;
    opts.cross_norm = true;
    opts.report_min_eigenvalue = true;
    const auto out = evaluate_criteria(w, 2, 2, opts);
    REQUIRE(out.ppt.size() == 1);
    CHECK_FALSE(out.ppt[0].pass);
    CHECK(out.ppt[0].min_eigenvalue == doctest::Approx(-0.125));
    CHECK(out.has_cross_norm);
    CHECK(out.cross_norm.value == doctest::Approx(1.25));

    opts.report_min_eigenvalue = false;
    const auto fast = evaluate_criteria(w, 2, 2, opts);
    CHECK_FALSE(fast.ppt[0].pass);
    CHECK(std::isnan(fast.ppt[0].min_eigenvalue));
    const DensityMatrix six{Mat(Mat::Identity(6, 6) / 6.0)};
    CHECK(evaluate_criteria(six, 2, 3, opts).ppt.size() == 2);
}

TEST_CASE("errors") {
    const Mat rho = Mat::Identity(6, 6) / 6.0;
    CHECK_THROWS_AS(partial_transpose(rho, Split{2, 2}), DimensionError);
    CHECK_THROWS_AS(is_ppt(rho, Split{2, 3}, -1.0), DomainError);
    CHECK_THROWS_AS(realign(rho, Split{4, 2}), DimensionError);
}
