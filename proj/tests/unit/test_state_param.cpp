#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "pptqmc/errors.hpp"
#include "pptqmc/qmc_sequence.hpp"
#include "pptqmc/state_param.hpp"

using namespace pptqmc;

namespace {

FaureSequence faure(int dim) {
    SequenceConfig c;
    c.dimension = dim;
    return FaureSequence(c);
}

std::vector<double> uniform_point(std::mt19937_64& rng, int n) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform01(rng);
    return v;
}

// Kolmogorov-Smirnov statistic of samples against a continuous CDF.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        worst = std::max({worst, (i + 1) / n - f, f - i / n});
    }
    return worst;
}

double vandermonde_sq(const std::vector<double>& l) {
    double v = 1.0;
    for (std::size_t i = 0; i < l.size(); ++i)
        for (std::size_t j = i + 1; j < l.size(); ++j) v *= (l[i] - l[j]) * (l[i] - l[j]);
    return v;
}

}  // namespace

TEST_CASE("coordinate counts") {
    CHECK(state_coordinate_count(2, false) == 3);
    CHECK(state_coordinate_count(4, false) == 15);
    CHECK(state_coordinate_count(4, true) == 14);
    CHECK(state_coordinate_count(6, false) == 35);
    CHECK(state_coordinate_count(6, true) == 34);
    CHECK(state_coordinate_count(9, false) == 80);
    CHECK(state_coordinate_count(9, true) == 79);
}

TEST_CASE("simplex map examples") {
    const std::vector<double> zero{0.0}, quarter{0.25};
    CHECK(simplex_from_cube(zero, false).lambdas == std::vector<double>{1.0, 0.0});
    const auto s = simplex_from_cube(quarter, false);
    CHECK(s.lambdas[0] == doctest::Approx(0.75));
    CHECK(s.lambdas[1] == doctest::Approx(0.25));
    const std::vector<double> bad{1.0}, neg{-0.1};
    CHECK_THROWS_AS(simplex_from_cube(bad, false), DomainError);
    CHECK_THROWS_AS(simplex_from_cube(neg, false), DomainError);
}

TEST_CASE("simplex map is non-negative, sums to one, pins the last eigenvalue when rank deficient") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 2000; ++trial) {
        const int d = 2 + trial % 8;
        const bool rd = trial % 2 == 1;
        const auto s = simplex_from_cube(uniform_point(rng, simplex_coordinate_count(d, rd)), rd);
        REQUIRE(s.dim() == d);
        CHECK(std::accumulate(s.lambdas.begin(), s.lambdas.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(*std::min_element(s.lambdas.begin(), s.lambdas.end()) >= 0.0);
        if (rd) CHECK(s.lambdas.back() == 0.0);
    }
}

TEST_CASE("simplex image is uniform: first moment and Vandermonde moments") {
    const FaureSequence seq = faure(2);
    double sum = 0.0, vsq = 0.0;
    const int n = 1'000'000;
    for (int i = 0; i < n; ++i) {
        const auto s = simplex_from_cube(seq.point(i), false);
        sum += s.lambdas[0];
        vsq += vandermonde_sq(s.lambdas);
    }
    CHECK(std::abs(sum / n - 1.0 / 3.0) < 0.01);
    CHECK(vsq / n == doctest::Approx(ref::vandermonde_moments[1].full).epsilon(0.01));
}

TEST_CASE("zero angles give the identity") {
    const std::vector<double> v(unitary_coordinate_count(4), 0.0);
    CHECK(ref::max_abs_diff(unitary_from_cube(v, 4).entries, ref::Mat::Identity(4, 4)) == 0.0);
}

TEST_CASE("unitary map produces unitaries with unit determinant modulus") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        const int d = 2 + trial % 8;
        const auto u = unitary_from_cube(uniform_point(rng, unitary_coordinate_count(d)), d).entries;
        CHECK(ref::max_abs_diff(u * u.adjoint(), ref::Mat::Identity(d, d)) < 1e-12);
        CHECK(std::abs(std::abs(u.determinant()) - 1.0) < 1e-10);
    }
    const std::vector<double> short_v(3, 0.1);
    CHECK_THROWS_AS(unitary_from_cube(short_v, 3), DimensionError);
}

TEST_CASE("Haar marginals of |U_11|^2") {
    SUBCASE("d = 2 is uniform") {
        const FaureSequence seq = faure(2);
        std::vector<double> xs;
        for (int i = 0; i < 100000; ++i) xs.push_back(std::norm(unitary_from_cube(seq.point(i), 2).entries(0, 0)));
        CHECK(ks_statistic(xs, [](double x) { return x; }) < 0.01);
    }
    SUBCASE("d = 3 is Beta(1,2)") {
        const FaureSequence seq = faure(6);
        std::vector<double> xs;
        for (int i = 0; i < 100000; ++i) xs.push_back(std::norm(unitary_from_cube(seq.point(i), 3).entries(0, 0)));
        CHECK(ks_statistic(xs, [](double x) { return 1.0 - (1.0 - x) * (1.0 - x); }) < 0.01);
    }
}

TEST_CASE("assembly examples") {
    std::mt19937_64 rng(3);
    const SpectrumPoint flat{{0.25, 0.25, 0.25, 0.25}, false};
    const auto u = unitary_from_cube(uniform_point(rng, 12), 4);
    CHECK(ref::max_abs_diff(assemble_state(flat, u).entries, ref::Mat::Identity(4, 4) / 4.0) < 1e-14);

    const SpectrumPoint two{{0.75, 0.25}, false};
    const auto rho = assemble_state(two, ref::Mat::Identity(2, 2)).entries;
    CHECK(rho(0, 0).real() == 0.75);
    CHECK(rho(1, 1).real() == 0.25);
    CHECK(std::abs(rho(0, 1)) == 0.0);
    CHECK_THROWS_AS(assemble_state(two, ref::Mat::Identity(3, 3)), DimensionError);
}

TEST_CASE("assembled spectrum matches the input and is permutation invariant") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + trial % 8;
        const bool rd = trial % 3 == 0;
        const auto [rho, spec] = cube_to_state(uniform_point(rng, state_coordinate_count(d, rd)), d, rd);
        const auto& m = rho.entries;
        CHECK(ref::max_abs_diff(m, m.adjoint()) == 0.0);
        CHECK(std::abs(m.trace() - 1.0) < 1e-12);
        auto expected = spec.lambdas;
        std::sort(expected.begin(), expected.end());
        const auto got = ref::sorted_eigenvalues(m);
        for (int i = 0; i < d; ++i) REQUIRE(std::abs(got[i] - expected[i]) < 1e-10);
        if (rd) CHECK(std::abs(got[0]) < 1e-10);

        SpectrumPoint shuffled = spec;
        std::shuffle(shuffled.lambdas.begin(), shuffled.lambdas.end(), rng);
        const auto u = ref::random_unitary(rng, d);
        const auto again = ref::sorted_eigenvalues(assemble_state(shuffled, u).entries);
        for (int i = 0; i < d; ++i) REQUIRE(std::abs(again[i] - expected[i]) < 1e-10);
    }
}

TEST_CASE("cube_to_state reads the simplex block first") {
    std::mt19937_64 rng(5);
    const auto p = uniform_point(rng, state_coordinate_count(3, false));
    const auto [rho, spec] = cube_to_state(p, 3, false);
    CHECK(spec.lambdas == simplex_from_cube(std::span(p).first(2), false).lambdas);
    const auto u = unitary_from_cube(std::span(p).subspan(2), 3);
    CHECK(ref::max_abs_diff(assemble_state(spec, u).entries, rho.entries) == 0.0);
}
