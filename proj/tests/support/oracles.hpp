#pragma once
// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerical code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ref {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline double radical_inverse(std::uint64_t i, std::uint32_t b) {
    double x = 0.0, f = 1.0 / b;
    for (; i > 0; i /= b, f /= b) x += static_cast<double>(i % b) * f;
    return x;
}

inline std::uint64_t binomial_mod(int n, int k, std::uint32_t b) {
    // Pascal's rule, exact mod b.
    std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        c[i][0] = 1;
        for (int j = 1; j <= i; ++j) c[i][j] = (c[i - 1][j - 1] + c[i - 1][j]) % b;
    }
    return c[n][k];
}

/// Coordinate j of Faure point i in prime base b, straight from the Pascal
/// matrix power definition: y_r = sum_{k>=r} C(k,r) j^{k-r} a_k (mod b).
inline double faure_coordinate(std::uint64_t i, int j, std::uint32_t b) {
    std::vector<std::uint64_t> a;
    for (std::uint64_t t = i; t > 0; t /= b) a.push_back(t % b);
    const int m = static_cast<int>(a.size());
    double x = 0.0, f = 1.0 / b;
    for (int r = 0; r < m; ++r, f /= b) {
        std::uint64_t y = 0;
        for (int k = r; k < m; ++k) {
            std::uint64_t pw = 1;
            for (int e = 0; e < k - r; ++e) pw = pw * static_cast<std::uint64_t>(j) % b;
            y = (y + binomial_mod(k, r, b) * pw % b * a[k]) % b;
        }
        x += static_cast<double>(y) * f;
    }
    return x;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Transpose on the second factor of an n (x) k reading, by index formula.
inline Mat pt_second(const Mat& rho, int n, int k) {
    Mat out(n * k, n * k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p)
                for (int l = 0; l < k; ++l) out(i * k + j, p * k + l) = rho(i * k + l, p * k + j);
    return out;
}

/// Transpose on the first factor of an n (x) k reading, by index formula.
inline Mat pt_first(const Mat& rho, int n, int k) {
    Mat out(n * k, n * k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p)
                for (int l = 0; l < k; ++l) out(i * k + j, p * k + l) = rho(p * k + j, i * k + l);
    return out;
}

inline Mat pure(const Eigen::VectorXcd& psi) { return psi * psi.adjoint(); }

/// p |psi-><psi-| + (1-p) I/4 on two qubits.
inline Mat werner(double p) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return p * pure(psi) + (1.0 - p) * Mat::Identity(4, 4) / 4.0;
}

inline Mat bell_phi_plus() {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
    return pure(psi);
}

inline double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline Mat ginibre(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> g;
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cd(g(rng), g(rng));
    return m;
}

/// Random density matrix of dimension d and rank k.
inline Mat random_state(std::mt19937_64& rng, int d, int k) {
    const Mat g = ginibre(rng, d, k);
    Mat rho = g * g.adjoint();
    rho = (rho + rho.adjoint()).eval() / (2.0 * rho.trace().real());
    return rho;
}

/// Random unitary from the QR factor of a Ginibre matrix.
inline Mat random_unitary(std::mt19937_64& rng, int d) {
    Eigen::HouseholderQR<Mat> qr(ginibre(rng, d, d));
    return qr.householderQ() * Mat::Identity(d, d);
}

/// Random complex matrix, not necessarily Hermitian.
inline Mat random_matrix(std::mt19937_64& rng, int d) { return ginibre(rng, d, d); }

inline std::vector<double> sorted_eigenvalues(const Mat& h) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
    const auto& v = es.eigenvalues();
    return {v.data(), v.data() + v.size()};
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Mean of prod_{i<j} (l_i - l_j)^2 over the uniform simplex (full rank) and
/// of prod l_i^2 prod (l_i - l_j)^2 over the uniform face (one eigenvalue 0),
/// computed exactly by symbolic integration for d = 2, 3, 4.
struct VandermondeMoments {
    int d;
    double full;
    double boundary;
};
inline constexpr VandermondeMoments vandermonde_moments[] = {
    {2, 1.0 / 3.0, 1.0},
    {3, 1.0 / 840.0, 1.0 / 210.0},
    {4, 1.0 / 63063000.0, 1.0 / 12612600.0},
};

/// L-infinity star discrepancy of a 2-d point set over anchored boxes with
/// corners on a g x g grid.
inline double grid_star_discrepancy(const std::vector<std::vector<double>>& pts, int g) {
    std::vector<std::int64_t> hist((g + 1) * (g + 1), 0);
    for (const auto& p : pts) {
        // Box [0, a/g) x [0, c/g) contains p iff floor(p*g) < a and floor(p*g) < c.
        const int a = static_cast<int>(p[0] * g) + 1, c = static_cast<int>(p[1] * g) + 1;
        ++hist[a * (g + 1) + c];
    }
    for (int a = 0; a <= g; ++a)
        for (int c = 0; c <= g; ++c) {
            std::int64_t v = hist[a * (g + 1) + c];
            if (a > 0) v += hist[(a - 1) * (g + 1) + c];
            if (c > 0) v += hist[a * (g + 1) + c - 1];
            if (a > 0 && c > 0) v -= hist[(a - 1) * (g + 1) + c - 1];
            hist[a * (g + 1) + c] = v;
        }
    const double n = static_cast<double>(pts.size());
    double worst = 0.0;
    for (int a = 1; a <= g; ++a)
        for (int c = 1; c <= g; ++c)
            worst = std::max(worst, std::abs(hist[a * (g + 1) + c] / n -
                                             static_cast<double>(a) * c / (double(g) * g)));
    return worst;
}

}  // namespace ref
