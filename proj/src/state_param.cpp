#include "pptqmc/state_param.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pptqmc/errors.hpp"

namespace pptqmc {

namespace {

void check_unit_interval(std::span<const double> u, const char* what) {
    for (double x : u)
        if (!(x >= 0.0 && x < 1.0))
            throw DomainError(std::string(what) + " coordinate " + std::to_string(x) +
                              " outside [0,1)");
}

}  // namespace

int simplex_coordinate_count(int d, bool rank_deficient) {
    if (d < 1 || (rank_deficient && d < 2))
        throw DimensionError("state dimension too small for the requested rank");
    return rank_deficient ? d - 2 : d - 1;
}

int unitary_coordinate_count(int d) { return d * d - d; }

int state_coordinate_count(int d, bool rank_deficient) {
    return simplex_coordinate_count(d, rank_deficient) + unitary_coordinate_count(d);
}

SpectrumPoint simplex_from_cube(std::span<const double> u, bool rank_deficient) {
    check_unit_interval(u, "simplex");
    const int free = static_cast<int>(u.size()) + 1;  // eigenvalues not pinned to zero
    SpectrumPoint s;
    s.rank_deficient = rank_deficient;
    s.lambdas.reserve(free + (rank_deficient ? 1 : 0));
    double remainder = 1.0;
    for (int i = 0; i < free - 1; ++i) {
        const int k = free - 1 - i;  // free coordinates left after this break
        const double keep = k == 1 ? u[i] : std::pow(u[i], 1.0 / k);
        s.lambdas.push_back(remainder * (1.0 - keep));
        remainder *= keep;
    }
    s.lambdas.push_back(remainder);
    if (rank_deficient) s.lambdas.push_back(0.0);
    return s;
}

UnitaryMatrix unitary_from_cube(std::span<const double> v, int d) {
    if (static_cast<int>(v.size()) != unitary_coordinate_count(d))
        throw DimensionError("unitary block needs " + std::to_string(unitary_coordinate_count(d)) +
                             " coordinates, got " + std::to_string(v.size()));
    check_unit_interval(v, "unitary");

    UnitaryMatrix u;
    u.entries = ComplexMatrix::Identity(d, d);
    u.origin_angles.resize(v.size());

    // Column c is a Haar-random unit vector of the trailing (d-c)-dimensional
    // subspace, realised by m-1 rotations acting on planes (c+j, c+j+1).
    // U = B_0 B_1 ... B_{d-2}, B_c = R_{c,m-2} ... R_{c,0}.
    std::size_t offset = 0;
    for (int c = 0; c + 1 < d; ++c) {
        const int m = d - c;
        for (int j = 0; j < m - 1; ++j) {
            const double mix = v[offset + 2 * j];
            const double phase = v[offset + 2 * j + 1];
            // cos^2(theta) ~ Beta(1, m-1-j)
            const double theta = std::asin(std::pow(mix, 0.5 / (m - 1 - j)));
            u.origin_angles[offset + 2 * j] = theta;
            u.origin_angles[offset + 2 * j + 1] = 2.0 * std::numbers::pi * phase;
        }
        for (int j = m - 2; j >= 0; --j) {
            const double theta = u.origin_angles[offset + 2 * j];
            const double phi = u.origin_angles[offset + 2 * j + 1];
            const double cs = std::cos(theta), sn = std::sin(theta);
            const complex e = std::polar(1.0, phi);
            // R e_p = cos e_p + e^{i phi} sin e_q ; R e_q = -e^{-i phi} sin e_p + cos e_q
            const int p = c + j, q = c + j + 1;
            for (int row = 0; row < d; ++row) {
                const complex a = u.entries(row, p), b = u.entries(row, q);
                u.entries(row, p) = cs * a + e * sn * b;
                u.entries(row, q) = -std::conj(e) * sn * a + cs * b;
            }
        }
        offset += 2 * static_cast<std::size_t>(m - 1);
    }
    return u;
}

DensityMatrix assemble_state(const SpectrumPoint& spectrum, const ComplexMatrix& u) {
    const int d = spectrum.dim();
    if (u.rows() != d || u.cols() != d)
        throw DimensionError("spectrum and unitary dimensions differ");
    DensityMatrix rho;
    rho.entries = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double lambda = spectrum.lambdas[k];
        if (lambda == 0.0) continue;
        for (int j = 0; j < d; ++j) {
            const complex w = lambda * std::conj(u(j, k));
            for (int i = j; i < d; ++i) rho.entries(i, j) += u(i, k) * w;
        }
    }
    for (int j = 0; j < d; ++j) {
        rho.entries(j, j) = rho.entries(j, j).real();
        for (int i = j + 1; i < d; ++i) rho.entries(j, i) = std::conj(rho.entries(i, j));
    }
    return rho;
}

DensityMatrix assemble_state(const SpectrumPoint& spectrum, const UnitaryMatrix& u) {
    return assemble_state(spectrum, u.entries);
}

std::pair<DensityMatrix, SpectrumPoint> cube_to_state(std::span<const double> point, int d,
                                                      bool rank_deficient) {
    const int ns = simplex_coordinate_count(d, rank_deficient);
    const int nu = unitary_coordinate_count(d);
    if (static_cast<int>(point.size()) != ns + nu)
        throw DimensionError("cube point has " + std::to_string(point.size()) +
                             " coordinates; d=" + std::to_string(d) + " needs " +
                             std::to_string(ns + nu));
    auto spectrum = simplex_from_cube(point.first(ns), rank_deficient);
    auto u = unitary_from_cube(point.subspan(ns), d);
    auto rho = assemble_state(spectrum, u);
    return {std::move(rho), std::move(spectrum)};
}

}  // namespace pptqmc
