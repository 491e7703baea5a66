#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pptqmc/linalg.hpp"

namespace pptqmc {

/// Eigenvalues of a state in construction order (never sorted). For
/// rank-deficient spectra the last entry is exactly zero.
struct SpectrumPoint {
    std::vector<double> lambdas;
    bool rank_deficient = false;

    int dim() const { return static_cast<int>(lambdas.size()); }
};

struct UnitaryMatrix {
    ComplexMatrix entries;
    /// Warped (mixing angle, phase) pairs in the order the rotations were generated.
    std::vector<double> origin_angles;
};

struct DensityMatrix {
    ComplexMatrix entries;

    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Cube coordinates consumed by the spectrum block: d-1 (full rank) or d-2.
int simplex_coordinate_count(int d, bool rank_deficient);
/// Cube coordinates consumed by the eigenvector frame: d^2 - d.
int unitary_coordinate_count(int d);
int state_coordinate_count(int d, bool rank_deficient);

/// Stick-breaking with Beta(1,k) inverse CDFs; the pushforward of Lebesgue
/// measure on the cube is the uniform measure on the simplex. With
/// rank_deficient the d-1 leading eigenvalues are uniform on their simplex and
/// the last is pinned to 0. `d` is inferred from the coordinate count.
SpectrumPoint simplex_from_cube(std::span<const double> u, bool rank_deficient);

/// Product of two-level rotations building the eigenvector frame column by
/// column. Each rotation takes one mixing coordinate (warped through the
/// inverse CDF of its Haar marginal) and one phase coordinate, so the uniform
/// cube measure maps to Haar measure on U(d) modulo diagonal phases.
UnitaryMatrix unitary_from_cube(std::span<const double> v, int d);

/// U diag(lambda) U^dagger, Hermitian by construction.
DensityMatrix assemble_state(const SpectrumPoint& spectrum, const ComplexMatrix& u);
DensityMatrix assemble_state(const SpectrumPoint& spectrum, const UnitaryMatrix& u);

/// Splits a cube point into [spectrum block | frame block] and assembles rho.
std::pair<DensityMatrix, SpectrumPoint> cube_to_state(std::span<const double> point, int d,
                                                      bool rank_deficient);

}  // namespace pptqmc
