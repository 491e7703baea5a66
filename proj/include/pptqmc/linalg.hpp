#pragma once

#include <complex>

#include <Eigen/Dense>

namespace pptqmc {

using complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Ascending eigenvalues of a Hermitian matrix. Only the lower triangle is read.
RealVector hermitian_eigenvalues(const ComplexMatrix& m);

/// Singular values (descending) of an arbitrary complex matrix.
RealVector singular_values(const ComplexMatrix& m);

/// max |m - m^dagger| over entries.
double hermiticity_defect(const ComplexMatrix& m);

}  // namespace pptqmc
