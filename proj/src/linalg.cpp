#include "pptqmc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace pptqmc {

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

RealVector singular_values(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

double hermiticity_defect(const ComplexMatrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace pptqmc
