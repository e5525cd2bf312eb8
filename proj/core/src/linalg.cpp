#include "lifted/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "lifted/error.hpp"

namespace lifted {

EigenDecomposition symmetric_eigen(const Matrix& S) {
  if (S.rows() != S.cols()) throw DimensionError("symmetric_eigen: matrix is not square");
  if (S.size() == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw EigenFailure("symmetric_eigen: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector symmetric_eigenvalues(const Matrix& S) {
  if (S.rows() != S.cols()) throw DimensionError("symmetric_eigenvalues: matrix is not square");
  if (S.size() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenFailure("symmetric_eigenvalues: solver did not converge");
  return solver.eigenvalues();
}

double asymmetry(const Matrix& S) {
  if (S.rows() != S.cols()) return INFINITY;
  return (S - S.transpose()).cwiseAbs().maxCoeff();
}

void require_symmetric(const Matrix& S, double tol, const char* what) {
  if (S.rows() != S.cols()) throw AsymmetricInput(std::string(what) + ": matrix is not square");
  if (S.size() == 0) return;
  const double gap = asymmetry(S);
  if (!(gap <= tol)) {
    throw AsymmetricInput(std::string(what) + ": asymmetry " + std::to_string(gap) + " exceeds tolerance");
  }
}

Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

double entrywise_l1(const Matrix& W) { return W.cwiseAbs().sum(); }

double frobenius_inner(const Matrix& U, const Matrix& V) { return U.cwiseProduct(V).sum(); }

void normalize_sign(Vector& v) {
  if (v.size() == 0) return;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::fabs(v(i)) > std::fabs(v(best))) best = i;
  }
  if (v(best) < 0) v = -v;
}

}  // namespace lifted
