#pragma once

#include <Eigen/Core>

namespace lifted {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
/// Measurement designs: one row per measurement vector a_i.
using DesignMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Eigenvalues in ascending order, eigenvectors as columns.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

/// Symmetric eigensolver (Householder tridiagonalization + implicit QL).
/// Only the lower triangle of `S` is read. Throws EigenFailure.
EigenDecomposition symmetric_eigen(const Matrix& S);
/// Eigenvalues only, ascending.
Vector symmetric_eigenvalues(const Matrix& S);

/// max_ij |S_ij - S_ji|
double asymmetry(const Matrix& S);
/// Throws AsymmetricInput when S is not square or asymmetry(S) > tol.
void require_symmetric(const Matrix& S, double tol, const char* what);

Matrix symmetrize(const Matrix& S);
/// Entrywise l1 norm, sum_ij |W_ij|.
double entrywise_l1(const Matrix& W);
/// Frobenius inner product <U, V> = tr(U^T V).
double frobenius_inner(const Matrix& U, const Matrix& V);

/// Flip `v` so that its largest-magnitude entry is positive. The first index
/// wins ties.
void normalize_sign(Vector& v);

}  // namespace lifted
