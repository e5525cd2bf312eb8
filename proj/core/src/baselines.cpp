#include "lifted/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "lifted/error.hpp"
#include "lifted/projections.hpp"

namespace lifted {

LassoResult generalized_lasso(const Ensemble& ensemble, double l1_radius, const LassoOptions& options) {
  if (!(l1_radius >= 0.0)) throw DomainError("generalized_lasso: radius must be nonnegative");
  const DesignMatrix& A = ensemble.design;
  if (A.rows() < 1 || A.cols() < 1) throw DimensionError("generalized_lasso: empty ensemble");
  if (ensemble.y.size() != A.rows()) throw DimensionError("generalized_lasso: y length does not match design");

  const Matrix gram = A.transpose() * A;
  const double L = 2.0 * symmetric_eigenvalues(gram).maxCoeff();
  const Vector Aty = A.transpose() * ensemble.y;
  LassoResult out;
  out.x_hat = Vector::Zero(A.cols());
  if (!(L > 0.0)) {
    out.converged = true;
    return out;
  }
  const double step = 1.0 / L;
  for (int it = 1; it <= options.max_iter; ++it) {
    // grad = 2 (A^T A x - A^T y)
    const Vector grad = 2.0 * (gram * out.x_hat - Aty);
    const Vector next = project_vector_l1_ball(out.x_hat - step * grad, l1_radius);
    const double moved = (next - out.x_hat).norm();
    const double scale = std::max(1.0, out.x_hat.norm());
    out.x_hat = next;
    out.iterations = it;
    if (moved <= options.tol * scale) {
      out.converged = true;
      break;
    }
  }
  return out;
}

Vector spectral_baseline(const Ensemble& ensemble) {
  const int m = ensemble.rows();
  if (m < 1 || ensemble.dim() < 1) throw DimensionError("spectral_baseline: empty ensemble");
  const Matrix M = adjoint_lifted_operator(ensemble.design, ensemble.y) / static_cast<double>(m);
  const auto eig = symmetric_eigen(M);
  const double spectral_norm = std::max(std::fabs(eig.values(0)), std::fabs(eig.values(eig.values.size() - 1)));
  if (spectral_norm <= 1e-12) throw ZeroMatrix("spectral_baseline: matrix vanishes");
  Vector v = eig.vectors.col(eig.values.size() - 1);
  normalize_sign(v);
  return v;
}

}  // namespace lifted
