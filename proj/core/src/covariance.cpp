#include "ebir/covariance.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ebir {

Covariance Covariance::diagonal(Vector variances) {
  if (variances.size() < 1 || (variances.array() <= 0.0).any()) {
    throw std::invalid_argument("covariance: diagonal entries must be positive");
  }
  Covariance c;
  c.kind_ = Kind::Diagonal;
  c.diag_ = std::move(variances);
  return c;
}

Covariance Covariance::ar1(double rho, double s2, Index p) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw std::invalid_argument("covariance: AR(1) rho must lie in (-1,1)");
  }
  if (!(s2 > 0.0) || p < 1) {
    throw std::invalid_argument("covariance: AR(1) needs s2 > 0 and p >= 1");
  }
  Covariance c;
  c.kind_ = Kind::Ar1;
  c.rho_ = rho;
  c.s2_ = s2;
  c.p_ = p;
  return c;
}

Covariance Covariance::factor(Matrix loadings, Vector idiosyncratic) {
  if (loadings.rows() != idiosyncratic.size() || loadings.rows() < 1) {
    throw std::invalid_argument("covariance: factor shape mismatch");
  }
  if ((idiosyncratic.array() <= 0.0).any()) {
    throw std::invalid_argument("covariance: idiosyncratic variances must be positive");
  }
  Covariance c;
  c.kind_ = Kind::Factor;
  c.loadings_ = std::move(loadings);
  c.diag_ = std::move(idiosyncratic);
  return c;
}

Covariance Covariance::dense(Matrix sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw std::invalid_argument("covariance: dense matrix must be square");
  }
  if ((sigma.diagonal().array() <= 0.0).any()) {
    throw std::invalid_argument("covariance: dense diagonal must be positive");
  }
  Covariance c;
  c.kind_ = Kind::Dense;
  c.loadings_ = std::move(sigma);
  return c;
}

Index Covariance::dim() const {
  switch (kind_) {
    case Kind::Diagonal: return diag_.size();
    case Kind::Ar1: return p_;
    case Kind::Factor: return diag_.size();
    case Kind::Dense: return loadings_.rows();
  }
  return 0;
}

Vector Covariance::diagonal_elements() const {
  switch (kind_) {
    case Kind::Diagonal:
      return diag_;
    case Kind::Ar1:
      return Vector::Constant(p_, s2_);
    case Kind::Factor:
      return diag_ + loadings_.array().square().rowwise().sum().matrix();
    case Kind::Dense:
      return loadings_.diagonal();
  }
  return {};
}

namespace {

void check_dims(Index expect, const Vector& u, const Vector& v) {
  if (u.size() != expect || v.size() != expect) {
    throw std::invalid_argument("covariance: vector dimension mismatch");
  }
}

// u^T R v for R_ij = rho^|i-j| using forward/backward geometric scans.
double ar1_corr_form(double rho, const Vector& u, const Vector& v) {
  const Index p = u.size();
  double result = 0.0;
  double fwd = 0.0;  // sum_{i<j} v_i rho^{j-i}
  for (Index j = 0; j < p; ++j) {
    if (j > 0) fwd = rho * (fwd + v[j - 1]);
    result += u[j] * (v[j] + fwd);
  }
  double bwd = 0.0;  // sum_{i>j} v_i rho^{i-j}
  for (Index j = p - 2; j >= 0; --j) {
    bwd = rho * (bwd + v[j + 1]);
    result += u[j] * bwd;
  }
  return result;
}

// R x for the AR(1) correlation matrix, same scans.
Vector ar1_corr_multiply(double rho, const Vector& x) {
  const Index p = x.size();
  Vector out(p);
  double fwd = 0.0;
  for (Index j = 0; j < p; ++j) {
    if (j > 0) fwd = rho * (fwd + x[j - 1]);
    out[j] = x[j] + fwd;
  }
  double bwd = 0.0;
  for (Index j = p - 2; j >= 0; --j) {
    bwd = rho * (bwd + x[j + 1]);
    out[j] += bwd;
  }
  return out;
}

} // namespace

double Covariance::quadratic_form(const Vector& u, const Vector& v) const {
  check_dims(dim(), u, v);
  switch (kind_) {
    case Kind::Diagonal:
      return (u.array() * diag_.array() * v.array()).sum();
    case Kind::Ar1:
      return s2_ * ar1_corr_form(rho_, u, v);
    case Kind::Factor: {
      const double diag_part = (u.array() * diag_.array() * v.array()).sum();
      const Vector lu = loadings_.transpose() * u;
      const Vector lv = loadings_.transpose() * v;
      return diag_part + lu.dot(lv);
    }
    case Kind::Dense:
      return u.dot(loadings_ * v);
  }
  return 0.0;
}

double Covariance::inverse_quadratic_form(const Vector& u, const Vector& v) const {
  check_dims(dim(), u, v);
  switch (kind_) {
    case Kind::Diagonal:
      return (u.array() * v.array() / diag_.array()).sum();
    case Kind::Ar1: {
      // R^{-1} is tridiagonal: (1-rho^2)^{-1} * [c_i on the diagonal
      // (1 at the ends, 1+rho^2 inside), -rho off the diagonal].
      const Index p = p_;
      if (p == 1) return u[0] * v[0] / s2_;
      double acc = u[0] * v[0] + u[p - 1] * v[p - 1];
      const double mid = 1.0 + rho_ * rho_;
      for (Index i = 1; i + 1 < p; ++i) acc += mid * u[i] * v[i];
      for (Index i = 0; i + 1 < p; ++i) {
        acc -= rho_ * (u[i] * v[i + 1] + u[i + 1] * v[i]);
      }
      return acc / ((1.0 - rho_ * rho_) * s2_);
    }
    case Kind::Factor: {
      // Woodbury: (D + L L^T)^{-1} = D^{-1} - D^{-1} L M^{-1} L^T D^{-1},
      // M = I_r + L^T D^{-1} L.
      const Vector du = (u.array() / diag_.array()).matrix();
      const Vector dv = (v.array() / diag_.array()).matrix();
      const Vector lu = loadings_.transpose() * du;
      const Vector lv = loadings_.transpose() * dv;
      const Index r = loadings_.cols();
      Matrix cap = Matrix::Identity(r, r);
      cap.noalias() +=
          loadings_.transpose() *
          (loadings_.array().colwise() / diag_.array()).matrix();
      const Eigen::LDLT<Matrix> solver(cap);
      if (solver.info() != Eigen::Success) {
        throw std::runtime_error("covariance: singular factor capacitance");
      }
      return u.dot(dv) - lu.dot(solver.solve(lv));
    }
    case Kind::Dense: {
      const Eigen::LDLT<Matrix> solver(loadings_);
      if (solver.info() != Eigen::Success || !solver.isPositive()) {
        throw std::runtime_error("covariance: dense matrix not positive definite");
      }
      return u.dot(solver.solve(v));
    }
  }
  return 0.0;
}

Vector Covariance::multiply(const Vector& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("covariance: vector dimension mismatch");
  }
  switch (kind_) {
    case Kind::Diagonal:
      return (diag_.array() * x.array()).matrix();
    case Kind::Ar1:
      return s2_ * ar1_corr_multiply(rho_, x);
    case Kind::Factor:
      return (diag_.array() * x.array()).matrix() +
             loadings_ * (loadings_.transpose() * x);
    case Kind::Dense:
      return loadings_ * x;
  }
  return {};
}

Matrix Covariance::dense_matrix() const {
  const Index p = dim();
  switch (kind_) {
    case Kind::Diagonal:
      return diag_.asDiagonal();
    case Kind::Ar1: {
      Matrix out(p, p);
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
          out(i, j) = s2_ * std::pow(rho_, std::abs(static_cast<double>(i - j)));
        }
      }
      return out;
    }
    case Kind::Factor: {
      Matrix out = loadings_ * loadings_.transpose();
      out.diagonal() += diag_;
      return out;
    }
    case Kind::Dense:
      return loadings_;
  }
  return {};
}

double Covariance::max_correlation_eigenvalue() const {
  const Index p = dim();
  if (kind_ == Kind::Diagonal || p == 1) return 1.0;
  if (kind_ == Kind::Dense) {
    const Vector d = diagonal_elements().array().rsqrt();
    const Matrix corr = d.asDiagonal() * loadings_ * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> solver(corr,
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
  }

  // Power iteration on R = D^{-1/2} Sigma D^{-1/2} with the fast
  // Sigma-multiply; R is SPD so this converges to the top eigenvalue.
  const Vector inv_sqrt_d = diagonal_elements().array().rsqrt();
  Vector x(p);
  for (Index i = 0; i < p; ++i) {
    x[i] = 1.0 + 0.5 * static_cast<double>(i % 7) / 7.0;  // break symmetry
  }
  x.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < 10000; ++iter) {
    Vector z = (inv_sqrt_d.array() *
                multiply((inv_sqrt_d.array() * x.array()).matrix()).array())
                   .matrix();
    const double next = x.dot(z);
    const double norm = z.norm();
    if (norm == 0.0) return 0.0;
    x = z / norm;
    if (std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

} // namespace ebir
