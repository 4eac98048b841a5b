#pragma once

#include "ebir/types.hpp"

namespace ebir {

/// Structured covariance descriptor. Quadratic forms and inverse
/// quadratic forms are evaluated without materializing the matrix:
///   Diagonal     exact, O(p)
///   AR(1)        Sigma = s2 * R, R_ij = rho^|i-j|; O(p) via geometric
///                prefix scans; the inverse uses the tridiagonal closed
///                form of R^{-1}
///   Factor       Sigma = diag(idio) + L L^T with a p x r loading
///                matrix; O(p r); inverse via the Woodbury identity
///   Dense        explicit matrix, small p only
class Covariance {
 public:
  enum class Kind { Diagonal, Ar1, Factor, Dense };

  /// Empty placeholder (dim 0); assign from one of the factories.
  Covariance() = default;

  static Covariance diagonal(Vector variances);
  static Covariance ar1(double rho, double s2, Index p);
  static Covariance factor(Matrix loadings, Vector idiosyncratic);
  static Covariance dense(Matrix sigma);

  Kind kind() const { return kind_; }
  Index dim() const;
  double ar1_rho() const { return rho_; }
  double ar1_s2() const { return s2_; }
  const Matrix& factor_loadings() const { return loadings_; }
  const Vector& factor_idiosyncratic() const { return diag_; }

  /// Diagonal of Sigma.
  Vector diagonal_elements() const;

  /// u^T Sigma v. Throws on dimension mismatch.
  double quadratic_form(const Vector& u, const Vector& v) const;

  /// u^T Sigma^{-1} v. Throws on dimension mismatch or singular Sigma.
  double inverse_quadratic_form(const Vector& u, const Vector& v) const;

  /// Sigma x (used by the power iteration and by dense oracles in tests).
  Vector multiply(const Vector& x) const;

  /// Materializes Sigma; intended for small p.
  Matrix dense_matrix() const;

  /// Largest eigenvalue of the correlation matrix
  /// R = D^{-1/2} Sigma D^{-1/2} (power iteration for the structured
  /// kinds, closed solver for Dense). Always >= 1 up to roundoff.
  double max_correlation_eigenvalue() const;

 private:
  Kind kind_ = Kind::Diagonal;
  Vector diag_;      // Diagonal: variances; Factor: idiosyncratic variances
  double rho_ = 0.0; // Ar1
  double s2_ = 1.0;  // Ar1
  Index p_ = 0;      // Ar1
  Matrix loadings_;  // Factor: p x r; Dense: the full matrix
};

} // namespace ebir
