#pragma once

#include <cstdint>
#include <utility>

#include "ebir/types.hpp"

namespace ebir {

/// Hyperparameters for the truncated stick-breaking Dirichlet-process
/// mixture with base measure G0 = w*delta_0 + (1-w)*N(0, sigma2).
struct VBConfig {
  double alpha = 1.0;    // DP concentration, > 0
  double sigma2 = 16.0;  // slab variance, > 0
  double w = 0.9;        // spike weight, in (0,1)
  Index T = 20;          // truncation level, >= 2
  double tol = 1e-6;     // max elementwise change in Phi at convergence
  int max_iter = 500;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument if any bound is violated.
void validate(const VBConfig& cfg);

/// Truncated variational posterior. phi is the p x T responsibility
/// matrix (rows sum to 1); (m, tau2, pspike) parameterize the per-cluster
/// factor q(eta*_t, xi_t) = pspike_t 1{xi=1} delta_0
///                          + (1-pspike_t) 1{xi=0} N(m_t, tau2_t);
/// (gamma1, gamma2) are the Beta parameters of the stick factors for
/// t = 1..T-1 (V_T is fixed at 1 and has no Beta factor).
struct VBState {
  Matrix phi;     // p x T
  Vector m;       // T
  Vector tau2;    // T
  Vector pspike;  // T
  Vector gamma1;  // T-1
  Vector gamma2;  // T-1
  int iterations = 0;
  bool converged = false;
};

/// E_q[log V_t] and E_q[log(1 - V_t)] for Beta(gamma1_t, gamma2_t)
/// sticks, returned as T-vectors whose last slot is (0, 0) because the
/// final stick is deterministic (V_T = 1). Throws std::domain_error on
/// a nonpositive parameter.
std::pair<Vector, Vector> expected_log_sticks(const Vector& gamma1,
                                              const Vector& gamma2);

/// Closed-form coordinate-ascent update of the cluster factors.
/// With S_t = sum_k phi_kt and W_t = sum_k phi_kt * y_k:
///   m_t      = sigma2 W_t / (sigma2 S_t + 1)
///   tau2_t   = sigma2 / (sigma2 S_t + 1)
///   pspike_t = sigmoid( log(w/(1-w)) + log(sigma2 S_t + 1)/2
///                       - sigma2 W_t^2 / (2 (sigma2 S_t + 1)) )
struct ClusterParams {
  Vector m, tau2, pspike;
};
ClusterParams update_cluster_params(const Matrix& phi, const Vector& y,
                                    const VBConfig& cfg);

/// Stick updates for t = 1..T-1:
///   gamma1_t = 1 + sum_k phi_kt
///   gamma2_t = alpha + sum_k sum_{j>t} phi_kj
struct StickParams {
  Vector gamma1, gamma2;
};
StickParams update_stick_params(const Matrix& phi, const VBConfig& cfg);

/// Responsibility update: row-wise softmax (with max subtraction) of
///   S_kt = E log V_t + sum_{i<t} E log(1-V_i)
///          + (1-p_t) m_t y_k - (1-p_t)(m_t^2 + tau2_t)/2.
Matrix update_assignments(const Vector& m, const Vector& tau2,
                          const Vector& pspike, const Vector& elogv,
                          const Vector& elog1mv, const Vector& y);

/// Data-driven initial responsibilities: one anchor at 0 plus T-1
/// kmeans++-style anchors drawn from the observed values (seeded), then
/// a Gaussian-likelihood softmax around the anchors. Keeps far-out
/// clusters alive at initialization, which a symmetric random start
/// does not.
Matrix init_assignments(const Vector& y, const VBConfig& cfg);

/// One full update cycle (cluster params -> sticks -> stick expectations
/// -> assignments) applied in place. Returns the elementwise max
/// absolute change in phi.
double vb_iterate(VBState& state, const Vector& y, const VBConfig& cfg);

/// Runs coordinate ascent from init_assignments(y, cfg) until the phi
/// change drops to cfg.tol or max_iter is hit. Deterministic given
/// (y, cfg) including the seed. Throws on non-finite y.
VBState vb_fit(const Vector& y, const VBConfig& cfg);

/// Same, but from a caller-supplied initial responsibility matrix
/// (rows must sum to 1).
VBState vb_fit(const Vector& y, const VBConfig& cfg, Matrix phi0);

} // namespace ebir
