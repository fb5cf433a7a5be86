#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "dictsel/rng.hpp"
#include "dictsel/sparsity.hpp"
#include "dictsel/types.hpp"

namespace dictsel {

enum class ConstraintMode { KP, KOnly, POnly };
enum class StopReason { Stalled, MaxIters, ZeroGradient };

struct SolverConfig {
  ModelParams params;
  ConstraintMode mode = ConstraintMode::KP;
  double rho = 0.95;              // line-search acceptance factor, in (0,1)
  double beta = 0.5;              // step shrink factor, in (0,1)
  std::optional<double> epsilon;  // stall threshold, squared-Frobenius units;
                                  // unset means 1e-12 * ||Y||_F^2
  int max_iters = 1000;
  bool randomize_ties = false;    // break projection ties randomly
  std::uint64_t tie_seed = 0;

  void validate() const {
    require_shape(rho > 0.0 && rho < 1.0, "solver: need rho in (0,1)");
    require_shape(beta > 0.0 && beta < 1.0, "solver: need beta in (0,1)");
    require_shape(!epsilon || *epsilon > 0.0, "solver: need epsilon > 0");
    require_shape(max_iters >= 1, "solver: need max_iters >= 1");
  }
};

struct SolverReport {
  Matrix X_star;
  std::vector<double> objective_trace;  // psi per accepted iterate, trace[0] = init
  int iterations_run = 0;
  StopReason stop_reason = StopReason::MaxIters;
  std::vector<Index> selected;          // nonzero rows of X_star, ascending
  // diagnostics
  int max_backtracks = 0;               // worst line-search shrink count
  double max_iterate_norm = 0.0;        // largest ||X||_F seen
};

// adapter: drive the templated core with a plain (not normalized) matrix
struct DenseOp {
  const Matrix& A;
  Index rows() const { return A.rows(); }
  Index cols() const { return A.cols(); }
  Matrix forward(const Matrix& X) const { return A * X; }
  Matrix adjoint(const Matrix& R) const { return A.transpose() * R; }
  Matrix columns(const std::vector<Index>& idx) const {
    Matrix D(A.rows(), static_cast<Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
      D.col(static_cast<Index>(j)) = A.col(idx[j]);
    return D;
  }
};

// psi(X) = ||Y - Phi X||_F^2
template <class Op>
double objective(const Op& phi, const Matrix& Y, const Matrix& X) {
  require_shape(Y.rows() == phi.rows(), "objective: Y rows != signal dim");
  require_shape(X.rows() == phi.cols(), "objective: X rows != atom count");
  require_shape(Y.cols() == X.cols(), "objective: Y and X column counts differ");
  return (Y - phi.forward(X)).squaredNorm();
}

// grad psi(X) = 2 Phi^T (Phi X - Y)
template <class Op>
Matrix gradient(const Op& phi, const Matrix& Y, const Matrix& X) {
  require_shape(Y.rows() == phi.rows(), "gradient: Y rows != signal dim");
  require_shape(X.rows() == phi.cols(), "gradient: X rows != atom count");
  require_shape(Y.cols() == X.cols(), "gradient: Y and X column counts differ");
  return 2.0 * phi.adjoint(phi.forward(X) - Y);
}

// normalized step on the masked gradient: ||G_S||^2 / ||Phi G_S||^2.
// nullopt when the masked gradient vanishes (caller treats as converged);
// falls back to 1 when Phi annihilates G_S (line search then governs).
template <class Op>
std::optional<double> masked_step_size(const Op& phi, const Matrix& G,
                                       const SupportMask& S) {
  require_shape(G.rows() == S.rows() && G.cols() == S.cols(),
                "masked_step_size: mask shape mismatch");
  require_shape(G.rows() == phi.cols(), "masked_step_size: G rows != atom count");
  const Matrix Gs = S.select(G, 0.0);
  const double num = Gs.squaredNorm();
  if (num == 0.0) return std::nullopt;
  const double den = phi.forward(Gs).squaredNorm();
  if (den == 0.0) return 1.0;
  return num / den;
}

namespace detail {

template <class Op>
Matrix project_mode(const Op&, const Matrix& W, const SolverConfig& cfg, Rng* tie) {
  switch (cfg.mode) {
    case ConstraintMode::KOnly:
      return project_k(W, cfg.params.k, tie);
    case ConstraintMode::POnly:
      return project_p(W, cfg.params.p, tie);
    case ConstraintMode::KP:
    default:
      return project_kp(W, cfg.params.k, cfg.params.p, tie);
  }
}

}  // namespace detail

// Alternating projected gradient descent on psi over the configured set.
// Per iteration: normalized step on the support of the current iterate, full
// gradient step, projection, then a backtracking line search that shrinks the
// step while mu > (rho/2) ||X-Z||^2 / ||Phi(X-Z)||^2 or the objective would
// grow. The support is refreshed only after a candidate is accepted.
template <class Op>
SolverReport select_dictionary(const Op& phi, const Matrix& Y,
                               const SolverConfig& cfg) {
  cfg.validate();
  cfg.params.validate(phi.rows(), phi.cols());
  require_shape(Y.rows() == phi.rows(), "select: Y rows != signal dim");
  require_shape(Y.cols() >= 1, "select: Y has no columns");
  if (!Y.allFinite()) throw NumericError("select: Y has non-finite entries");

  Rng tie_rng(cfg.tie_seed);
  Rng* tie = cfg.randomize_ties ? &tie_rng : nullptr;
  const double eps = cfg.epsilon ? *cfg.epsilon : 1e-12 * Y.squaredNorm();

  SolverReport rep;
  Matrix X = detail::project_mode(phi, phi.adjoint(Y), cfg, tie);
  SupportMask mask = support_of(X);
  Matrix PhiX = phi.forward(X);
  double psiX = (Y - PhiX).squaredNorm();
  rep.objective_trace.push_back(psiX);
  rep.max_iterate_norm = X.norm();

  constexpr int kHardShrinkCap = 200;  // safety; tests assert << this
  StopReason stop = StopReason::MaxIters;
  int it = 0;

  while (it < cfg.max_iters) {
    const Matrix G = 2.0 * phi.adjoint(PhiX - Y);
    const auto mu0 = masked_step_size(phi, G, mask);
    if (!mu0) {
      stop = StopReason::ZeroGradient;
      break;
    }
    double mu = *mu0;

    Matrix Z = detail::project_mode(phi, X - mu * G, cfg, tie);
    Matrix PhiZ = phi.forward(Z);
    double dist2 = (X - Z).squaredNorm();
    if (dist2 < eps) {  // first candidate already indistinguishable
      stop = StopReason::Stalled;
      break;
    }
    double psiZ = (Y - PhiZ).squaredNorm();
    double phidist2 = (PhiX - PhiZ).squaredNorm();

    int shrinks = 0;
    bool give_up = false;
    while ((phidist2 > 0.0 && mu > 0.5 * cfg.rho * dist2 / phidist2) ||
           psiZ > psiX) {
      if (++shrinks > kHardShrinkCap) {
        give_up = true;
        break;
      }
      mu *= cfg.beta;
      Z = detail::project_mode(phi, X - mu * G, cfg, tie);
      PhiZ = phi.forward(Z);
      dist2 = (X - Z).squaredNorm();
      psiZ = (Y - PhiZ).squaredNorm();
      phidist2 = (PhiX - PhiZ).squaredNorm();
    }
    rep.max_backtracks = std::max(rep.max_backtracks, shrinks);
    if (give_up) {  // no acceptable step found; keep the current iterate
      stop = StopReason::Stalled;
      break;
    }

    X.swap(Z);
    PhiX.swap(PhiZ);
    psiX = psiZ;
    mask = support_of(X);
    rep.objective_trace.push_back(psiX);
    rep.max_iterate_norm = std::max(rep.max_iterate_norm, X.norm());
    ++it;

    if (dist2 < eps) {  // accepted step no longer moves the iterate
      stop = StopReason::Stalled;
      break;
    }
  }

  rep.iterations_run = it;
  rep.stop_reason = stop;
  rep.X_star = std::move(X);
  rep.selected = selected_atoms(rep.X_star);
  return rep;
}

// the chosen dictionary itself: atoms of phi that ended up used. Can come out
// narrower than p when a budgeted row finished exactly zero.
template <class Op>
Matrix extract_dictionary(const Op& phi, const SolverReport& rep) {
  return phi.columns(rep.selected);
}

}  // namespace dictsel
