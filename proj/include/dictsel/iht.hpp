#pragma once

#include <vector>

#include "dictsel/types.hpp"

namespace dictsel {

struct IhtConfig {
  int k = 1;               // sparsity of the code
  int max_iters = 300;
  double stall_tol = 1e-8;  // relative residual-change stop
  double rho = 0.95;        // line-search acceptance factor
  double beta = 0.5;        // step shrink factor

  void validate(Index m, Index d) const;
};

struct IhtResult {
  Vector x;                           // k-sparse code
  std::vector<double> residual_trace; // ||y - D x||^2 per accepted iterate
  int iterations_run = 0;
  int max_backtracks = 0;
};

// Iterative hard thresholding with a normalized step on the current support
// and the same backtracking guard as the joint solver (monotone residual).
IhtResult sparse_code(const Matrix& D, const Vector& y, const IhtConfig& cfg);

// 20*log10(||y|| / ||y - D x||), capped at 300 dB (also used for exact fits)
double snr_db(const Vector& y, const Vector& approx);

struct EvalReport {
  std::vector<double> residual_norms;  // per signal
  std::vector<double> snrs_db;         // per signal; NaN for zero signals
  double mean_snr_db = 0.0;            // over nonzero signals only
  int zero_signals = 0;                // columns excluded from the mean
};

// sparse-code every column of Y against D and report per-signal quality
EvalReport evaluate_dictionary(const Matrix& D, const Matrix& Y,
                               const IhtConfig& cfg);

}  // namespace dictsel
