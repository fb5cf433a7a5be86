#pragma once

#include <cstdint>
#include <vector>

#include "dictsel/types.hpp"

namespace dictsel {

struct GenParams {
  int m = 20;             // signal dimension
  int n = 80;             // mother dictionary size
  int p = 30;             // planted atom count
  int k = 4;              // per-column sparsity
  int L = 320;            // signal count
  double noise_std = 0.0;

  void validate() const;
};

struct GenResult {
  Matrix phi;                    // m x n, iid normal entries, unit-norm columns
  Matrix X_true;                 // n x L, columns k-sparse inside the planted rows
  Matrix Y;                      // phi * X_true + noise_std * N(0,1)
  std::vector<int> planted_rows; // the p-subset J, ascending
};

// Deterministic planted problem. Stream order from one generator seeded with
// `seed`: (1) phi entries column-major, (2) the row subset J, (3) per column:
// support subset of J, then its k magnitudes U[0.2, 1], then its k signs,
// (4) noise entries column-major (only drawn when noise_std > 0).
GenResult gen_problem(const GenParams& gp, std::uint64_t seed);

// exact-recovery check: selected atoms == planted rows as sets
bool recovery_success(const std::vector<Index>& selected,
                      const std::vector<int>& planted_rows);

}  // namespace dictsel
