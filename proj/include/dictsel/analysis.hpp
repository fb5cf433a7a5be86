#pragma once

#include <cstdint>

#include "dictsel/sparsity.hpp"
#include "dictsel/types.hpp"

namespace dictsel {

// binary entropy in bits, H(0) = H(1) = 0; domain error outside [0,1]
double binary_entropy(double t);

// log2 of C(n, k) via log-gamma; exact 0 at the boundary cases
double log2_binomial(std::uint64_t n, std::uint64_t k);

// Subspace census for the joint sparsity model against plain per-column
// sparsity at the same per-column budget:
//   R     = log2( C(p,k)^L * C(n,p) / C(n,k)^L )
// with the entropy surrogate
//   f     = n*H(p/n) + L*p*H(k/p) - n*L*H(k/n)
// and the sandwich
//   -L*log2(p+1) - log2(n+1) + f  <=  R  <=  L*log2(n+1) + f.
// f and the bounds need strict k < p < n; outside that they are reported
// undefined (NaN, f_defined = false) while R stays exact.
struct SubspaceCount {
  double R = 0.0;
  double f = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool f_defined = false;
};

SubspaceCount count_subspaces(int k, int p, int n, int L);

// True iff every s-column submatrix of phi has full rank s, i.e. the spark of
// phi exceeds s. Rank test: smallest singular value > 1e-10 * largest.
// Enumerates all C(n,s) subsets; refuses (CapError) beyond max_subsets.
// s > m returns false immediately (s vectors in R^m cannot be independent).
bool spark_exceeds(const Matrix& phi, int s,
                   std::uint64_t max_subsets = 2'000'000);

// Minimizers stay bounded for every data matrix iff no k-sparse vector sits in
// the nullspace of phi: every k-subset of atoms must be independent.
bool check_boundedness(const Matrix& phi, const ModelParams& mp,
                       std::uint64_t max_subsets = 2'000'000);

// Sufficient condition for a unique minimizer: every 2k-subset independent.
// Requires the hypotheses k <= m/2 and p <= n/2 (ShapeError otherwise, naming
// the inequality that failed).
bool check_uniqueness_sufficient(const Matrix& phi, const ModelParams& mp,
                                 std::uint64_t max_subsets = 2'000'000);

}  // namespace dictsel
