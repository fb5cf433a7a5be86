#pragma once

#include <vector>

#include "dictsel/types.hpp"

namespace dictsel {

// Mother dictionary Phi: m x n, every atom (column) unit-norm.
// Two kinds:
//   Dense    — explicit matrix, columns rescaled to unit norm at construction
//   DctDirac — q-times frequency-oversampled cosine atoms followed by the
//              m canonical unit vectors; n = q*m + m. The cosine block is
//              cached (m x q*m) and the identity block is applied implicitly,
//              so the full operator matrix is never formed.
class MotherDictionary {
 public:
  static MotherDictionary dense(Matrix phi);
  static MotherDictionary dct_dirac(int q, int m);

  Index rows() const { return m_; }  // signal dimension m
  Index cols() const { return n_; }  // atom count n

  bool is_dct_dirac() const { return q_ > 0; }
  int oversampling() const { return q_; }

  // Phi * X   (X: n x L) -> m x L
  Matrix forward(const Matrix& X) const;
  // Phi^T * R (R: m x L) -> n x L
  Matrix adjoint(const Matrix& R) const;

  // explicit m x n matrix (tests, small problems)
  Matrix materialize() const;

  // selected atoms as an explicit m x |idx| matrix; indices must be in range
  Matrix columns(const std::vector<Index>& idx) const;

 private:
  MotherDictionary() = default;

  Index m_ = 0, n_ = 0;
  int q_ = 0;      // 0 for dense
  Matrix block_;   // dense: the whole matrix; dct_dirac: cosine block m x q*m
};

}  // namespace dictsel
