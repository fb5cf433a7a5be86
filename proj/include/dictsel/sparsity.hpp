#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "dictsel/rng.hpp"
#include "dictsel/types.hpp"

namespace dictsel {

// Joint sparsity model: columns of X are k-sparse, at most p rows of X are
// nonzero. ModelParams carries the two budgets; shapes come from Phi and Y.
struct ModelParams {
  int k = 1;  // per-column sparsity
  int p = 1;  // row (atom) budget

  void validate(Index m, Index n) const {
    require_shape(1 <= k, "model: need k >= 1");
    require_shape(k <= p, "model: need k <= p");
    require_shape(p <= n, "model: need p <= n (atom budget within dictionary)");
    require_shape(k < m, "model: need k < m (column sparsity below signal dim)");
  }
};

namespace detail {

// flags the `keep` entries with the largest scores; ties go to the lower index
// unless `tie` is given, then to a random priority drawn fresh per call
inline void mark_top(const Vector& scores, Index keep, Rng* tie,
                     std::vector<char>& flag) {
  const Index n = scores.size();
  flag.assign(static_cast<std::size_t>(n), 0);
  if (keep <= 0) return;
  if (keep >= n) {
    std::fill(flag.begin(), flag.end(), 1);
    return;
  }
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::vector<Index> pri;
  if (tie) {
    pri.resize(static_cast<std::size_t>(n));
    std::iota(pri.begin(), pri.end(), Index{0});
    for (Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Index>(tie->below(static_cast<std::uint64_t>(i) + 1));
      std::swap(pri[static_cast<std::size_t>(i)], pri[static_cast<std::size_t>(j)]);
    }
  }
  auto better = [&](Index a, Index b) {
    const double sa = scores[a], sb = scores[b];
    if (sa != sb) return sa > sb;
    if (tie) return pri[static_cast<std::size_t>(a)] < pri[static_cast<std::size_t>(b)];
    return a < b;
  };
  // O(n) selection; the set in front of the split is unique because `better`
  // is a strict total order
  std::nth_element(idx.begin(), idx.begin() + keep, idx.end(), better);
  for (Index i = 0; i < keep; ++i) flag[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])] = 1;
}

}  // namespace detail

// keep the k largest-magnitude entries of every column, zero the rest
template <typename Derived>
Matrix project_k(const Eigen::MatrixBase<Derived>& X, Index k, Rng* tie = nullptr) {
  require_shape(k >= 0, "project_k: k must be >= 0");
  Matrix Z = X.derived();
  if (k >= Z.rows()) return Z;
  std::vector<char> flag;
  for (Index j = 0; j < Z.cols(); ++j) {
    const Vector scores = Z.col(j).cwiseAbs();
    detail::mark_top(scores, k, tie, flag);
    for (Index i = 0; i < Z.rows(); ++i)
      if (!flag[static_cast<std::size_t>(i)]) Z(i, j) = 0.0;
  }
  return Z;
}

// keep the p rows costing most to delete, zero the rest. Zeroing row i costs
// its squared norm, so ranking rows by squared norm is the Frobenius-nearest
// point with at most p nonzero rows.
template <typename Derived>
Matrix project_p(const Eigen::MatrixBase<Derived>& X, Index p, Rng* tie = nullptr) {
  require_shape(p >= 0, "project_p: p must be >= 0");
  Matrix Z = X.derived();
  if (p >= Z.rows()) return Z;
  const Vector scores = Z.rowwise().squaredNorm();
  std::vector<char> flag;
  detail::mark_top(scores, p, tie, flag);
  for (Index i = 0; i < Z.rows(); ++i)
    if (!flag[static_cast<std::size_t>(i)]) Z.row(i).setZero();
  return Z;
}

// row projection first, then per-column thresholding: lands in the joint set
// (column projection cannot repopulate zeroed rows). Note this composition is
// not the exact Euclidean projection onto the intersection in every tie case.
template <typename Derived>
Matrix project_kp(const Eigen::MatrixBase<Derived>& X, Index k, Index p,
                  Rng* tie = nullptr) {
  return project_k(project_p(X, p, tie), k, tie);
}

// alternate composition order, exposed for study only. Also lands in the
// joint set (row cuts cannot break column sparsity) but generally at a
// different point; nothing in the pipeline uses it.
template <typename Derived>
Matrix project_pk(const Eigen::MatrixBase<Derived>& X, Index k, Index p,
                  Rng* tie = nullptr) {
  return project_p(project_k(X, k, tie), p, tie);
}

// ---- support queries (exact-zero based) --------------------------------

inline SupportMask support_of(const Matrix& X) {
  return X.array() != 0.0;
}

inline std::vector<std::vector<int>> column_supports(const Matrix& X) {
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(X.cols()));
  for (Index j = 0; j < X.cols(); ++j)
    for (Index i = 0; i < X.rows(); ++i)
      if (X(i, j) != 0.0) cols[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
  return cols;
}

// indices of nonzero rows, ascending — the selected atoms
inline std::vector<Index> selected_atoms(const Matrix& X) {
  std::vector<Index> rows;
  for (Index i = 0; i < X.rows(); ++i)
    if ((X.row(i).array() != 0.0).any()) rows.push_back(i);
  return rows;
}

inline bool is_col_k_sparse(const Matrix& X, Index k) {
  for (Index j = 0; j < X.cols(); ++j)
    if ((X.col(j).array() != 0.0).count() > k) return false;
  return true;
}

inline bool is_row_p_sparse(const Matrix& X, Index p) {
  return static_cast<Index>(selected_atoms(X).size()) <= p;
}

inline bool in_joint_set(const Matrix& X, Index k, Index p) {
  return is_col_k_sparse(X, k) && is_row_p_sparse(X, p);
}

}  // namespace dictsel
