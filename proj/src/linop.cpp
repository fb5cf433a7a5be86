#include "dictsel/linop.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace dictsel {

MotherDictionary MotherDictionary::dense(Matrix phi) {
  require_shape(phi.rows() >= 1 && phi.cols() >= 1,
                "dense dictionary must be non-empty");
  if (!phi.allFinite())
    throw NumericError("dense dictionary has non-finite entries");
  for (Index j = 0; j < phi.cols(); ++j) {
    const double nrm = phi.col(j).norm();
    if (nrm < 1e-14)
      throw ShapeError("dense dictionary: atom " + std::to_string(j) +
                       " is (numerically) zero, cannot normalize");
    phi.col(j) /= nrm;
  }
  MotherDictionary d;
  d.m_ = phi.rows();
  d.n_ = phi.cols();
  d.q_ = 0;
  d.block_ = std::move(phi);
  return d;
}

MotherDictionary MotherDictionary::dct_dirac(int q, int m) {
  require_shape(q >= 1 && m >= 1, "dct_dirac: need q >= 1 and m >= 1");
  const Index nd = static_cast<Index>(q) * m;  // cosine atom count
  Matrix C(m, nd);
  for (Index j = 0; j < nd; ++j) {
    for (Index t = 0; t < m; ++t)
      C(t, j) = std::cos(std::numbers::pi * (static_cast<double>(t) + 0.5) *
                         static_cast<double>(j) / static_cast<double>(nd));
    const double nrm = C.col(j).norm();
    if (nrm < 1e-14)
      throw NumericError("dct_dirac: degenerate cosine atom " +
                         std::to_string(j));
    C.col(j) /= nrm;
  }
  MotherDictionary d;
  d.m_ = m;
  d.n_ = nd + m;
  d.q_ = q;
  d.block_ = std::move(C);
  return d;
}

Matrix MotherDictionary::forward(const Matrix& X) const {
  require_shape(X.rows() == n_, "forward: X must have n = " +
                                    std::to_string(n_) + " rows, got " +
                                    std::to_string(X.rows()));
  if (q_ == 0) return block_ * X;
  const Index nd = n_ - m_;
  // cosine block times the top rows, plus the Dirac rows copied through
  return block_ * X.topRows(nd) + X.bottomRows(m_);
}

Matrix MotherDictionary::adjoint(const Matrix& R) const {
  require_shape(R.rows() == m_, "adjoint: R must have m = " +
                                    std::to_string(m_) + " rows, got " +
                                    std::to_string(R.rows()));
  if (q_ == 0) return block_.transpose() * R;
  const Index nd = n_ - m_;
  Matrix out(n_, R.cols());
  out.topRows(nd) = block_.transpose() * R;
  out.bottomRows(m_) = R;
  return out;
}

Matrix MotherDictionary::materialize() const {
  if (q_ == 0) return block_;
  Matrix full(m_, n_);
  full.leftCols(n_ - m_) = block_;
  full.rightCols(m_) = Matrix::Identity(m_, m_);
  return full;
}

Matrix MotherDictionary::columns(const std::vector<Index>& idx) const {
  Matrix out(m_, static_cast<Index>(idx.size()));
  const Index nd = n_ - m_;
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const Index j = idx[c];
    require_shape(j >= 0 && j < n_, "columns: atom index out of range");
    if (q_ == 0)
      out.col(static_cast<Index>(c)) = block_.col(j);
    else if (j < nd)
      out.col(static_cast<Index>(c)) = block_.col(j);
    else
      out.col(static_cast<Index>(c)) = Vector::Unit(m_, j - nd);
  }
  return out;
}

}  // namespace dictsel
