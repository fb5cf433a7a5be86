#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dictsel {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Scalar = double;
using Matrix = MatrixX<Scalar>;
using Vector = VectorX<Scalar>;
using Index  = Eigen::Index;

// entrywise support mask, same shape as the coefficient matrix
using SupportMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// ---- error taxonomy ---------------------------------------------------
// ShapeError: dimension / parameter contract violations (caller bug)
// NumericError: non-finite data or numeric breakdown at runtime
// CapError: refusal, requested work beyond a configured combinatorial cap
// IoError: unreadable / malformed files

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_shape(bool ok, const std::string& msg) {
  if (!ok) throw ShapeError(msg);
}

}  // namespace dictsel
