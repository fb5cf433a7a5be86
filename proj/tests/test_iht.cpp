#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "dictsel/iht.hpp"
#include "dictsel/rng.hpp"
#include "dictsel/sparsity.hpp"
#include "dictsel/types.hpp"

using namespace dictsel;

namespace {

Matrix random_dict(Index m, Index d, std::uint64_t seed) {
  Rng rng(seed);
  Matrix D(m, d);
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < m; ++i) D(i, j) = rng.normal();
    D.col(j).normalize();
  }
  return D;
}

}  // namespace

TEST_CASE("single unit atom is coded exactly, in zero iterations") {
  Matrix D(5, 1);
  D << 1, 0, 0, 0, 0;
  Vector y(5);
  y << 2.3, 0, 0, 0, 0;
  IhtConfig cfg;
  cfg.k = 1;
  const auto res = sparse_code(D, y, cfg);
  CHECK(res.x.size() == 1);
  CHECK(res.x[0] == doctest::Approx(2.3).epsilon(1e-15));
  CHECK(res.iterations_run == 0);
  CHECK(res.residual_trace.front() < 1e-28);
}

TEST_CASE("orthonormal dictionary: the thresholded analysis is already optimal") {
  Eigen::HouseholderQR<Matrix> qr(random_dict(8, 8, 5));
  const Matrix Q = qr.householderQ();
  Rng rng(6);
  Vector y(8);
  for (Index i = 0; i < 8; ++i) y(i) = rng.normal();

  IhtConfig cfg;
  cfg.k = 3;
  const auto res = sparse_code(Q, y, cfg);
  const Vector want = project_k(Matrix(Q.transpose() * y), 3);
  CHECK((res.x - want).norm() < 1e-12);
  // the residual is exactly the energy of the discarded coefficients
  const Vector c = Q.transpose() * y;
  const double discarded = c.squaredNorm() - want.squaredNorm();
  CHECK(res.residual_trace.back() == doctest::Approx(discarded).epsilon(1e-12));
}

TEST_CASE("planted sparse signal over a random dictionary is recovered") {
  const Matrix D = random_dict(16, 24, 7);
  Vector xt = Vector::Zero(24);
  xt(3) = 1.1;
  xt(17) = -0.7;
  const Vector y = D * xt;
  IhtConfig cfg;
  cfg.k = 2;
  const auto res = sparse_code(D, y, cfg);
  CHECK((res.x - xt).norm() < 1e-6);
  CHECK(res.residual_trace.back() < 1e-12);
}

TEST_CASE("residual trace is monotone, output k-sparse, line searches tame") {
  Rng seeds(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix D = random_dict(10, 30, seeds.u64());
    Vector y(10);
    for (Index i = 0; i < 10; ++i) y(i) = seeds.normal();
    IhtConfig cfg;
    cfg.k = 4;
    const auto res = sparse_code(D, y, cfg);
    CAPTURE(trial);
    CHECK((res.x.array() != 0.0).count() <= 4);
    for (std::size_t i = 1; i < res.residual_trace.size(); ++i)
      REQUIRE(res.residual_trace[i] <= res.residual_trace[i - 1] + 1e-12);
    CHECK(res.max_backtracks <= 100);
  }
}

TEST_CASE("snr: cap at 300 dB, 20 dB per residual decade, zero reference refused") {
  Vector y(3), r(3);
  y << 3, 0, 4;  // norm 5
  CHECK(snr_db(y, y) == 300.0);
  r = y;
  r(0) -= 0.5;  // residual norm 0.5, ratio 10
  CHECK(snr_db(y, r) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)snr_db(Vector::Zero(3), r), ShapeError);
  CHECK_THROWS_AS((void)snr_db(y, Vector::Zero(4)), ShapeError);
}

TEST_CASE("evaluate_dictionary: per-signal scores, zero columns excluded from mean") {
  const Matrix D = Matrix::Identity(4, 4);
  Matrix Y(4, 3);
  Y.col(0) << 1, 0, 0, 0;   // exactly representable with k = 1
  Y.col(1).setZero();       // excluded
  Y.col(2) << 0, 2, 0, 0;   // exactly representable
  IhtConfig cfg;
  cfg.k = 1;
  const auto rep = evaluate_dictionary(D, Y, cfg);
  REQUIRE(rep.snrs_db.size() == 3);
  CHECK(rep.zero_signals == 1);
  CHECK(rep.snrs_db[0] == 300.0);
  CHECK(std::isnan(rep.snrs_db[1]));
  CHECK(rep.snrs_db[2] == 300.0);
  CHECK(rep.mean_snr_db == 300.0);
  CHECK(rep.residual_norms[1] == 0.0);
}

TEST_CASE("a dictionary containing the true atoms scores higher than a disjoint one") {
  const Matrix D = random_dict(12, 20, 9);
  Rng rng(10);
  Matrix Y(12, 6);
  for (Index j = 0; j < Y.cols(); ++j) {
    Vector x = Vector::Zero(8);  // signals built from the first 8 atoms only
    x(static_cast<Index>(rng.below(8))) = rng.uniform(0.5, 1.0);
    x(static_cast<Index>(rng.below(8))) += rng.uniform(0.5, 1.0);
    Y.col(j) = D.leftCols(8) * x;
  }
  IhtConfig cfg;
  cfg.k = 2;
  const auto good = evaluate_dictionary(D.leftCols(8), Y, cfg);
  const auto bad = evaluate_dictionary(D.rightCols(8), Y, cfg);
  CHECK(good.mean_snr_db > bad.mean_snr_db + 50.0);
}

TEST_CASE("config and input validation") {
  const Matrix D = random_dict(6, 9, 11);
  const Vector y = Vector::Ones(6);
  IhtConfig cfg;

  cfg.k = 0;
  CHECK_THROWS_AS((void)sparse_code(D, y, cfg), ShapeError);
  cfg.k = 10;  // > dictionary size
  CHECK_THROWS_AS((void)sparse_code(D, y, cfg), ShapeError);
  cfg.k = 2;
  cfg.max_iters = 0;
  CHECK_THROWS_AS((void)sparse_code(D, y, cfg), ShapeError);
  cfg.max_iters = 100;
  cfg.stall_tol = 0.0;
  CHECK_THROWS_AS((void)sparse_code(D, y, cfg), ShapeError);
  cfg.stall_tol = 1e-8;
  CHECK_THROWS_AS((void)sparse_code(D, Vector::Ones(5), cfg), ShapeError);

  Matrix bad = D;
  bad(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)sparse_code(bad, y, cfg), NumericError);
}
