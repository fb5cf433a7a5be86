#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dictsel/analysis.hpp"
#include "dictsel/rng.hpp"
#include "dictsel/types.hpp"

using namespace dictsel;

namespace {

Matrix random_matrix(Index r, Index c, std::uint64_t seed) {
  Rng rng(seed);
  Matrix A(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) A(i, j) = rng.normal();
  return A;
}

// exact integer binomial, independent of the lgamma path under test
unsigned __int128 binom_exact(int n, int k) {
  unsigned __int128 c = 1;
  for (int i = 1; i <= k; ++i)
    c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  return c;
}

double log2_u128(unsigned __int128 v) {
  // split into high/low 64-bit halves; values here stay far below 2^106
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  if (hi == 0) return std::log2(static_cast<double>(lo));
  return std::log2(static_cast<double>(hi) * 0x1.0p64 + static_cast<double>(lo));
}

// is there a nonzero vector with <= k nonzeros in the nullspace of phi?
// direct enumeration: some k-column submatrix is rank deficient
bool sparse_null_vector_exists(const Matrix& phi, int k) {
  const int n = static_cast<int>(phi.cols());
  std::vector<int> comb(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
  while (true) {
    Matrix sub(phi.rows(), k);
    for (int i = 0; i < k; ++i) sub.col(i) = phi.col(comb[static_cast<std::size_t>(i)]);
    Eigen::JacobiSVD<Matrix> svd(sub);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) return true;
    int i = k - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return false;
}

}  // namespace

TEST_CASE("binary entropy: anchors and symmetry") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // frozen high-precision value; the coarser 0.49998 figure is only good to 1e-4
  CHECK(binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK(std::abs(binary_entropy(0.11) - 0.49998) < 1e-4);
  CHECK(binary_entropy(0.25) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
  for (double t : {0.03, 0.2, 0.41})
    CHECK(binary_entropy(t) == doctest::Approx(binary_entropy(1.0 - t)).epsilon(1e-13));
  CHECK_THROWS_AS((void)binary_entropy(-0.01), std::domain_error);
  CHECK_THROWS_AS((void)binary_entropy(1.01), std::domain_error);
}

TEST_CASE("log2_binomial tracks exact integer binomials") {
  for (int n = 0; n <= 60; n += 3)
    for (int k = 0; k <= n; k += (n < 9 ? 1 : 5)) {
      const double want = log2_u128(binom_exact(n, k));
      CAPTURE(n);
      CAPTURE(k);
      CHECK(log2_binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)) ==
            doctest::Approx(want).epsilon(1e-12));
    }
  CHECK(log2_binomial(7, 0) == 0.0);
  CHECK(log2_binomial(7, 7) == 0.0);
  CHECK_THROWS_AS((void)log2_binomial(3, 4), std::domain_error);
}

TEST_CASE("subspace census spot value (2,4,8,3)") {
  const auto c = count_subspaces(2, 4, 8, 3);
  // exact: log2(6^3 * 70 / 28^3)
  const double exact = std::log2(216.0 * 70.0) - std::log2(21952.0);
  CHECK(c.R == doctest::Approx(exact).epsilon(1e-9));
  CHECK(c.R == doctest::Approx(-0.5378942470643773).epsilon(1e-6));
  REQUIRE(c.f_defined);
  CHECK(c.f == doctest::Approx(0.5293250129808129).epsilon(1e-9));
  CHECK(c.lower == doctest::Approx(-9.606384273123586).epsilon(1e-9));
  CHECK(c.upper == doctest::Approx(10.03910001730775).epsilon(1e-9));
  CHECK(c.lower <= c.R);
  CHECK(c.R <= c.upper);
}

TEST_CASE("R from log-gamma equals R from exact binomials up to n = 32") {
  Rng rng(4001);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(30));  // 3..32
    const int p = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
    const int L = 1 + static_cast<int>(rng.below(8));
    const auto c = count_subspaces(k, p, n, L);
    const double want = L * (log2_u128(binom_exact(p, k)) - log2_u128(binom_exact(n, k))) +
                        log2_u128(binom_exact(n, p));
    CAPTURE(k);
    CAPTURE(p);
    CAPTURE(n);
    CAPTURE(L);
    CHECK(c.R == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("entropy bounds sandwich R across a random sweep") {
  Rng rng(4002);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(61));  // 4..64
    const int p = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 3)));  // 2..n-2
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 1)));  // 1..p-1
    const int L = 1 + static_cast<int>(rng.below(8));
    const auto c = count_subspaces(k, p, n, L);
    REQUIRE(c.f_defined);
    CAPTURE(k);
    CAPTURE(p);
    CAPTURE(n);
    CAPTURE(L);
    REQUIRE(c.lower <= c.R + 1e-9);
    REQUIRE(c.R <= c.upper + 1e-9);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("degenerate budgets: R stays exact, f goes undefined") {
  const auto same = count_subspaces(3, 3, 3, 5);  // k = p = n
  CHECK(same.R == 0.0);
  CHECK_FALSE(same.f_defined);
  CHECK(std::isnan(same.f));
  CHECK(std::isnan(same.lower));
  CHECK(std::isnan(same.upper));

  const auto kp = count_subspaces(2, 2, 9, 4);  // k = p < n
  CHECK_FALSE(kp.f_defined);
  // C(2,2)^4 * C(9,2) / C(9,2)^4 = C(9,2)^(-3)
  CHECK(kp.R == doctest::Approx(-3.0 * std::log2(36.0)).epsilon(1e-12));

  CHECK_THROWS_AS((void)count_subspaces(0, 2, 4, 1), ShapeError);
  CHECK_THROWS_AS((void)count_subspaces(3, 2, 4, 1), ShapeError);
  CHECK_THROWS_AS((void)count_subspaces(1, 2, 4, 0), ShapeError);
}

TEST_CASE("spark_exceeds on the stock examples") {
  Matrix ii(2, 4);
  ii << 1, 0, 1, 0, 0, 1, 0, 1;  // [I | I]
  CHECK_FALSE(spark_exceeds(ii, 2));
  CHECK(spark_exceeds(ii, 1));

  CHECK(spark_exceeds(Matrix::Identity(4, 4), 4));

  Matrix g = random_matrix(6, 12, 777);
  for (Index j = 0; j < g.cols(); ++j) g.col(j).normalize();
  CHECK(spark_exceeds(g, 5));          // C(12,5) = 792 subsets, all full rank
  for (int s = 1; s < 5; ++s) CHECK(spark_exceeds(g, s));  // monotone
  CHECK_FALSE(spark_exceeds(g, 7));    // s > m: dependent for free
}

TEST_CASE("spark_exceeds refuses past the subset cap") {
  const Matrix g = random_matrix(20, 30, 88);
  CHECK_THROWS_AS((void)spark_exceeds(g, 15, 1000), CapError);
  CHECK_THROWS_AS((void)spark_exceeds(g, 0), ShapeError);
  CHECK_THROWS_AS((void)spark_exceeds(g, 31), ShapeError);
}

TEST_CASE("boundedness: duplicate atoms break it, k = 1 needs only nonzero atoms") {
  Matrix phi = random_matrix(4, 6, 42);
  CHECK(check_boundedness(phi, ModelParams{1, 3}));
  phi.col(4) = phi.col(1);
  CHECK_FALSE(check_boundedness(phi, ModelParams{2, 3}));
  CHECK(check_boundedness(phi, ModelParams{1, 3}));  // single atoms still nonzero
}

TEST_CASE("boundedness agrees with direct sparse-null-vector enumeration") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Matrix phi = random_matrix(5, 10, seed);
    if (seed % 2 == 0) phi.col(7) = 2.0 * phi.col(3);  // plant a 2-sparse null vector
    const bool bounded = check_boundedness(phi, ModelParams{3, 5});
    const bool null3 = sparse_null_vector_exists(phi, 3);
    CAPTURE(seed);
    CHECK(bounded == !null3);
  }
}

TEST_CASE("uniqueness certificate on the stock examples") {
  CHECK(check_uniqueness_sufficient(Matrix::Identity(8, 8), ModelParams{2, 4}));

  Matrix ii(2, 4);
  ii << 1, 0, 1, 0, 0, 1, 0, 1;
  CHECK_FALSE(check_uniqueness_sufficient(ii, ModelParams{1, 2}));

  const Matrix g = random_matrix(8, 16, 99);
  const bool unique = check_uniqueness_sufficient(g, ModelParams{2, 6});
  CHECK(unique == !sparse_null_vector_exists(g, 4));
  CHECK(unique);  // generic gaussian: every 4 of 16 columns independent
}

TEST_CASE("uniqueness hypotheses are enforced by name") {
  const Matrix g = random_matrix(6, 12, 7);
  try {
    (void)check_uniqueness_sufficient(g, ModelParams{4, 6});  // k > m/2
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("k <= m/2") != std::string::npos);
  }
  try {
    (void)check_uniqueness_sufficient(g, ModelParams{2, 7});  // p > n/2
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("p <= n/2") != std::string::npos);
  }
}
