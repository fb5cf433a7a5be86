#include "dictsel/analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace dictsel {

double binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::domain_error("binary_entropy: argument " + std::to_string(t) +
                            " outside [0,1]");
  if (t == 0.0 || t == 1.0) return 0.0;
  return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
}

double log2_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::domain_error("log2_binomial: k > n");
  if (k == 0 || k == n) return 0.0;
  static const double inv_ln2 = 1.0 / std::log(2.0);
  return (std::lgamma(static_cast<double>(n) + 1.0) -
          std::lgamma(static_cast<double>(k) + 1.0) -
          std::lgamma(static_cast<double>(n - k) + 1.0)) *
         inv_ln2;
}

SubspaceCount count_subspaces(int k, int p, int n, int L) {
  require_shape(1 <= k && k <= p && p <= n, "count_subspaces: need 1 <= k <= p <= n");
  require_shape(L >= 1, "count_subspaces: need L >= 1");

  const auto uk = static_cast<std::uint64_t>(k);
  const auto up = static_cast<std::uint64_t>(p);
  const auto un = static_cast<std::uint64_t>(n);

  SubspaceCount out;
  out.R = static_cast<double>(L) * (log2_binomial(up, uk) - log2_binomial(un, uk)) +
          log2_binomial(un, up);

  if (k < p && p < n) {
    const double dk = k, dp = p, dn = n, dL = L;
    out.f = dn * binary_entropy(dp / dn) + dL * dp * binary_entropy(dk / dp) -
            dn * dL * binary_entropy(dk / dn);
    out.lower = -dL * std::log2(dp + 1.0) - std::log2(dn + 1.0) + out.f;
    out.upper = dL * std::log2(dn + 1.0) + out.f;
    out.f_defined = true;
  } else {
    out.f = out.lower = out.upper = std::numeric_limits<double>::quiet_NaN();
    out.f_defined = false;
  }
  return out;
}

namespace {

// C(n, s) with saturation at cap+1 (only used to decide refusal)
std::uint64_t binom_capped(int n, int s, std::uint64_t cap) {
  unsigned __int128 c = 1;
  for (int i = 1; i <= s; ++i) {
    c = c * static_cast<unsigned>(n - s + i) / static_cast<unsigned>(i);
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

bool full_column_rank(const Matrix& sub) {
  Eigen::JacobiSVD<Matrix> svd(sub);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  return smax > 0.0 && smin > 1e-10 * smax;
}

}  // namespace

bool spark_exceeds(const Matrix& phi, int s, std::uint64_t max_subsets) {
  const int n = static_cast<int>(phi.cols());
  require_shape(s >= 1, "spark_exceeds: need s >= 1");
  require_shape(s <= n, "spark_exceeds: s exceeds the number of atoms");
  if (s > phi.rows()) return false;  // more columns than rows: always dependent

  const std::uint64_t total = binom_capped(n, s, max_subsets);
  if (total > max_subsets)
    throw CapError("spark check needs more than " + std::to_string(max_subsets) +
                   " subset ranks (n=" + std::to_string(n) +
                   ", s=" + std::to_string(s) + "); raise the cap to force it");

  std::vector<int> comb(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) comb[static_cast<std::size_t>(i)] = i;
  Matrix sub(phi.rows(), s);
  while (true) {
    for (int i = 0; i < s; ++i) sub.col(i) = phi.col(comb[static_cast<std::size_t>(i)]);
    if (!full_column_rank(sub)) return false;
    // next lexicographic combination
    int i = s - 1;
    while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - s + i) --i;
    if (i < 0) break;
    ++comb[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < s; ++j)
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

bool check_boundedness(const Matrix& phi, const ModelParams& mp,
                       std::uint64_t max_subsets) {
  mp.validate(phi.rows(), phi.cols());
  return spark_exceeds(phi, mp.k, max_subsets);
}

bool check_uniqueness_sufficient(const Matrix& phi, const ModelParams& mp,
                                 std::uint64_t max_subsets) {
  mp.validate(phi.rows(), phi.cols());
  require_shape(2 * mp.k <= phi.rows(),
                "uniqueness check: hypothesis k <= m/2 fails (k=" +
                    std::to_string(mp.k) + ", m=" + std::to_string(phi.rows()) + ")");
  require_shape(2 * mp.p <= phi.cols(),
                "uniqueness check: hypothesis p <= n/2 fails (p=" +
                    std::to_string(mp.p) + ", n=" + std::to_string(phi.cols()) + ")");
  return spark_exceeds(phi, 2 * mp.k, max_subsets);
}

}  // namespace dictsel
