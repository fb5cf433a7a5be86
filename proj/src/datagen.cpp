#include "dictsel/datagen.hpp"

#include <algorithm>

#include "dictsel/rng.hpp"

namespace dictsel {

void GenParams::validate() const {
  require_shape(m >= 1 && n >= 1 && L >= 1, "gen: need m, n, L >= 1");
  require_shape(1 <= k && k <= p && p <= n, "gen: need 1 <= k <= p <= n");
  require_shape(k < m, "gen: need k < m");
  require_shape(noise_std >= 0.0, "gen: need noise_std >= 0");
}

GenResult gen_problem(const GenParams& gp, std::uint64_t seed) {
  gp.validate();
  Rng rng(seed);
  GenResult out;

  // (1) dictionary
  out.phi.resize(gp.m, gp.n);
  for (int j = 0; j < gp.n; ++j)
    for (int i = 0; i < gp.m; ++i) out.phi(i, j) = rng.normal();
  for (int j = 0; j < gp.n; ++j) out.phi.col(j).normalize();

  // (2) planted rows
  out.planted_rows = rng.subset(gp.n, gp.p);

  // (3) coefficients
  out.X_true = Matrix::Zero(gp.n, gp.L);
  for (int l = 0; l < gp.L; ++l) {
    const std::vector<int> sup = rng.subset_of(out.planted_rows, gp.k);
    std::vector<double> mag(sup.size());
    for (std::size_t t = 0; t < sup.size(); ++t) mag[t] = rng.uniform(0.2, 1.0);
    for (std::size_t t = 0; t < sup.size(); ++t)
      out.X_true(sup[t], l) = mag[t] * rng.sign();
  }

  out.Y = out.phi * out.X_true;

  // (4) noise
  if (gp.noise_std > 0.0) {
    for (int l = 0; l < gp.L; ++l)
      for (int i = 0; i < gp.m; ++i) out.Y(i, l) += gp.noise_std * rng.normal();
  }
  return out;
}

bool recovery_success(const std::vector<Index>& selected,
                      const std::vector<int>& planted_rows) {
  if (selected.size() != planted_rows.size()) return false;
  for (std::size_t i = 0; i < selected.size(); ++i)
    if (selected[i] != static_cast<Index>(planted_rows[i])) return false;
  return true;
}

}  // namespace dictsel
