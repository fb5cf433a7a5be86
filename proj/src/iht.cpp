#include "dictsel/iht.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dictsel/sparsity.hpp"

namespace dictsel {

void IhtConfig::validate(Index m, Index d) const {
  require_shape(k >= 1, "sparse_code: need k >= 1");
  require_shape(k <= d, "sparse_code: k exceeds dictionary size");
  require_shape(m >= 1 && d >= 1, "sparse_code: empty dictionary");
  require_shape(max_iters >= 1, "sparse_code: need max_iters >= 1");
  require_shape(stall_tol > 0.0, "sparse_code: need stall_tol > 0");
  require_shape(rho > 0.0 && rho < 1.0, "sparse_code: need rho in (0,1)");
  require_shape(beta > 0.0 && beta < 1.0, "sparse_code: need beta in (0,1)");
}

namespace {

Vector hard_threshold(const Vector& v, Index k) {
  return project_k(v, k);
}

}  // namespace

IhtResult sparse_code(const Matrix& D, const Vector& y, const IhtConfig& cfg) {
  cfg.validate(D.rows(), D.cols());
  require_shape(y.size() == D.rows(), "sparse_code: y length != dictionary rows");
  if (!D.allFinite() || !y.allFinite())
    throw NumericError("sparse_code: non-finite input");

  IhtResult res;
  Vector x = hard_threshold(D.transpose() * y, cfg.k);
  Vector Dx = D * x;
  double r2 = (y - Dx).squaredNorm();
  res.residual_trace.push_back(r2);

  constexpr int kHardShrinkCap = 200;
  int it = 0;
  while (it < cfg.max_iters) {
    // half-gradient of ||y - D x||^2, so the exact on-support step is
    // ||g_S||^2 / ||D g_S||^2 with no extra factor
    const Vector g = D.transpose() * (y - Dx);
    Vector gs = Vector::Zero(g.size());
    for (Index i = 0; i < x.size(); ++i)
      if (x[i] != 0.0) gs[i] = g[i];

    double mu;
    const double num = gs.squaredNorm();
    if (num == 0.0) {
      if (g.squaredNorm() == 0.0) break;  // fully converged
      mu = 1.0;                            // let thresholding explore off-support
    } else {
      const double den = (D * gs).squaredNorm();
      mu = (den == 0.0) ? 1.0 : num / den;
    }

    Vector z = hard_threshold(x + mu * g, cfg.k);
    Vector Dz = D * z;
    double dist2 = (x - z).squaredNorm();
    double rz2 = (y - Dz).squaredNorm();
    double ddist2 = (Dx - Dz).squaredNorm();

    int shrinks = 0;
    bool give_up = false;
    while ((ddist2 > 0.0 && mu > 0.5 * cfg.rho * dist2 / ddist2) || rz2 > r2) {
      if (++shrinks > kHardShrinkCap) {
        give_up = true;
        break;
      }
      mu *= cfg.beta;
      z = hard_threshold(x + mu * g, cfg.k);
      Dz = D * z;
      dist2 = (x - z).squaredNorm();
      rz2 = (y - Dz).squaredNorm();
      ddist2 = (Dx - Dz).squaredNorm();
    }
    res.max_backtracks = std::max(res.max_backtracks, shrinks);
    if (give_up) break;

    const double prev = r2;
    x.swap(z);
    Dx.swap(Dz);
    r2 = rz2;
    res.residual_trace.push_back(r2);
    ++it;

    const double scale = std::max(prev, 1e-30);
    if ((prev - r2) / scale < cfg.stall_tol) break;
  }

  res.iterations_run = it;
  res.x = std::move(x);
  return res;
}

double snr_db(const Vector& y, const Vector& approx) {
  const double ny = y.norm();
  require_shape(y.size() == approx.size(), "snr_db: length mismatch");
  if (ny == 0.0) throw ShapeError("snr_db: zero reference signal");
  const double nr = (y - approx).norm();
  if (nr == 0.0) return 300.0;
  return std::min(300.0, 20.0 * std::log10(ny / nr));
}

EvalReport evaluate_dictionary(const Matrix& D, const Matrix& Y,
                               const IhtConfig& cfg) {
  require_shape(Y.rows() == D.rows(), "evaluate: Y rows != dictionary rows");
  EvalReport rep;
  rep.residual_norms.resize(static_cast<std::size_t>(Y.cols()));
  rep.snrs_db.resize(static_cast<std::size_t>(Y.cols()));
  double acc = 0.0;
  int counted = 0;
  for (Index j = 0; j < Y.cols(); ++j) {
    const Vector y = Y.col(j);
    if (y.norm() == 0.0) {
      ++rep.zero_signals;
      rep.residual_norms[static_cast<std::size_t>(j)] = 0.0;
      rep.snrs_db[static_cast<std::size_t>(j)] =
          std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const IhtResult r = sparse_code(D, y, cfg);
    const double rn = std::sqrt(r.residual_trace.back());
    rep.residual_norms[static_cast<std::size_t>(j)] = rn;
    const double s = snr_db(y, D * r.x);
    rep.snrs_db[static_cast<std::size_t>(j)] = s;
    acc += s;
    ++counted;
  }
  rep.mean_snr_db = counted ? acc / counted : 0.0;
  return rep;
}

}  // namespace dictsel
