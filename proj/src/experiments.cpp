#include "dictsel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "dictsel/matrix_io.hpp"

namespace dictsel {

std::string mode_name(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::KP: return "kp";
    case ConstraintMode::KOnly: return "k_only";
    case ConstraintMode::POnly: return "p_only";
  }
  return "?";
}

ConstraintMode mode_from_name(const std::string& name) {
  if (name == "kp") return ConstraintMode::KP;
  if (name == "k_only") return ConstraintMode::KOnly;
  if (name == "p_only") return ConstraintMode::POnly;
  throw ShapeError("unknown mode '" + name + "' (want kp, k_only or p_only)");
}

SolverConfig make_config(const ModelParams& mp, ConstraintMode mode,
                         const SolverKnobs& knobs, std::uint64_t tie_seed) {
  SolverConfig cfg;
  cfg.params = mp;
  cfg.mode = mode;
  cfg.rho = knobs.rho;
  cfg.beta = knobs.beta;
  cfg.epsilon = knobs.epsilon;
  cfg.max_iters = knobs.max_iters;
  cfg.randomize_ties = knobs.randomize_ties;
  cfg.tie_seed = tie_seed;
  return cfg;
}

bool trace_is_monotone(const std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1]) return false;
  return true;
}

TrialOutcome run_trial(const GenParams& gp, ConstraintMode mode,
                       const SolverKnobs& knobs, std::uint64_t seed) {
  const GenResult prob = gen_problem(gp, seed);
  const DenseOp op{prob.phi};
  const SolverConfig cfg =
      make_config(ModelParams{gp.k, gp.p}, mode, knobs, splitmix64(seed));
  const SolverReport rep = select_dictionary(op, prob.Y, cfg);

  TrialOutcome out;
  out.success = recovery_success(rep.selected, prob.planted_rows);
  out.iterations = rep.iterations_run;
  out.stop = rep.stop_reason;
  out.final_objective = rep.objective_trace.back();
  out.max_backtracks = rep.max_backtracks;
  out.monotone = trace_is_monotone(rep.objective_trace);
  out.iterate_bounded =
      rep.max_iterate_norm <= 1e3 * op.adjoint(prob.Y).norm();
  return out;
}

GridBuild make_grid(int m, int n, const std::vector<double>& deltas,
                    const std::vector<double>& rhos) {
  GridBuild g;
  for (double d : deltas)
    for (double r : rhos) {
      PhaseCellSpec c;
      c.delta = d;
      c.rho = r;
      c.p = static_cast<int>(std::lround(d * n));
      c.k = static_cast<int>(std::lround(r * m));
      char buf[96];
      if (c.k < 1 || c.p < c.k || c.p > n || c.k >= m) {
        std::snprintf(buf, sizeof buf, "delta=%g rho=%g (p=%d k=%d)", d, r, c.p,
                      c.k);
        g.skipped.emplace_back(buf);
        continue;
      }
      g.cells.push_back(c);
    }
  return g;
}

namespace {

// run fn(i) for i in [0, count) on `threads` workers
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  unsigned nt = threads > 0 ? static_cast<unsigned>(threads)
                            : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, count));
  if (nt <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (unsigned w = 0; w < nt; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

}  // namespace

PhaseResult run_phase(const PhaseSpec& spec) {
  require_shape(spec.trials >= 1, "phase: need trials >= 1");
  require_shape(!spec.cells.empty(), "phase: no valid grid cells");
  require_shape(!spec.modes.empty(), "phase: no modes");

  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t ncells = spec.cells.size();
  const std::size_t nmodes = spec.modes.size();
  const auto ntrials = static_cast<std::size_t>(spec.trials);

  // one task per (cell, trial): generate once, solve under every mode
  std::vector<TrialOutcome> outcomes(ncells * ntrials * nmodes);
  parallel_for(ncells * ntrials, spec.threads, [&](std::size_t task) {
    const std::size_t ci = task / ntrials;
    const std::size_t ti = task % ntrials;
    const PhaseCellSpec& cell = spec.cells[ci];
    GenParams gp;
    gp.m = spec.m;
    gp.n = spec.n;
    gp.p = cell.p;
    gp.k = cell.k;
    gp.L = spec.L;
    const std::uint64_t seed = trial_seed(spec.seed, ci, ti);
    const GenResult prob = gen_problem(gp, seed);
    const DenseOp op{prob.phi};
    const double adj_norm = op.adjoint(prob.Y).norm();
    for (std::size_t mi = 0; mi < nmodes; ++mi) {
      const SolverConfig cfg = make_config(ModelParams{gp.k, gp.p},
                                           spec.modes[mi], spec.knobs,
                                           splitmix64(seed));
      const SolverReport rep = select_dictionary(op, prob.Y, cfg);
      TrialOutcome& o = outcomes[(ci * ntrials + ti) * nmodes + mi];
      o.success = recovery_success(rep.selected, prob.planted_rows);
      o.iterations = rep.iterations_run;
      o.stop = rep.stop_reason;
      o.final_objective = rep.objective_trace.back();
      o.max_backtracks = rep.max_backtracks;
      o.monotone = trace_is_monotone(rep.objective_trace);
      o.iterate_bounded = rep.max_iterate_norm <= 1e3 * adj_norm;
    }
  });

  PhaseResult res;
  for (std::size_t mi = 0; mi < nmodes; ++mi)
    for (std::size_t ci = 0; ci < ncells; ++ci) {
      PhaseCellResult row;
      row.mode = spec.modes[mi];
      row.cell = spec.cells[ci];
      row.trials = spec.trials;
      for (std::size_t ti = 0; ti < ntrials; ++ti) {
        const TrialOutcome& o = outcomes[(ci * ntrials + ti) * nmodes + mi];
        row.successes += o.success ? 1 : 0;
        res.all_monotone = res.all_monotone && o.monotone;
        res.all_bounded = res.all_bounded && o.iterate_bounded;
        res.max_backtracks = std::max(res.max_backtracks, o.max_backtracks);
      }
      res.rows.push_back(row);
    }

  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return res;
}

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_rate(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_phase_csv(const std::filesystem::path& path, const PhaseResult& r) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "mode,delta,rho,p,k,trials,successes,rate\n";
  for (const auto& row : r.rows)
    out << mode_name(row.mode) << ',' << fmt_g(row.cell.delta) << ','
        << fmt_g(row.cell.rho) << ',' << row.cell.p << ',' << row.cell.k << ','
        << row.trials << ',' << row.successes << ',' << fmt_rate(row.rate())
        << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SubspaceRow> subspace_sweep_n(int n_start, int n_end, int n_step,
                                          double delta, double beta, int t) {
  require_shape(n_step >= 1, "subspaces: need a positive n step");
  require_shape(n_start >= 1 && n_end >= n_start, "subspaces: bad n range");
  require_shape(delta > 0.0 && delta <= 1.0, "subspaces: need delta in (0,1]");
  require_shape(beta > 0.0 && beta <= 1.0, "subspaces: need beta in (0,1]");
  require_shape(t >= 1, "subspaces: need t >= 1");
  std::vector<SubspaceRow> rows;
  for (int n = n_start; n <= n_end; n += n_step) {
    SubspaceRow r;
    r.n = n;
    r.p = static_cast<int>(std::lround(delta * n));
    r.k = static_cast<int>(std::lround(beta * r.p));
    r.L = t * n;
    if (r.k < 1 || r.p < r.k || r.p > n) continue;  // ratios not realizable yet
    r.c = count_subspaces(r.k, r.p, r.n, r.L);
    rows.push_back(r);
  }
  return rows;
}

void write_subspace_csv(const std::filesystem::path& path,
                        const std::vector<SubspaceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "k,p,n,L,R_exact,f,lower,upper\n";
  for (const auto& r : rows) {
    out << r.k << ',' << r.p << ',' << r.n << ',' << r.L << ','
        << fmt_full(r.c.R) << ',';
    if (r.c.f_defined)
      out << fmt_full(r.c.f) << ',' << fmt_full(r.c.lower) << ','
          << fmt_full(r.c.upper);
    else
      out << "nan,nan,nan";
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void write_selected(const std::filesystem::path& path,
                    const std::vector<Index>& atoms) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  for (Index a : atoms) out << a << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "iter,objective\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << i << ',' << fmt_full(trace[i]) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace dictsel
