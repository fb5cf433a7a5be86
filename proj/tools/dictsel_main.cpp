// dictsel — pick a compact dictionary out of a mother dictionary by jointly
// sparse approximation, plus the synthetic benchmarks around it.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dictsel/experiments.hpp"
#include "dictsel/iht.hpp"
#include "dictsel/linop.hpp"
#include "dictsel/matrix_io.hpp"

namespace fs = std::filesystem;
using namespace dictsel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct Shared {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string mode = "kp";
  int trials = 20;
  int max_iters = 1000;
  double rho = 0.95;
  double beta = 0.5;
  double epsilon = 0.0;  // 0 = auto (1e-12 * ||Y||_F^2)
  int threads = 0;
  bool randomize_ties = false;
};

SolverKnobs knobs_of(const Shared& sh) {
  SolverKnobs k;
  k.rho = sh.rho;
  k.beta = sh.beta;
  if (sh.epsilon > 0.0) k.epsilon = sh.epsilon;
  k.max_iters = sh.max_iters;
  k.randomize_ties = sh.randomize_ties;
  return k;
}

fs::path ensure_out_dir(const Shared& sh) {
  fs::path dir(sh.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
  return dir;
}

// "--phi" accepts either a matrix file path or "dctdirac:q=<int>"
// (signal dimension m is taken from the data matrix)
MotherDictionary load_phi(const std::string& spec, Index m_hint) {
  const std::string tag = "dctdirac:";
  if (spec.rfind(tag, 0) == 0) {
    int q = 0;
    if (std::sscanf(spec.c_str() + tag.size(), "q=%d", &q) != 1 || q < 1)
      throw ShapeError("bad operator spec '" + spec +
                       "' (want dctdirac:q=<positive int>)");
    require_shape(m_hint >= 1, "dctdirac operator needs the signal dimension "
                               "from the data matrix");
    return MotherDictionary::dct_dirac(q, static_cast<int>(m_hint));
  }
  return MotherDictionary::dense(read_matrix(spec));
}

std::string stop_name(StopReason r) {
  switch (r) {
    case StopReason::Stalled: return "stalled";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::ZeroGradient: return "zero_gradient";
  }
  return "?";
}

std::vector<Index> read_selected(const fs::path& path, Index n) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<Index> idx;
  long long v;
  while (in >> v) {
    if (v < 0 || v >= n)
      throw ShapeError("selected atom " + std::to_string(v) +
                       " out of range [0," + std::to_string(n) + ")");
    idx.push_back(static_cast<Index>(v));
  }
  if (!in.eof()) throw IoError("bad token in " + path.string());
  if (idx.empty()) throw ShapeError("no atoms listed in " + path.string());
  return idx;
}

// ---- synth --------------------------------------------------------------

struct SynthArgs {
  int m = 20, n = 80, p = 30, k = 4, L = 320;
  double noise_std = 0.0;
};

int cmd_synth(const Shared& sh, const SynthArgs& a) {
  GenParams gp;
  gp.m = a.m;
  gp.n = a.n;
  gp.p = a.p;
  gp.k = a.k;
  gp.L = a.L;
  gp.noise_std = a.noise_std;
  const GenResult r = gen_problem(gp, sh.seed);

  const fs::path dir = ensure_out_dir(sh);
  write_matrix(dir / "phi.txt", r.phi);
  write_matrix(dir / "Y.txt", r.Y);
  write_matrix(dir / "Xtrue.txt", r.X_true);

  std::ofstream meta(dir / "meta.txt");
  if (!meta) throw IoError("cannot write meta.txt");
  meta << "m=" << gp.m << "\nn=" << gp.n << "\np=" << gp.p << "\nk=" << gp.k
       << "\nL=" << gp.L << "\nnoise_std=" << fmt_full(gp.noise_std)
       << "\nseed=" << sh.seed << "\nplanted_rows=";
  for (std::size_t i = 0; i < r.planted_rows.size(); ++i)
    meta << (i ? " " : "") << r.planted_rows[i];
  meta << '\n';
  if (!meta) throw IoError("write failed: meta.txt");

  std::cout << "wrote phi.txt Y.txt Xtrue.txt meta.txt to " << dir.string()
            << '\n';
  return kExitOk;
}

// ---- select ---------------------------------------------------------------

struct SelectArgs {
  std::string phi;
  std::string y;
  int k = 0, p = 0;
};

int cmd_select(const Shared& sh, const SelectArgs& a) {
  const Matrix Y = read_matrix(a.y);
  const MotherDictionary phi = load_phi(a.phi, Y.rows());

  SolverConfig cfg = make_config(ModelParams{a.k, a.p},
                                 mode_from_name(sh.mode), knobs_of(sh), sh.seed);
  const SolverReport rep = select_dictionary(phi, Y, cfg);

  const fs::path dir = ensure_out_dir(sh);
  write_selected(dir / "selected.txt", rep.selected);
  write_trace_csv(dir / "trace.csv", rep.objective_trace);

  std::cout << "m=" << phi.rows() << " n=" << phi.cols() << " L=" << Y.cols()
            << " mode=" << sh.mode << " k=" << a.k << " p=" << a.p << '\n'
            << "iterations=" << rep.iterations_run
            << " stop=" << stop_name(rep.stop_reason)
            << " objective=" << fmt_full(rep.objective_trace.back()) << '\n'
            << "selected_count=" << rep.selected.size() << '\n';
  return kExitOk;
}

// ---- phase ----------------------------------------------------------------

struct PhaseArgs {
  int m = 20, n = 80, L = 320;
  std::vector<double> deltas = {0.125, 0.25, 0.375, 0.5, 0.625, 0.75};
  std::vector<double> rhos = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  std::vector<std::string> modes = {"kp", "k_only", "p_only"};
};

int cmd_phase(const Shared& sh, const PhaseArgs& a) {
  PhaseSpec spec;
  spec.m = a.m;
  spec.n = a.n;
  spec.L = a.L;
  spec.trials = sh.trials;
  spec.seed = sh.seed;
  spec.threads = sh.threads;
  spec.knobs = knobs_of(sh);
  for (const auto& mname : a.modes) spec.modes.push_back(mode_from_name(mname));

  const GridBuild grid = make_grid(a.m, a.n, a.deltas, a.rhos);
  for (const auto& s : grid.skipped)
    std::cerr << "phase: skipping infeasible cell " << s << '\n';
  spec.cells = grid.cells;

  const PhaseResult res = run_phase(spec);
  const fs::path dir = ensure_out_dir(sh);
  write_phase_csv(dir / "phase.csv", res);

  std::cout << "cells=" << spec.cells.size() << " modes=" << spec.modes.size()
            << " trials_per_cell=" << spec.trials << '\n'
            << "elapsed_seconds=" << res.elapsed_seconds << '\n'
            << "wrote phase.csv to " << dir.string() << '\n';
  return kExitOk;
}

// ---- subspaces --------------------------------------------------------------

struct SubspaceArgs {
  int k = 0, p = 0, n = 0, L = 0;
  int n_start = 0, n_end = 0, n_step = 8;
  double delta = 0.25;
  double beta = 0.1;
  int t = 100;
};

int cmd_subspaces(const Shared& sh, const SubspaceArgs& a, bool sweep) {
  std::vector<SubspaceRow> rows;
  if (sweep) {
    rows = subspace_sweep_n(a.n_start, a.n_end, a.n_step, a.delta, a.beta, a.t);
    if (rows.empty())
      throw ShapeError("subspaces: the requested sweep produced no realizable "
                       "(k, p, n, L) tuples");
  } else {
    SubspaceRow r;
    r.k = a.k;
    r.p = a.p;
    r.n = a.n;
    r.L = a.L;
    r.c = count_subspaces(r.k, r.p, r.n, r.L);
    rows.push_back(r);
  }

  const fs::path dir = ensure_out_dir(sh);
  write_subspace_csv(dir / "subspaces.csv", rows);

  for (const auto& r : rows) {
    std::cout << "k=" << r.k << " p=" << r.p << " n=" << r.n << " L=" << r.L
              << " R=" << fmt_full(r.c.R);
    if (r.c.f_defined)
      std::cout << " f=" << fmt_full(r.c.f) << " lower=" << fmt_full(r.c.lower)
                << " upper=" << fmt_full(r.c.upper);
    else
      std::cout << " f=undefined (needs k < p < n)";
    std::cout << '\n';
  }
  std::cout << "wrote subspaces.csv to " << dir.string() << '\n';
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string dict;      // explicit dictionary matrix
  std::string phi;       // or: operator + selection
  std::string selected;
  std::string y;
  int k = 1;
  int max_iters = 300;
  double stall_tol = 1e-8;
};

int cmd_eval(const Shared& sh, const EvalArgs& a) {
  const Matrix Y = read_matrix(a.y);

  Matrix D;
  if (!a.dict.empty()) {
    D = read_matrix(a.dict);
  } else {
    const MotherDictionary phi = load_phi(a.phi, Y.rows());
    D = phi.columns(read_selected(a.selected, phi.cols()));
  }
  require_shape(D.rows() == Y.rows(),
                "eval: dictionary and signals disagree on the signal dimension");

  IhtConfig cfg;
  cfg.k = a.k;
  cfg.max_iters = a.max_iters;
  cfg.stall_tol = a.stall_tol;
  cfg.rho = sh.rho;
  cfg.beta = sh.beta;
  const EvalReport rep = evaluate_dictionary(D, Y, cfg);

  const fs::path dir = ensure_out_dir(sh);
  std::ofstream csv(dir / "eval.csv");
  if (!csv) throw IoError("cannot write eval.csv");
  csv << "signal_index,residual,snr_db\n";
  for (std::size_t j = 0; j < rep.residual_norms.size(); ++j) {
    csv << j << ',' << fmt_full(rep.residual_norms[j]) << ',';
    if (std::isnan(rep.snrs_db[j]))
      csv << "nan";
    else
      csv << fmt_full(rep.snrs_db[j]);
    csv << '\n';
  }
  if (!csv) throw IoError("write failed: eval.csv");

  const auto nonzero =
      static_cast<long long>(rep.residual_norms.size()) - rep.zero_signals;
  std::ofstream sum(dir / "summary.txt");
  if (!sum) throw IoError("cannot write summary.txt");
  sum << "signals=" << rep.residual_norms.size() << "\nzero_signals="
      << rep.zero_signals << "\nmean_snr_db=" << fmt_full(rep.mean_snr_db)
      << '\n';
  if (!sum) throw IoError("write failed: summary.txt");

  std::cout << "signals=" << rep.residual_norms.size()
            << " zero_signals=" << rep.zero_signals << " (excluded from mean)\n"
            << "mean_snr_db=" << fmt_full(rep.mean_snr_db) << " over " << nonzero
            << " signals\n"
            << "wrote eval.csv summary.txt to " << dir.string() << '\n';
  return kExitOk;
}

// ---- check ------------------------------------------------------------------

struct CheckArgs {
  std::string phi;
  int k = 1, p = 1;
  std::uint64_t max_subsets = 2'000'000;
};

int cmd_check(const CheckArgs& a) {
  const Matrix phi = read_matrix(a.phi);
  const ModelParams mp{a.k, a.p};

  const bool bounded = check_boundedness(phi, mp, a.max_subsets);
  std::cout << "boundedness=" << (bounded ? "yes" : "no") << '\n';

  try {
    const bool uniq = check_uniqueness_sufficient(phi, mp, a.max_subsets);
    std::cout << "uniqueness_sufficient=" << (uniq ? "yes" : "no") << '\n';
  } catch (const ShapeError& e) {
    // hypotheses k <= m/2, p <= n/2 not met: report instead of failing
    std::cout << "uniqueness_sufficient=hypothesis_failed (" << e.what()
              << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "joint-sparsity dictionary selection: pick p atoms out of a mother "
      "dictionary so every training signal is k-sparse over the selection"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "key=value file; flat keys are the shared flags, subcommand "
                 "flags go in [subcommand] sections; explicit flags win");

  Shared sh;
  app.add_option("--seed", sh.seed, "base seed for every random stream");
  app.add_option("--out-dir", sh.out_dir, "output directory (created)")
      ->capture_default_str();
  app.add_option("--mode", sh.mode, "constraint set: kp, k_only or p_only")
      ->check(CLI::IsMember({"kp", "k_only", "p_only"}))
      ->capture_default_str();
  app.add_option("--trials", sh.trials, "trials per cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-iters", sh.max_iters, "solver iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--rho", sh.rho, "line-search acceptance factor in (0,1)")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->capture_default_str();
  app.add_option("--beta", sh.beta, "line-search shrink factor in (0,1)")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->capture_default_str();
  app.add_option("--epsilon", sh.epsilon,
                 "stall threshold, squared-Frobenius units "
                 "(default: 1e-12 * ||Y||_F^2)")
      ->check(CLI::PositiveNumber);
  app.add_option("--threads", sh.threads,
                 "worker threads for sweeps (0 = hardware)");
  app.add_flag("--randomize-ties", sh.randomize_ties,
               "break projection ties randomly instead of lowest-index-first");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a planted problem");
  SynthArgs sy;
  synth->add_option("--m", sy.m, "signal dimension")->capture_default_str();
  synth->add_option("--n", sy.n, "mother dictionary size")->capture_default_str();
  synth->add_option("--p", sy.p, "planted atom count")->capture_default_str();
  synth->add_option("--k", sy.k, "per-signal sparsity")->capture_default_str();
  synth->add_option("--L", sy.L, "signal count")->capture_default_str();
  synth->add_option("--noise-std", sy.noise_std, "additive noise level")
      ->capture_default_str();

  // select
  auto* select = app.add_subcommand(
      "select", "run the solver on a data matrix and emit the chosen atoms");
  SelectArgs se;
  select->add_option("--phi", se.phi,
                     "matrix file, or dctdirac:q=<int> for the oversampled "
                     "cosine + spike operator")
      ->required();
  select->add_option("--y", se.y, "data matrix file (m x L)")->required();
  select->add_option("--k", se.k, "per-column sparsity")->required();
  select->add_option("--p", se.p, "atom budget")->required();

  // phase
  auto* phase = app.add_subcommand(
      "phase", "success-rate sweep over (delta = p/n, rho = k/m)");
  PhaseArgs ph;
  phase->add_option("--m", ph.m, "signal dimension")->capture_default_str();
  phase->add_option("--n", ph.n, "mother dictionary size")->capture_default_str();
  phase->add_option("--L", ph.L, "signal count")->capture_default_str();
  phase->add_option("--deltas", ph.deltas, "delta grid values")
      ->delimiter(',')
      ->capture_default_str();
  phase->add_option("--rhos", ph.rhos, "rho grid values")
      ->delimiter(',')
      ->capture_default_str();
  phase->add_option("--modes", ph.modes, "constraint sets to sweep")
      ->delimiter(',')
      ->capture_default_str();

  // subspaces
  auto* subs = app.add_subcommand(
      "subspaces", "count admissible supports against per-column sparsity");
  SubspaceArgs su;
  subs->add_option("--k", su.k, "per-column sparsity");
  subs->add_option("--p", su.p, "atom budget");
  subs->add_option("--n", su.n, "mother dictionary size");
  subs->add_option("--L", su.L, "signal count");
  auto* nstart = subs->add_option("--n-start", su.n_start,
                                  "sweep n from here (enables sweep form)");
  subs->add_option("--n-end", su.n_end, "sweep n up to here (inclusive)");
  subs->add_option("--n-step", su.n_step, "sweep step")->capture_default_str();
  subs->add_option("--delta", su.delta, "p = round(delta * n)")
      ->capture_default_str();
  auto* beta_opt = subs->add_option("--beta", su.beta, "k = round(beta * p)");
  subs->add_option("--rho", su.beta,
                   "alias for --beta; the same k/p ratio goes by both names")
      ->excludes(beta_opt);
  subs->add_option("--t", su.t, "L = t * n")->capture_default_str();

  // eval
  auto* eval = app.add_subcommand(
      "eval", "sparse-code signals against a chosen dictionary and score them");
  EvalArgs ev;
  auto* dict_opt =
      eval->add_option("--dict", ev.dict, "explicit dictionary matrix file");
  eval->add_option("--phi", ev.phi, "operator spec (with --selected)")
      ->excludes(dict_opt);
  eval->add_option("--selected", ev.selected,
                   "selected.txt with atom indices (with --phi)");
  eval->add_option("--y", ev.y, "signals to encode (m x L)")->required();
  eval->add_option("--k", ev.k, "code sparsity")->required();
  eval->add_option("--iht-max-iters", ev.max_iters, "coder iteration cap")
      ->capture_default_str();
  eval->add_option("--stall-tol", ev.stall_tol,
                   "relative residual-change stop")
      ->capture_default_str();

  // check
  auto* check = app.add_subcommand(
      "check", "well-posedness: bounded minimizers / uniqueness certificate");
  CheckArgs ch;
  check->add_option("--phi", ch.phi, "dictionary matrix file")->required();
  check->add_option("--k", ch.k, "per-column sparsity")->required();
  check->add_option("--p", ch.p, "atom budget")->required();
  check->add_option("--max-subsets", ch.max_subsets,
                    "refuse spark checks beyond this many subsets")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(sh, sy);
    if (select->parsed()) return cmd_select(sh, se);
    if (phase->parsed()) return cmd_phase(sh, ph);
    if (subs->parsed()) return cmd_subspaces(sh, su, nstart->count() > 0);
    if (eval->parsed()) {
      if (ev.dict.empty() && (ev.phi.empty() || ev.selected.empty()))
        throw ShapeError("eval: pass --dict, or both --phi and --selected");
      return cmd_eval(sh, ev);
    }
    if (check->parsed()) return cmd_check(ch);
    std::cerr << "no subcommand given\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
