#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dictsel/analysis.hpp"
#include "dictsel/datagen.hpp"
#include "dictsel/solver.hpp"

namespace dictsel {

// Seed for trial `trial` of grid cell `cell`: chained splitmix64 so distinct
// (cell, trial) pairs never share a stream. Modes share the seed on purpose —
// mode comparisons run on identical planted problems.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t cell,
                                std::uint64_t trial) {
  return splitmix64(splitmix64(splitmix64(base) + cell) + trial);
}

std::string mode_name(ConstraintMode m);
ConstraintMode mode_from_name(const std::string& name);  // "kp", "k_only", "p_only"

// solver settings shared by the experiment drivers
struct SolverKnobs {
  double rho = 0.95;
  double beta = 0.5;
  std::optional<double> epsilon;
  int max_iters = 1000;
  bool randomize_ties = false;
};

SolverConfig make_config(const ModelParams& mp, ConstraintMode mode,
                         const SolverKnobs& knobs, std::uint64_t tie_seed);

struct TrialOutcome {
  bool success = false;
  int iterations = 0;
  StopReason stop = StopReason::MaxIters;
  double final_objective = 0.0;
  int max_backtracks = 0;
  bool monotone = true;          // trace non-increasing
  bool iterate_bounded = true;   // max ||X||_F <= 1e3 * ||Phi^T Y||_F
};

bool trace_is_monotone(const std::vector<double>& trace);

// one planted problem, one mode
TrialOutcome run_trial(const GenParams& gp, ConstraintMode mode,
                       const SolverKnobs& knobs, std::uint64_t seed);

// ---- phase sweep -------------------------------------------------------

struct PhaseCellSpec {
  double delta = 0.0;  // p / n
  double rho = 0.0;    // k / m
  int p = 0;
  int k = 0;
};

// p = round(delta*n), k = round(rho*m); cells violating 1<=k<=p<=n or k<m are
// dropped (reported on the returned `skipped` list)
struct GridBuild {
  std::vector<PhaseCellSpec> cells;
  std::vector<std::string> skipped;
};
GridBuild make_grid(int m, int n, const std::vector<double>& deltas,
                    const std::vector<double>& rhos);

struct PhaseSpec {
  int m = 20, n = 80, L = 320;
  int trials = 20;
  std::vector<PhaseCellSpec> cells;
  std::vector<ConstraintMode> modes;
  SolverKnobs knobs;
  std::uint64_t seed = 0;
  int threads = 0;  // <= 0: hardware concurrency
};

struct PhaseCellResult {
  ConstraintMode mode;
  PhaseCellSpec cell;
  int trials = 0;
  int successes = 0;
  double rate() const { return trials ? double(successes) / trials : 0.0; }
};

struct PhaseResult {
  std::vector<PhaseCellResult> rows;  // mode-major, then cell order
  bool all_monotone = true;
  bool all_bounded = true;
  int max_backtracks = 0;
  double elapsed_seconds = 0.0;
};

// every (cell, trial) generates one problem and solves it under every mode;
// execution may be parallel, aggregation order is fixed, output deterministic
PhaseResult run_phase(const PhaseSpec& spec);

void write_phase_csv(const std::filesystem::path& path, const PhaseResult& r);

// ---- subspace sweep ----------------------------------------------------

struct SubspaceRow {
  int k, p, n, L;
  SubspaceCount c;
};

// n-sweep at fixed ratios: p = round(delta*n), k = round(beta*p), L = t*n
std::vector<SubspaceRow> subspace_sweep_n(int n_start, int n_end, int n_step,
                                          double delta, double beta, int t);

void write_subspace_csv(const std::filesystem::path& path,
                        const std::vector<SubspaceRow>& rows);

// ---- small output writers ----------------------------------------------

void write_selected(const std::filesystem::path& path,
                    const std::vector<Index>& atoms);
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<double>& trace);

}  // namespace dictsel
