#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "strfm/analysis.hpp"
#include "strfm/assembly.hpp"
#include "strfm/problems.hpp"
#include "strfm/solve.hpp"

namespace strfm {

// What a run does with its solve(s):
//   Solve    one field, error report against the closed form or a reference
//   Sweep    one solve per axis value, convergence table
//   Compare  global space-time solve vs block marching on aligned segments
//   Eigen    block-propagation spectrum for each feature count in `values`
enum class RunMode { Solve, Sweep, Compare, Eigen };

// One experiment, as read from a config file.  The schema is versioned; the
// parser rejects files written against a different version.  Exactly one of
// {n_t > 1 with n_b = 1} (global space-time), {n_b > 1 with n_t = 1} (block
// marching), {both 1} holds per run.
struct RunConfig {
  int schema = 1;
  RunMode mode = RunMode::Solve;
  std::string problem = "heat";
  std::string geometry;  // composite geometry file; empty = built-in shape

  std::vector<int> n_x = {1};  // spatial cells per axis
  int n_t = 1;                 // time cells of the global solve
  int n_b = 1;                 // marching blocks
  int q_x = 20, q_t = 20;      // collocation points per cell per axis
  int j_n = 100;               // features per cell
  FeatureKind kind = FeatureKind::STC;
  PouKind pou = PouKind::B;
  std::uint64_t seed = 0;
  double r_m = 1.0;
  double trunc_tol = 1e-12;
  Weights weights;

  SweepAxis axis = SweepAxis::JN;  // Sweep / Eigen modes
  std::vector<int> values;

  int grid_x = 200, grid_t = 400;  // error evaluation grid
  std::string output_dir = "out";
  std::string reference;       // directory of a stored reference run
  bool save_solution = false;  // store the field for later reference use

  // Throws ConfigError (carrying the config key) on any violation.
  void validate() const;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);

// Canonical serialization; parse_run_config(dump_run_config(c)) == c.
std::string dump_run_config(const RunConfig& c);

// Lower the run description onto the solver and problem layers.
SolverConfig solver_config(const RunConfig& c);
ProblemSpec make_problem(const RunConfig& c);

const char* run_mode_name(RunMode m);
const char* sweep_axis_name(SweepAxis a);

}  // namespace strfm
