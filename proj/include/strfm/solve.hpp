#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "strfm/assembly.hpp"
#include "strfm/features.hpp"
#include "strfm/problems.hpp"
#include "strfm/types.hpp"

namespace strfm {

struct SolveReport {
  Eigen::VectorXd coefficients;
  double residual_2norm = 0.0;
  int numerical_rank = 0;
  double sigma_max = 0.0;
  double sigma_min_kept = 0.0;
  double truncation_tol = 0.0;
  double wall_time = 0.0;  // seconds
};

// number of threads the BLAS backend may use (default 1, for bitwise
// reproducible solves); honored where the backend exposes the knob
void set_blas_threads(int n);

// Minimum-norm least-squares solution of min ||A u - b||_2.  Singular values
// below trunc_tol * sigma_max are discarded.  Throws SolveError on non-finite
// input or backend failure.
SolveReport lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  double trunc_tol = 1e-12);

// Streaming row reduction for tall systems that do not fit in memory.
// Maintains the upper-triangular factor of [A | b] over all rows folded so
// far; orthogonal transformations preserve singular values and residual
// norms, so solving the reduced system is exactly equivalent to lstsq on the
// full stack of rows.
class QrRowReducer {
 public:
  explicit QrRowReducer(int n_cols);

  // append a block of rows (chunk of A) and matching right-hand sides
  void fold(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs);

  SolveReport solve(double trunc_tol = 1e-12) const;

  int cols() const { return n_; }
  long long rows_seen() const { return seen_; }
  // reduced augmented factor, (n+1) x (n+1); for tests
  const Eigen::MatrixXd& factor() const { return r_; }

 private:
  int n_ = 0;
  long long seen_ = 0;
  Eigen::MatrixXd r_;
};

// ------------------------------------------------------------------ drivers

// Discretization knobs shared by the global and the marching drivers.
struct SolverConfig {
  std::vector<int> n_x{1};  // spatial cells per axis
  int n_t = 1;              // time cells (blocks for the marching driver)
  int q_x = 20, q_t = 20;   // collocation counts per cell
  int j_n = 100;            // features per cell
  FeatureKind kind = FeatureKind::STC;
  PouKind pou_space = PouKind::B;
  PouKind pou_time = PouKind::B;
  std::uint64_t seed = 0;
  double r_m = 1.0;
  bool share_across_time = false;
  Weights weights;
  double trunc_tol = 1e-12;
  // dense solve is used while rows*cols*8 stays below this; above it the
  // system is streamed through the row reducer instead
  std::size_t max_dense_bytes = 600'000'000;
  std::size_t chunk_bytes = 32u << 20;

  AssemblyOptions assembly_options() const {
    return {pou_space, pou_time, weights, chunk_bytes};
  }
};

struct MarchReport {
  std::vector<SolveReport> blocks;
  // block-major concatenation of the per-block coefficient vectors
  Eigen::VectorXd coefficients;
  // per block: terminal value rows, then terminal d_t rows if second order
  std::vector<Eigen::VectorXd> terminal;
  double wall_time = 0.0;
};

// A solved field: everything needed to evaluate it at arbitrary points.
struct Solution {
  Decomposition decomp;
  FeatureBank bank;
  PouKind pou_space = PouKind::B;
  PouKind pou_time = PouKind::B;
  int d_u = 1;
  Eigen::VectorXd coefficients;  // global column layout
};

// Global space-time solve: decompose, draw features, sample collocation,
// assemble, least squares.
SolveReport solve_strfm(const ProblemSpec& problem, const SolverConfig& config);

// Sequential block marching: each block's terminal values become the next
// block's initial data.  A block residual above 1e3 * ||rhs|| aborts.
MarchReport solve_block_marching(const ProblemSpec& problem,
                                 const SolverConfig& config, int n_b);

// Map block-major marching coefficients onto the global column layout, so
// marched fields evaluate through the same path as global ones.
Eigen::VectorXd reorder_block_coefficients(const Eigen::VectorXd& block_major,
                                           const Decomposition& decomp,
                                           int j_n, int d_u);

// u_M (or a derivative of it) at arbitrary points; out[i] has one row per
// point and one column per solution component for needed[i].  Points must
// lie in the closure of the domain and of [0, t_end].
std::vector<Eigen::MatrixXd> evaluate(
    const ProblemSpec& problem, const Decomposition& decomp,
    const FeatureBank& bank, PouKind pou_space, PouKind pou_time,
    const Eigen::VectorXd& coefficients,
    const std::vector<std::pair<Vec, double>>& points,
    std::span<const DerivIndex> needed);

std::vector<Eigen::MatrixXd> evaluate(
    const ProblemSpec& problem, const Solution& sol,
    const std::vector<std::pair<Vec, double>>& points,
    std::span<const DerivIndex> needed);

// Convenience builders for the two drivers.
Solution make_solution(const ProblemSpec& problem, const SolverConfig& config,
                       const SolveReport& report);
Solution make_solution(const ProblemSpec& problem, const SolverConfig& config,
                       int n_b, const MarchReport& report);

}  // namespace strfm
