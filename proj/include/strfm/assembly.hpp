#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <vector>

#include "strfm/features.hpp"
#include "strfm/geometry.hpp"
#include "strfm/partition.hpp"
#include "strfm/problems.hpp"
#include "strfm/types.hpp"

namespace strfm {

enum class RowTag {
  Interior,
  Boundary,
  Periodic,
  Initial,
  InterfaceTime,
  InterfaceSpace,
};

// per-row rescaling by tag; defaults of one reproduce the plain loss
struct Weights {
  double interior = 1.0;
  double boundary = 1.0;
  double initial = 1.0;
  double interface_rows = 1.0;

  double of(RowTag tag) const;
};

struct AssemblyOptions {
  PouKind pou_space = PouKind::B;
  PouKind pou_time = PouKind::B;
  Weights weights;
  // streaming chunk budget; rows per chunk adapt to the column count
  std::size_t chunk_bytes = 32u << 20;
};

// Unknowns are ordered lexicographically (i_x, i_t, j, k):
//   col = ((i_x * N_t + i_t) * J_n + j) * d_u + k.
struct LSSystem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<RowTag> row_tag;
  Eigen::VectorXd row_scale;

  long long rows() const { return a.rows(); }
  long long cols() const { return a.cols(); }
};

// One time block of Algorithm-style marching.  The full block matrix is
//   a = [phi0; phi0_dt; l_rows; tail_rows]
// and the right-hand side is [initial-or-previous-terminal; f; tail_b].
// phi0/phi1 hold feature values on the interior grids at the block's start
// and end times; the _dt variants are present only for problems second order
// in time (otherwise 0 x cols).
struct BlockSystem {
  int block = 0;
  Eigen::MatrixXd a;
  Eigen::MatrixXd phi0, phi0_dt;
  Eigen::MatrixXd phi1, phi1_dt;
  Eigen::MatrixXd l_rows;
  Eigen::VectorXd f;
  Eigen::MatrixXd tail_rows;  // boundary, periodic, spatial interface
  Eigen::VectorXd tail_b;
  Eigen::VectorXd h;  // initial data for the first block

  long long cols() const { return a.cols(); }
  long long n_ic_rows() const { return phi0.rows() + phi0_dt.rows(); }
};

// chunk-wise row consumer; tags align with chunk rows
using RowSink = std::function<void(
    const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs,
    const std::vector<RowTag>& tags)>;

long long strfm_cols(const Decomposition& decomp, const FeatureBank& bank,
                     const ProblemSpec& problem);

// exact row count of the global system under the given options
long long count_strfm_rows(const ProblemSpec& problem,
                           const Decomposition& decomp,
                           const CollocationSet& colloc,
                           const AssemblyOptions& opts);

// Streams every row of the global space-time system in a fixed deterministic
// order: per time cell [initial-or-continuity; PDE; boundary], then spatial
// interface rows.  Row scales are already applied.
void stream_strfm_rows(const ProblemSpec& problem, const Decomposition& decomp,
                       const FeatureBank& bank, const CollocationSet& colloc,
                       const AssemblyOptions& opts, const RowSink& sink);

// dense materialization of the streamed rows
LSSystem assemble_strfm(const ProblemSpec& problem, const Decomposition& decomp,
                        const FeatureBank& bank, const CollocationSet& colloc,
                        const AssemblyOptions& opts);

// per-block systems for time marching; decomp.n_time is the block count
std::vector<BlockSystem> assemble_blocks(const ProblemSpec& problem,
                                         const Decomposition& decomp,
                                         const FeatureBank& bank,
                                         const CollocationSet& colloc,
                                         const AssemblyOptions& opts);

// Error-propagation matrix of one marching step:
//   B = (A_i^T A_i)^{-1} (IC rows of block i)^T (terminal rows of block i-1).
// Throws SolveError when the normal matrix is numerically singular; the
// message carries the reciprocal condition estimate.
Eigen::MatrixXd compute_B(const BlockSystem& cur, const BlockSystem& prev);

// plain-text dump (one row per line, %.17g entries) for cross-checking
void dump_matrix(const Eigen::MatrixXd& m, std::ostream& out);
void dump_vector(const Eigen::VectorXd& v, std::ostream& out);

}  // namespace strfm
