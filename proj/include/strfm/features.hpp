#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "strfm/geometry.hpp"
#include "strfm/partition.hpp"
#include "strfm/types.hpp"

namespace strfm {

// Random feature families over normalized cell coordinates.
//   STC: tanh(k_x . z_x + k_t z_t + b), one coupled space-time ridge.
//   SoV: tanh(k_x . z_x + b_x) * tanh(k_t z_t + b_t), separated factors.
// Weights and biases are drawn once from U(-R_m, R_m) and then frozen.
enum class FeatureKind { STC, SoV };

// Per-cell parameter block.  W has one row per feature; for SoV bx/bt hold
// the separated biases and b is unused (and vice versa for STC).
struct CellParams {
  Eigen::MatrixXd W;     // j_n x dim spatial weights
  Eigen::VectorXd wt;    // j_n time weights
  Eigen::VectorXd b;     // STC bias
  Eigen::VectorXd bx;    // SoV spatial bias
  Eigen::VectorXd bt;    // SoV time bias
};

struct FeatureBank {
  FeatureKind kind = FeatureKind::STC;
  int dim = 1;
  int j_n = 0;
  int n_cell_x = 1;
  int n_time = 1;
  double r_m = 1.0;
  std::uint64_t seed = 0;
  bool share_across_time = false;
  std::vector<CellParams> cells;  // indexed cell_x * n_time + cell_t

  const CellParams& params(int cell_x, int cell_t) const {
    return cells.at(static_cast<size_t>(cell_x) * n_time + cell_t);
  }
};

// Parameters are sub-seeded per (cell_x, cell_t, feature), so banks are
// reproducible under any evaluation order and independent of the counts of
// other cells.  With share_across_time, every time cell reuses the
// cell_t = 0 stream.
FeatureBank draw_bank(FeatureKind kind, const Decomposition& decomp, int j_n,
                      std::uint64_t seed, double r_m, bool share_across_time);

// Jets of all features of one cell at a physical point; out(j, i) is the
// needed[i] mixed partial of feature j, with the affine normalization
// scale factors (2 / cell width per axis) applied.
void feature_jets(const FeatureBank& bank, const Decomposition& decomp,
                  int cell_x, int cell_t, const Vec& x, double t,
                  std::span<const DerivIndex> needed, Eigen::MatrixXd& out);

// Single-feature convenience wrapper.
std::vector<double> feature_jet(const FeatureBank& bank, const Decomposition& decomp,
                                int cell_x, int cell_t, int j, const Vec& x, double t,
                                std::span<const DerivIndex> needed);

// Jets of the unity-partition-weighted basis psi(x) psi(t) phi_j(x, t) by the
// generalized product rule.  pou_time = PouKind::A makes the time factor an
// indicator, which is the block time-marching convention.
void basis_jets(const FeatureBank& bank, const Decomposition& decomp,
                PouKind pou_space, PouKind pou_time, int cell_x, int cell_t,
                const Vec& x, double t, std::span<const DerivIndex> needed,
                Eigen::MatrixXd& out);

std::vector<double> basis_jet(const FeatureBank& bank, const Decomposition& decomp,
                              PouKind pou_space, PouKind pou_time, int cell_x,
                              int cell_t, int j, const Vec& x, double t,
                              std::span<const DerivIndex> needed);

// Cells whose (extended, for the blending partition) support covers (x, t).
// Indicator partitions own each point exclusively via locate(); the blend
// reaches 1.25 half-widths into the neighbors.
std::vector<std::pair<int, int>> covering_cells(const Decomposition& decomp,
                                                PouKind pou_space,
                                                PouKind pou_time, const Vec& x,
                                                double t);

// Structured text dump of every drawn parameter (17 significant digits, so
// values round-trip exactly) and the matching loader.
void dump_bank(const FeatureBank& bank, std::ostream& out);
FeatureBank load_bank(std::istream& in);

}  // namespace strfm
