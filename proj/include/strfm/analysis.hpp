#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "strfm/problems.hpp"
#include "strfm/solve.hpp"

namespace strfm {

// Error of a solved field against a reference on a uniform space-time grid.
// The L2 norm uses the composite trapezoid rule; per-segment values cover one
// time cell each and square-sum to the global value exactly.  On composite
// domains grid points outside the domain carry zero quadrature weight.
struct ErrorReport {
  double l2 = 0.0;      // absolute space-time L2 of the error
  double l2_rel = 0.0;  // l2 / (reference L2), 0 when the reference is zero
  double linf = 0.0;    // grid max over all components
  std::vector<double> component_linf;
  std::vector<double> segment_l2;      // one entry per time cell, absolute
  std::vector<double> segment_l2_rel;  // against the reference norm per segment
  std::vector<double> segment_t_mid;
  int grid_x = 0;  // intervals per spatial axis
  int grid_t = 0;  // intervals in time, split across segments
};

// component k of the reference field at (x, t)
using ReferenceFn = std::function<double(const Vec&, double, int)>;

ErrorReport error_report(const ProblemSpec& problem, const Solution& sol,
                         const ReferenceFn& reference, int grid_x = 200,
                         int grid_t = 400);

// Uses the problem's closed-form solution; throws std::invalid_argument when
// none is available.
ErrorReport error_report(const ProblemSpec& problem, const Solution& sol,
                         int grid_x = 200, int grid_t = 400);

// Spectrum of a block update matrix.  unique_count clusters eigenvalues that
// agree to 1e-9 relative; lambda_m is the spectral radius and growth_factor
// its square root, the predicted per-block error amplification.
struct EigenReport {
  std::vector<std::complex<double>> eigenvalues;
  int unique_count = 0;
  double lambda_m = 0.0;
  double growth_factor = 0.0;
};

EigenReport eigen_report(const Eigen::MatrixXcd& b);
EigenReport eigen_report(const Eigen::MatrixXd& b);

// Collapse a block update acting on interleaved (real, imaginary) component
// pairs into the underlying complex matrix of half the size.  Throws
// std::invalid_argument if the matrix does not carry that structure.
Eigen::MatrixXcd fold_complex_pairs(const Eigen::MatrixXd& b);

// Least-squares fit of log(error) against segment index.  rate is the
// per-segment multiplicative factor; r_squared the quality of the line.
struct GrowthFit {
  double rate = 1.0;
  double r_squared = 1.0;
};

GrowthFit growth_fit(const std::vector<double>& segment_errors);

// One solve per axis value with everything else held fixed.  l2 is relative
// when the reference has positive norm, absolute otherwise.  n_b > 1 runs the
// JN / Q axes through the block-marching driver with that many blocks (the
// feature-count and quadrature refinements are usually studied in marching
// mode); it must stay 1 for the NT axis and is ignored for NB.
enum class SweepAxis { NT, NB, JN, Q };

struct SweepRow {
  int value = 0;
  double l2 = 0.0;
  double linf = 0.0;
};

std::vector<SweepRow> convergence_sweep(const ProblemSpec& problem,
                                        const SolverConfig& base,
                                        SweepAxis axis,
                                        const std::vector<int>& values,
                                        int n_b = 1,
                                        const ReferenceFn* reference = nullptr,
                                        int grid_x = 200, int grid_t = 400);

}  // namespace strfm
