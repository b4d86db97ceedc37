#pragma once

#include <functional>
#include <string>
#include <vector>

#include "strfm/geometry.hpp"
#include "strfm/types.hpp"

namespace strfm {

// One term of a linear operator: coeff * D^index applied to solution
// component s, contributing to output equation r.
struct OperatorTerm {
  int r = 0;
  int s = 0;
  double coeff = 1.0;
  std::function<double(const Vec&, double)> coeff_fn;  // overrides coeff if set
  DerivIndex index;

  double eval_coeff(const Vec& x, double t) const {
    return coeff_fn ? coeff_fn(x, t) : coeff;
  }
};

struct OperatorSpec {
  int d_in = 1;
  int d_out = 1;
  std::vector<OperatorTerm> terms;

  // union of derivative indices the terms touch
  std::vector<DerivIndex> needed() const;
  int max_time_order() const;
  int max_space_order() const;
  void validate() const;
};

// data callback: (x, t, output component) -> value
using DataFn = std::function<double(const Vec&, double, int)>;

inline DataFn zero_data() {
  return [](const Vec&, double, int) { return 0.0; };
}

struct BoundaryCondition {
  OperatorSpec op;
  DataFn data;
  std::vector<int> faces;  // empty = every face
};

struct InitialCondition {
  OperatorSpec op;  // identity or first time derivative
  DataFn data;
};

struct ExactSolution {
  bool available = false;
  // component k of D^index u at (x, t)
  std::function<double(const Vec&, double, int, const DerivIndex&)> eval;

  double value(const Vec& x, double t, int k = 0) const {
    return eval(x, t, k, DerivIndex::value());
  }
};

struct ProblemSpec {
  std::string name;
  int d_u = 1;
  SpatialDomain domain = SpatialDomain::box(vec1(0.0), vec1(1.0));
  double t_end = 1.0;
  OperatorSpec lhs;
  DataFn forcing = zero_data();
  std::vector<BoundaryCondition> boundary;
  std::vector<int> periodic_axes;  // paired-face identification (box only)
  std::vector<InitialCondition> initial;
  ExactSolution exact;
  // components are interleaved (re, im) pairs of a complex-linear field;
  // block-propagation matrices then fold onto the complex operator
  bool complex_pairs = false;

  int time_order() const { return lhs.max_time_order(); }
  int space_order() const { return lhs.max_space_order(); }
  void validate() const;
};

// L u_exact at one point, using the hand-coded exact derivatives
double apply_to_exact(const OperatorSpec& op, const ExactSolution& exact,
                      const Vec& x, double t, int r);

// ---------------------------------------------------------------- presets

// diffusion on [0, 12], u = 2 sin(pi x / 2) e^{-t}
ProblemSpec make_heat();
// diffusion on [0, 8] with a C0-but-not-C1 initial profile, no closed form
ProblemSpec make_heat_nonsmooth();
// second order in time on [0, 6 pi], two standing modes
ProblemSpec make_wave();
// free particle, real/imaginary split on [0, 5], periodic in space
ProblemSpec make_schrodinger();
// second order in time on [0,5] x [0,4], product standing mode
ProblemSpec make_membrane();
// forced membrane (f = 1) on a composite planar domain, no closed form
ProblemSpec make_membrane_complex(SpatialDomain domain);

// Built-in complex shape: an 8 x 4 plate with a bottom-edge notch and two
// circular holes.  Used by the complex-geometry presets when no geometry
// file is supplied.
SpatialDomain membrane_standin_domain();
ProblemSpec make_membrane_complex();

}  // namespace strfm
