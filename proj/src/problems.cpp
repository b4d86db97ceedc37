#include "strfm/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strfm {

std::vector<DerivIndex> OperatorSpec::needed() const {
  std::vector<DerivIndex> out;
  for (const auto& term : terms) {
    if (std::find(out.begin(), out.end(), term.index) == out.end())
      out.push_back(term.index);
  }
  return out;
}

int OperatorSpec::max_time_order() const {
  int m = 0;
  for (const auto& term : terms) m = std::max(m, term.index.dt);
  return m;
}

int OperatorSpec::max_space_order() const {
  int m = 0;
  for (const auto& term : terms) m = std::max(m, term.index.spatial_order());
  return m;
}

void OperatorSpec::validate() const {
  if (d_in < 1 || d_out < 1)
    throw std::invalid_argument("operator component counts must be positive");
  if (terms.empty()) throw std::invalid_argument("operator has no terms");
  for (const auto& term : terms) {
    if (term.r < 0 || term.r >= d_out || term.s < 0 || term.s >= d_in)
      throw std::invalid_argument("operator term component out of range");
  }
}

void ProblemSpec::validate() const {
  lhs.validate();
  if (lhs.d_in != d_u || lhs.d_out != d_u)
    throw std::invalid_argument("interior operator must be square in d_u");
  for (const auto& term : lhs.terms) validate_deriv_index(term.index, domain.dim());
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if ((int)initial.size() != time_order())
    throw std::invalid_argument("need one initial condition per time order");
  for (const auto& ic : initial) {
    ic.op.validate();
    if (!ic.data) throw std::invalid_argument("initial condition lacks data");
  }
  for (const auto& bc : boundary) {
    bc.op.validate();
    if (!bc.data) throw std::invalid_argument("boundary condition lacks data");
  }
  if (!periodic_axes.empty() && !domain.is_box())
    throw std::invalid_argument("periodic pairing requires a box domain");
  for (int ax : periodic_axes)
    if (ax < 0 || ax >= domain.dim())
      throw std::invalid_argument("periodic axis out of range");
  if (boundary.empty() && periodic_axes.empty())
    throw std::invalid_argument("no boundary closure given");
}

double apply_to_exact(const OperatorSpec& op, const ExactSolution& exact,
                      const Vec& x, double t, int r) {
  double acc = 0.0;
  for (const auto& term : op.terms) {
    if (term.r != r) continue;
    acc += term.eval_coeff(x, t) * exact.eval(x, t, term.s, term.index);
  }
  return acc;
}

namespace {

OperatorSpec identity_op(int d_u) {
  OperatorSpec op;
  op.d_in = op.d_out = d_u;
  for (int k = 0; k < d_u; ++k)
    op.terms.push_back({k, k, 1.0, nullptr, DerivIndex::value()});
  return op;
}

OperatorSpec dt_op(int d_u) {
  OperatorSpec op;
  op.d_in = op.d_out = d_u;
  for (int k = 0; k < d_u; ++k)
    op.terms.push_back({k, k, 1.0, nullptr, DerivIndex::d_t()});
  return op;
}

// sin(w z) and its first two derivatives
void sin_jet(double w, double z, double out[3]) {
  const double s = std::sin(w * z), c = std::cos(w * z);
  out[0] = s;
  out[1] = w * c;
  out[2] = -w * w * s;
}

}  // namespace

ProblemSpec make_heat() {
  const double alpha = M_PI / 2.0;
  ProblemSpec p;
  p.name = "heat";
  p.d_u = 1;
  p.domain = SpatialDomain::box(vec1(0.0), vec1(12.0));
  p.t_end = 10.0;
  p.lhs.d_in = p.lhs.d_out = 1;
  // diffusion coefficient 1/alpha^2 so that 2 sin(alpha x) e^{-t} is a
  // solution: the decay rate of the mode equals c * alpha^2 = 1
  p.lhs.terms = {{0, 0, 1.0, nullptr, DerivIndex::d_t()},
                 {0, 0, -1.0 / (alpha * alpha), nullptr, DerivIndex::d_x(0, 2)}};
  p.forcing = zero_data();

  ExactSolution ex;
  ex.available = true;
  ex.eval = [alpha](const Vec& x, double t, int, const DerivIndex& ix) {
    double sp[3];
    sin_jet(alpha, x[0], sp);
    const double tt = std::exp(-t) * (ix.dt % 2 == 0 ? 1.0 : -1.0);
    return 2.0 * sp[ix.dx[0]] * tt;
  };
  p.exact = ex;

  BoundaryCondition bc;
  bc.op = identity_op(1);
  bc.data = [ex](const Vec& x, double t, int) { return ex.value(x, t); };
  p.boundary = {bc};

  InitialCondition ic;
  ic.op = identity_op(1);
  ic.data = [alpha](const Vec& x, double, int) {
    return 2.0 * std::sin(alpha * x[0]);
  };
  p.initial = {ic};
  p.validate();
  return p;
}

ProblemSpec make_heat_nonsmooth() {
  const double alpha = M_PI / 2.0;
  ProblemSpec p;
  p.name = "heat_nonsmooth";
  p.d_u = 1;
  p.domain = SpatialDomain::box(vec1(0.0), vec1(8.0));
  p.t_end = 10.0;
  p.lhs.d_in = p.lhs.d_out = 1;
  p.lhs.terms = {{0, 0, 1.0, nullptr, DerivIndex::d_t()},
                 {0, 0, -1.0 / (alpha * alpha), nullptr, DerivIndex::d_x(0, 2)}};
  p.forcing = zero_data();

  BoundaryCondition bc;
  bc.op = identity_op(1);
  bc.data = zero_data();
  p.boundary = {bc};

  InitialCondition ic;
  ic.op = identity_op(1);
  // continuous at x = 4 (both branches vanish) but the slope jumps
  ic.data = [](const Vec& x, double, int) {
    return x[0] < 4.0 ? 2.0 * std::sin(M_PI * x[0] / 2.0)
                      : 2.0 * std::sin(M_PI * x[0]);
  };
  p.initial = {ic};
  p.validate();
  return p;
}

ProblemSpec make_wave() {
  const double len = 6.0 * M_PI;
  const double w1 = M_PI / len, w2 = 2.0 * M_PI / len;
  ProblemSpec p;
  p.name = "wave";
  p.d_u = 1;
  p.domain = SpatialDomain::box(vec1(0.0), vec1(len));
  p.t_end = 10.0;
  p.lhs.d_in = p.lhs.d_out = 1;
  p.lhs.terms = {{0, 0, 1.0, nullptr, DerivIndex::d_tt()},
                 {0, 0, -1.0, nullptr, DerivIndex::d_x(0, 2)}};
  p.forcing = zero_data();

  ExactSolution ex;
  ex.available = true;
  // mode 1: cos(w1 t) sin(w1 x); mode 2: (cos(w2 t) + sin(w2 t)/w2) sin(w2 x)
  ex.eval = [w1, w2](const Vec& x, double t, int, const DerivIndex& ix) {
    double sp1[3], sp2[3];
    sin_jet(w1, x[0], sp1);
    sin_jet(w2, x[0], sp2);
    double t1[3], t2[3];
    const double c1 = std::cos(w1 * t), s1 = std::sin(w1 * t);
    t1[0] = c1;
    t1[1] = -w1 * s1;
    t1[2] = -w1 * w1 * c1;
    const double c2 = std::cos(w2 * t), s2 = std::sin(w2 * t);
    t2[0] = c2 + s2 / w2;
    t2[1] = -w2 * s2 + c2;
    t2[2] = -w2 * w2 * c2 - w2 * s2;
    return sp1[ix.dx[0]] * t1[ix.dt] + sp2[ix.dx[0]] * t2[ix.dt];
  };
  p.exact = ex;

  BoundaryCondition bc;
  bc.op = identity_op(1);
  bc.data = [ex](const Vec& x, double t, int) { return ex.value(x, t); };
  p.boundary = {bc};

  InitialCondition ic_val;
  ic_val.op = identity_op(1);
  ic_val.data = [w1, w2](const Vec& x, double, int) {
    return std::sin(w1 * x[0]) + std::sin(w2 * x[0]);
  };
  InitialCondition ic_vel;
  ic_vel.op = dt_op(1);
  ic_vel.data = [w2](const Vec& x, double, int) {
    return std::sin(w2 * x[0]);
  };
  p.initial = {ic_val, ic_vel};
  p.validate();
  return p;
}

ProblemSpec make_schrodinger() {
  const double omega = 2.0 * M_PI / 5.0;
  const double rate = 0.5 * omega * omega;  // d theta / dt
  ProblemSpec p;
  p.name = "schrodinger";
  p.d_u = 2;
  p.complex_pairs = true;
  p.domain = SpatialDomain::box(vec1(0.0), vec1(5.0));
  p.t_end = 10.0;
  p.lhs.d_in = p.lhs.d_out = 2;
  // real part:      -d_t u2 + (1/2) d_xx u1 = 0
  // imaginary part:  d_t u1 + (1/2) d_xx u2 = 0
  p.lhs.terms = {{0, 1, -1.0, nullptr, DerivIndex::d_t()},
                 {0, 0, 0.5, nullptr, DerivIndex::d_x(0, 2)},
                 {1, 0, 1.0, nullptr, DerivIndex::d_t()},
                 {1, 1, 0.5, nullptr, DerivIndex::d_x(0, 2)}};
  p.forcing = zero_data();

  ExactSolution ex;
  ex.available = true;
  // psi = e^{-i theta} (2 cos(w x) + sin(w x)), theta = w^2 t / 2
  ex.eval = [omega, rate](const Vec& x, double t, int k, const DerivIndex& ix) {
    const double cw = std::cos(omega * x[0]), sw = std::sin(omega * x[0]);
    double amp[3];
    amp[0] = 2.0 * cw + sw;
    amp[1] = omega * (-2.0 * sw + cw);
    amp[2] = -omega * omega * amp[0];
    const double th = rate * t;
    double tt[3];
    if (k == 0) {
      tt[0] = std::cos(th);
      tt[1] = -rate * std::sin(th);
      tt[2] = -rate * rate * std::cos(th);
    } else {
      tt[0] = -std::sin(th);
      tt[1] = -rate * std::cos(th);
      tt[2] = rate * rate * std::sin(th);
    }
    return amp[ix.dx[0]] * tt[ix.dt];
  };
  p.exact = ex;

  p.periodic_axes = {0};

  InitialCondition ic;
  ic.op = identity_op(2);
  ic.data = [omega](const Vec& x, double, int r) {
    return r == 0 ? 2.0 * std::cos(omega * x[0]) + std::sin(omega * x[0]) : 0.0;
  };
  p.initial = {ic};
  p.validate();
  return p;
}

ProblemSpec make_membrane() {
  const double mu = 2.0 * M_PI / 5.0, nu = M_PI / 2.0;
  const double lam = std::sqrt(mu * mu + nu * nu);
  ProblemSpec p;
  p.name = "membrane";
  p.d_u = 1;
  p.domain = SpatialDomain::box(vec2(0.0, 0.0), vec2(5.0, 4.0));
  p.t_end = 10.0;
  p.lhs.d_in = p.lhs.d_out = 1;
  p.lhs.terms = {{0, 0, 1.0, nullptr, DerivIndex::d_tt()},
                 {0, 0, -1.0, nullptr, DerivIndex::d_x(0, 2)},
                 {0, 0, -1.0, nullptr, DerivIndex::d_x(1, 2)}};
  p.forcing = zero_data();

  ExactSolution ex;
  ex.available = true;
  // sin(mu x) sin(nu y) (2 cos(lam t) + sin(lam t)), lam^2 = mu^2 + nu^2
  ex.eval = [mu, nu, lam](const Vec& x, double t, int, const DerivIndex& ix) {
    double sx[3], sy[3];
    sin_jet(mu, x[0], sx);
    sin_jet(nu, x[1], sy);
    const double c = std::cos(lam * t), s = std::sin(lam * t);
    double tt[3];
    tt[0] = 2.0 * c + s;
    tt[1] = -2.0 * lam * s + lam * c;
    tt[2] = -lam * lam * tt[0];
    return sx[ix.dx[0]] * sy[ix.dx[1]] * tt[ix.dt];
  };
  p.exact = ex;

  BoundaryCondition bc;
  bc.op = identity_op(1);
  bc.data = zero_data();
  p.boundary = {bc};

  InitialCondition ic_val;
  ic_val.op = identity_op(1);
  ic_val.data = [mu, nu](const Vec& x, double, int) {
    return 2.0 * std::sin(mu * x[0]) * std::sin(nu * x[1]);
  };
  InitialCondition ic_vel;
  ic_vel.op = dt_op(1);
  ic_vel.data = [mu, nu, lam](const Vec& x, double, int) {
    return lam * std::sin(mu * x[0]) * std::sin(nu * x[1]);
  };
  p.initial = {ic_val, ic_vel};
  p.validate();
  return p;
}

SpatialDomain membrane_standin_domain() {
  Loop outer;
  outer.segments = {
      Segment::line({0, 0}, {3.5, 0}),       Segment::line({3.5, 0}, {3.5, 0.8}),
      Segment::line({3.5, 0.8}, {4.5, 0.8}), Segment::line({4.5, 0.8}, {4.5, 0}),
      Segment::line({4.5, 0}, {8, 0}),       Segment::line({8, 0}, {8, 4}),
      Segment::line({8, 4}, {0, 4}),         Segment::line({0, 4}, {0, 0})};
  Loop h1, h2;
  h1.segments = {Segment::arc({2.0, 2.0}, 0.6, 0.0, 2.0 * M_PI)};
  h2.segments = {Segment::arc({6.0, 2.0}, 0.6, 0.0, 2.0 * M_PI)};
  return SpatialDomain::composite(outer, {h1, h2});
}

ProblemSpec make_membrane_complex() {
  return make_membrane_complex(membrane_standin_domain());
}

ProblemSpec make_membrane_complex(SpatialDomain domain) {
  const double mu = 2.0 * M_PI / 5.0, nu = M_PI / 2.0;
  const double lam = std::sqrt(mu * mu + nu * nu);
  ProblemSpec p;
  p.name = "membrane_complex";
  p.d_u = 1;
  p.domain = std::move(domain);
  if (p.domain.dim() != 2)
    throw std::invalid_argument("membrane_complex needs a planar domain");
  p.t_end = 10.0;
  p.lhs.d_in = p.lhs.d_out = 1;
  p.lhs.terms = {{0, 0, 1.0, nullptr, DerivIndex::d_tt()},
                 {0, 0, -1.0, nullptr, DerivIndex::d_x(0, 2)},
                 {0, 0, -1.0, nullptr, DerivIndex::d_x(1, 2)}};
  p.forcing = [](const Vec&, double, int) { return 1.0; };

  BoundaryCondition bc;
  bc.op = identity_op(1);
  bc.data = zero_data();
  p.boundary = {bc};

  InitialCondition ic_val;
  ic_val.op = identity_op(1);
  ic_val.data = [mu, nu](const Vec& x, double, int) {
    return 2.0 * std::sin(mu * x[0]) * std::sin(nu * x[1]);
  };
  InitialCondition ic_vel;
  ic_vel.op = dt_op(1);
  ic_vel.data = [mu, nu, lam](const Vec& x, double, int) {
    return lam * std::sin(mu * x[0]) * std::sin(nu * x[1]);
  };
  p.initial = {ic_val, ic_vel};
  p.validate();
  return p;
}

}  // namespace strfm
