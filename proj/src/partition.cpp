#include "strfm/partition.hpp"

#include <cmath>

namespace strfm {

namespace {

constexpr double kPi = 3.14159265358979323846;

Jet1D pou_a(double z) {
  if (z >= -1.0 && z < 1.0) return {1.0, 0.0, 0.0};
  return {0.0, 0.0, 0.0};
}

// The blend is C^1 but its second derivative jumps at the four junction
// abscissae.  Those points matter: uniform collocation grids hit them exactly,
// and the d2 convention there must be 0 so that the ramp-side jump of one
// cell's window cancels against the plateau of its neighbour (support open at
// +-5/4, plateau closed at +-3/4).  Otherwise second-derivative rows assembled
// at a junction pick up a spurious psi''(junction) * u term.
Jet1D pou_b(double z) {
  if (z <= -1.25 || z >= 1.25) return {0.0, 0.0, 0.0};
  if (z < -0.75) {
    const double s = std::sin(2.0 * kPi * z);
    const double c = std::cos(2.0 * kPi * z);
    return {0.5 * (1.0 + s), kPi * c, -2.0 * kPi * kPi * s};
  }
  if (z <= 0.75) return {1.0, 0.0, 0.0};
  const double s = std::sin(2.0 * kPi * z);
  const double c = std::cos(2.0 * kPi * z);
  return {0.5 * (1.0 - s), -kPi * c, 2.0 * kPi * kPi * s};
}

}  // namespace

Jet1D pou_eval(PouKind kind, double z) {
  if (kind == PouKind::None) return {1.0, 0.0, 0.0};
  return kind == PouKind::A ? pou_a(z) : pou_b(z);
}

void pou_spacetime(PouKind kind, const Vec& z_space, double z_time,
                   std::span<const DerivIndex> needed, std::span<double> out) {
  const int d = static_cast<int>(z_space.size());
  if (out.size() != needed.size())
    throw std::invalid_argument("pou_spacetime: output span size mismatch");

  std::array<Jet1D, 3> jx;
  for (int k = 0; k < d; ++k) jx[k] = pou_eval(kind, z_space[k]);
  const Jet1D jt = pou_eval(kind, z_time);

  for (size_t i = 0; i < needed.size(); ++i) {
    validate_deriv_index(needed[i], d);
    double p = jt.order(needed[i].dt);
    for (int k = 0; k < d; ++k) p *= jx[k].order(needed[i].dx[k]);
    out[i] = p;
  }
}

}  // namespace strfm
