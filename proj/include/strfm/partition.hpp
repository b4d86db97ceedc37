#pragma once

#include <span>

#include "strfm/types.hpp"

namespace strfm {

// Unity-partition families over the normalized cell coordinate z in [-1, 1].
//   A: indicator of [-1, 1).  Discontinuous; derivatives are reported as
//      zero and the jumps are handled by explicit interface rows.
//   B: C^1 blend, identically 1 on [-3/4, 3/4], sine blends on
//      [-5/4, -3/4) and (3/4, 5/4], zero outside.
//   None: constant 1 (no partition weighting on that axis); lets block
//      assembly evaluate raw features at cell faces where the indicator
//      would vanish.
enum class PouKind { A, B, None };

struct Jet1D {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  double order(int n) const {
    switch (n) {
      case 0: return v;
      case 1: return d1;
      case 2: return d2;
      default: throw std::invalid_argument("Jet1D: derivative order above 2");
    }
  }
};

// Value and first two derivatives with respect to z.  The blend intervals
// are half-open ([-5/4,-3/4) and (3/4,5/4]) so the function is single-valued
// at the junctions; psi_b is C^1 there and its second derivative jumps.
Jet1D pou_eval(PouKind kind, double z);

// Tensor-product jet over (z_space, z_time), derivatives with respect to the
// normalized coordinates.  Each requested index factorizes across axes since
// every factor depends on its own coordinate only.
void pou_spacetime(PouKind kind, const Vec& z_space, double z_time,
                   std::span<const DerivIndex> needed, std::span<double> out);

}  // namespace strfm
