#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "strfm/partition.hpp"
#include "support.hpp"

using namespace strfm;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("indicator family: half-open support [-1, 1)") {
  CHECK(pou_eval(PouKind::A, -1.0).v == 1.0);
  CHECK(pou_eval(PouKind::A, 0.0).v == 1.0);
  CHECK(pou_eval(PouKind::A, 0.999999).v == 1.0);
  CHECK(pou_eval(PouKind::A, 1.0).v == 0.0);
  CHECK(pou_eval(PouKind::A, -1.0000001).v == 0.0);
  CHECK(pou_eval(PouKind::A, 3.0).v == 0.0);
  // jumps are carried by interface rows; the jet reports zero slopes
  CHECK(pou_eval(PouKind::A, 0.5).d1 == 0.0);
  CHECK(pou_eval(PouKind::A, 0.5).d2 == 0.0);
}

TEST_CASE("blend family: plateau, support edges, junction values") {
  CHECK(pou_eval(PouKind::B, 0.0).v == 1.0);
  CHECK(pou_eval(PouKind::B, -0.75).v == 1.0);
  CHECK(pou_eval(PouKind::B, 0.75).v == 1.0);
  CHECK(pou_eval(PouKind::B, -1.25).v == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pou_eval(PouKind::B, 1.25).v == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(pou_eval(PouKind::B, -1.2500001).v == 0.0);
  CHECK(pou_eval(PouKind::B, 1.2500001).v == 0.0);
}

// Frozen values computed independently at 30-digit precision:
//   psi_b(0.8)   = (1 - sin(1.6 pi))/2 = 0.97552825814757679
//   psi_b'(0.8)  = -pi cos(1.6 pi)     = -0.97080551936273329
//   psi_b''(0.8) =  2 pi^2 sin(1.6 pi) = -18.773103157822722
//   psi_b(-0.9)  = 0.79389262614623656, psi_b'(-0.9) = 2.5416018461576299,
//   psi_b''(-0.9) = -11.602415825842424
TEST_CASE("blend family: frozen point values") {
  const Jet1D f = pou_eval(PouKind::B, 0.8);
  CHECK(f.v == doctest::Approx(0.97552825814757679).epsilon(1e-15));
  CHECK(f.d1 == doctest::Approx(-0.97080551936273329).epsilon(1e-14));
  CHECK(f.d2 == doctest::Approx(-18.773103157822722).epsilon(1e-14));
  const Jet1D r = pou_eval(PouKind::B, -0.9);
  CHECK(r.v == doctest::Approx(0.79389262614623656).epsilon(1e-15));
  CHECK(r.d1 == doctest::Approx(2.5416018461576299).epsilon(1e-14));
  CHECK(r.d2 == doctest::Approx(-11.602415825842424).epsilon(1e-14));
}

TEST_CASE("blend family: partition identity on the overlap band") {
  testsup::TestRng rng(7);
  for (int i = 0; i < 2000; ++i) {
    const double z = rng.uniform(0.75, 1.25);
    const double sum = pou_eval(PouKind::B, z).v + pou_eval(PouKind::B, z - 2.0).v;
    CHECK(std::abs(sum - 1.0) <= 1e-15);
    // slopes cancel as well: the blends are complementary
    const double dsum =
        pou_eval(PouKind::B, z).d1 + pou_eval(PouKind::B, z - 2.0).d1;
    CHECK(std::abs(dsum) <= 1e-13);
  }
  // whole-line tiling with shifts of 2
  for (int i = 0; i < 2000; ++i) {
    const double z = rng.uniform(-2.0, 2.0);
    double sum = 0.0;
    for (int s = -2; s <= 2; ++s) sum += pou_eval(PouKind::B, z - 2.0 * s).v;
    CHECK(std::abs(sum - 1.0) <= 1e-14);
  }
}

TEST_CASE("blend family: C1 at junctions, second derivative jumps") {
  const double eps = 1e-9;
  for (double zj : {-1.25, -0.75, 0.75, 1.25}) {
    const Jet1D l = pou_eval(PouKind::B, zj - eps);
    const Jet1D r = pou_eval(PouKind::B, zj + eps);
    CHECK(std::abs(l.v - r.v) <= 1e-7);
    CHECK(std::abs(l.d1 - r.d1) <= 1e-7);
  }
  // not C2: the second derivative jumps by 2 pi^2 at the plateau junctions
  const double jump = pou_eval(PouKind::B, 0.75 + eps).d2 -
                      pou_eval(PouKind::B, 0.75 - eps).d2;
  CHECK(std::abs(jump) > 10.0);
}

TEST_CASE("blend family: derivatives match central differences") {
  testsup::TestRng rng(11);
  auto f = [](double z) { return pou_eval(PouKind::B, z).v; };
  int checked = 0;
  while (checked < 200) {
    const double z = rng.uniform(-1.3, 1.3);
    // stay clear of the junctions; one-sided jets there are tested above
    bool near = false;
    for (double zj : {-1.25, -0.75, 0.75, 1.25})
      if (std::abs(z - zj) < 1e-3) near = true;
    if (near) continue;
    ++checked;
    const Jet1D j = pou_eval(PouKind::B, z);
    CHECK(testsup::close_rel(testsup::fd1(f, z), j.d1, 1e-6, 1e-8));
    CHECK(testsup::close_rel(testsup::fd2(f, z), j.d2, 1e-5, 1e-6));
  }
}

TEST_CASE("space-time product rule factorizes across axes") {
  // d_x1 d_t at z_space=(-1, 0), z_time=-1: psi'(-1) * psi(0) * psi'(-1)
  const Vec z = vec2(-1.0, 0.0);
  const DerivIndex ix = DerivIndex::d_xt(0);
  double out = 0.0;
  pou_spacetime(PouKind::B, z, -1.0, {&ix, 1}, {&out, 1});
  CHECK(out == doctest::Approx(kPi * kPi).epsilon(1e-14));

  // indicator family: any derivative factor kills the product
  pou_spacetime(PouKind::A, z, -1.0, {&ix, 1}, {&out, 1});
  CHECK(out == 0.0);
  const DerivIndex val = DerivIndex::value();
  pou_spacetime(PouKind::A, z, -1.0, {&val, 1}, {&out, 1});
  CHECK(out == 1.0);
}

TEST_CASE("space-time jets match mixed central differences") {
  testsup::TestRng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const double zx = rng.uniform(-0.7, 0.7);
    const double zt = rng.uniform(0.76, 1.2);  // time blend region, smooth
    auto f = [](double x, double t) {
      return pou_eval(PouKind::B, x).v * pou_eval(PouKind::B, t).v;
    };
    const DerivIndex ix = DerivIndex::d_xt(0);
    double got = 0.0;
    const Vec z = vec1(zx);
    pou_spacetime(PouKind::B, z, zt, {&ix, 1}, {&got, 1});
    CHECK(testsup::close_rel(testsup::fd_mixed(f, zx, zt), got, 1e-6, 1e-7));
  }
}

TEST_CASE("derivative orders above 2 are rejected") {
  const Vec z = vec1(0.0);
  DerivIndex bad;
  bad.dt = 3;
  double out = 0.0;
  CHECK_THROWS_AS(pou_spacetime(PouKind::B, z, 0.0, {&bad, 1}, {&out, 1}),
                  std::invalid_argument);
  DerivIndex bad2;
  bad2.dx = {1, 2, 0};  // total spatial order 3
  CHECK_THROWS_AS(pou_spacetime(PouKind::B, vec2(0.0, 0.0), 0.0, {&bad2, 1}, {&out, 1}),
                  std::invalid_argument);
}
