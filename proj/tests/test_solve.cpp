#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstring>

#include "strfm/solve.hpp"
#include "support.hpp"

using namespace strfm;
using namespace testsup;

namespace {

Eigen::MatrixXd random_matrix(TestRng& rng, int m, int n) {
  Eigen::MatrixXd a(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) a(i, j) = rng.uniform(-1.0, 1.0);
  return a;
}

Eigen::VectorXd random_vector(TestRng& rng, int m) {
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) b[i] = rng.uniform(-1.0, 1.0);
  return b;
}

}  // namespace

TEST_CASE("identity system") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd b(3);
  b << 1, 2, 3;
  auto rep = lstsq(a, b);
  CHECK((rep.coefficients - b).norm() <= 1e-14);
  CHECK(rep.residual_2norm <= 1e-14);
  CHECK(rep.numerical_rank == 3);
  CHECK(rep.sigma_max == doctest::Approx(1.0));
  CHECK(rep.sigma_min_kept == doctest::Approx(1.0));
}

TEST_CASE("mean of two observations") {
  Eigen::MatrixXd a(2, 1);
  a << 1, 1;
  Eigen::VectorXd b(2);
  b << 0, 2;
  auto rep = lstsq(a, b);
  CHECK(rep.coefficients[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.residual_2norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("full-rank tall system matches the normal equations") {
  TestRng rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a = random_matrix(rng, 40, 10);
    Eigen::VectorXd b = random_vector(rng, 40);
    auto rep = lstsq(a, b);

    // independent route: explicit inversion of A^T A
    const Eigen::MatrixXd ata = a.transpose() * a;
    const Eigen::VectorXd u_ref = ata.inverse() * (a.transpose() * b);
    CHECK((rep.coefficients - u_ref).norm() <= 1e-8 * u_ref.norm());
    CHECK(rep.numerical_rank == 10);

    // optimality: gradient of the quadratic vanishes
    const double g = (a.transpose() * (a * rep.coefficients - b)).norm();
    CHECK(g <= 1e-8 * (a.transpose() * b).norm());
  }
}

TEST_CASE("truncation rank tracks the spectrum") {
  // sigma = {3, 0.5, 1e-7}; padded to 5 rows
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 3);
  a(0, 0) = 3.0;
  a(1, 1) = 0.5;
  a(2, 2) = 1e-7;
  Eigen::VectorXd b(5);
  b << 1, 1, 1, 0, 0;

  auto tight = lstsq(a, b, 1e-9);
  CHECK(tight.numerical_rank == 3);
  CHECK(tight.sigma_max == doctest::Approx(3.0));
  CHECK(tight.sigma_min_kept == doctest::Approx(1e-7));

  auto mid = lstsq(a, b, 1e-6);
  CHECK(mid.numerical_rank == 2);
  CHECK(mid.sigma_min_kept == doctest::Approx(0.5));

  auto loose = lstsq(a, b, 0.5);
  CHECK(loose.numerical_rank == 1);

  // loosening the truncation never increases rank, never decreases residual
  CHECK(tight.numerical_rank >= mid.numerical_rank);
  CHECK(mid.numerical_rank >= loose.numerical_rank);
  CHECK(mid.residual_2norm >= tight.residual_2norm - 1e-15);
  CHECK(loose.residual_2norm >= mid.residual_2norm - 1e-15);
}

TEST_CASE("minimum-norm selection") {
  // underdetermined: x + y = 2 has min-norm solution (1, 1)
  Eigen::MatrixXd a(1, 2);
  a << 1, 1;
  Eigen::VectorXd b(1);
  b << 2;
  auto rep = lstsq(a, b);
  CHECK(rep.coefficients[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.coefficients[1] == doctest::Approx(1.0).epsilon(1e-14));

  // zero data: u = 0 is among the minimizers and has the least norm
  TestRng rng(5);
  Eigen::MatrixXd a2 = random_matrix(rng, 20, 6);
  auto rep2 = lstsq(a2, Eigen::VectorXd::Zero(20));
  CHECK(rep2.coefficients.norm() <= 1e-10);
}

TEST_CASE("rank invariant and zero matrix") {
  TestRng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const int m = 3 + (int)(rng.next_unit() * 20);
    const int n = 2 + (int)(rng.next_unit() * 10);
    auto rep = lstsq(random_matrix(rng, m, n), random_vector(rng, m));
    CHECK(rep.numerical_rank <= std::min(m, n));
    CHECK(rep.residual_2norm >= 0.0);
  }

  Eigen::VectorXd b(4);
  b << 1, 2, 3, 4;
  auto rep = lstsq(Eigen::MatrixXd::Zero(4, 2), b);
  CHECK(rep.numerical_rank == 0);
  CHECK(rep.coefficients.norm() <= 1e-14);
  CHECK(rep.residual_2norm == doctest::Approx(b.norm()));
}

TEST_CASE("bitwise determinism") {
  TestRng rng(42);
  Eigen::MatrixXd a = random_matrix(rng, 50, 12);
  Eigen::VectorXd b = random_vector(rng, 50);
  auto r1 = lstsq(a, b);
  auto r2 = lstsq(a, b);
  REQUIRE(r1.coefficients.size() == r2.coefficients.size());
  CHECK(std::memcmp(r1.coefficients.data(), r2.coefficients.data(),
                    sizeof(double) * r1.coefficients.size()) == 0);
  CHECK(r1.residual_2norm == r2.residual_2norm);
}

TEST_CASE("input validation") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << 1, 2;
  CHECK_THROWS_AS(lstsq(a, Eigen::VectorXd::Zero(3)), SolveError);
  CHECK_THROWS_AS(lstsq(a, b, 0.0), SolveError);
  CHECK_THROWS_AS(lstsq(a, b, 1.5), SolveError);
  CHECK_THROWS_AS(lstsq(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)), SolveError);

  Eigen::MatrixXd bad = a;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(lstsq(bad, b), SolveError);
  Eigen::VectorXd badb = b;
  badb[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(lstsq(a, badb), SolveError);
}

TEST_CASE("streaming reduction agrees with the dense solve") {
  TestRng rng(303);
  Eigen::MatrixXd a = random_matrix(rng, 200, 12);
  Eigen::VectorXd b = random_vector(rng, 200);
  auto dense = lstsq(a, b, 1e-12);

  QrRowReducer red(12);
  int at = 0;
  for (int chunk : {64, 64, 64, 8}) {
    red.fold(a.middleRows(at, chunk), b.segment(at, chunk));
    at += chunk;
  }
  REQUIRE(red.rows_seen() == 200);
  auto rep = red.solve(1e-12);

  CHECK((rep.coefficients - dense.coefficients).norm() <=
        1e-10 * dense.coefficients.norm());
  CHECK(close_rel(rep.residual_2norm, dense.residual_2norm, 1e-10));
  CHECK(close_rel(rep.sigma_max, dense.sigma_max, 1e-10));
  CHECK(close_rel(rep.sigma_min_kept, dense.sigma_min_kept, 1e-10));
  CHECK(rep.numerical_rank == dense.numerical_rank);
}

TEST_CASE("streaming reduction preserves min-norm on rank-deficient input") {
  TestRng rng(404);
  Eigen::MatrixXd a = random_matrix(rng, 80, 6);
  a.col(5) = a.col(0) + a.col(2);  // exact rank deficiency
  Eigen::VectorXd b = random_vector(rng, 80);
  auto dense = lstsq(a, b, 1e-10);

  QrRowReducer red(6);
  red.fold(a.topRows(37), b.head(37));
  red.fold(a.bottomRows(43), b.tail(43));
  auto rep = red.solve(1e-10);

  CHECK(rep.numerical_rank == 5);
  CHECK((rep.coefficients - dense.coefficients).norm() <=
        1e-9 * dense.coefficients.norm());
  CHECK(close_rel(rep.residual_2norm, dense.residual_2norm, 1e-9));
}

TEST_CASE("streaming reduction rejects bad input") {
  QrRowReducer red(3);
  CHECK_THROWS_AS(QrRowReducer(0), SolveError);
  CHECK_THROWS_AS(red.fold(Eigen::MatrixXd::Zero(2, 4), Eigen::VectorXd::Zero(2)),
                  SolveError);
  CHECK_THROWS_AS(red.fold(Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(1)),
                  SolveError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 3);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(red.fold(bad, Eigen::VectorXd::Zero(2)), SolveError);

  // folding nothing is a no-op
  red.fold(Eigen::MatrixXd(0, 3), Eigen::VectorXd(0));
  CHECK(red.rows_seen() == 0);
}

// ------------------------------------------------------------------ drivers

namespace {

SolverConfig tiny_cfg() {
  SolverConfig cfg;
  cfg.n_x = {1};
  cfg.n_t = 2;
  cfg.q_x = 6;
  cfg.q_t = 6;
  cfg.j_n = 12;
  cfg.seed = 7;
  return cfg;
}

ProblemSpec zeroed(ProblemSpec p) {
  p.forcing = zero_data();
  for (auto& bc : p.boundary) bc.data = zero_data();
  for (auto& ic : p.initial) ic.data = zero_data();
  p.exact = {};
  return p;
}

double field_linf_diff(const ProblemSpec& p, const Solution& a,
                       const Solution& b, int nx, int nt) {
  std::vector<std::pair<Vec, double>> pts;
  const double lo = p.domain.box_lo()[0], hi = p.domain.box_hi()[0];
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= nt; ++j)
      pts.push_back({vec1(lo + (hi - lo) * i / nx), p.t_end * j / nt});
  const std::vector<DerivIndex> needed = {DerivIndex::value()};
  auto va = evaluate(p, a, pts, needed);
  auto vb = evaluate(p, b, pts, needed);
  return (va[0] - vb[0]).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("global driver: zero data yields the zero field") {
  ProblemSpec p = zeroed(make_heat());
  auto rep = solve_strfm(p, tiny_cfg());
  CHECK(rep.residual_2norm <= 1e-12);
  CHECK(rep.coefficients.norm() <= 1e-10);
}

TEST_CASE("global driver: identical config reproduces coefficients bitwise") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  auto r1 = solve_strfm(p, cfg);
  auto r2 = solve_strfm(p, cfg);
  REQUIRE(r1.coefficients.size() == r2.coefficients.size());
  CHECK(std::memcmp(r1.coefficients.data(), r2.coefficients.data(),
                    sizeof(double) * (std::size_t)r1.coefficients.size()) == 0);
  CHECK(r1.residual_2norm == r2.residual_2norm);
  CHECK(r1.numerical_rank == r2.numerical_rank);
}

TEST_CASE("global driver: dense and streamed paths give the same answer") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  auto dense = solve_strfm(p, cfg);
  SolverConfig streamed = cfg;
  streamed.max_dense_bytes = 0;  // force the row-reducer path
  auto str = solve_strfm(p, streamed);
  CHECK(close_rel(str.residual_2norm, dense.residual_2norm, 1e-9));
  CHECK(str.numerical_rank == dense.numerical_rank);
  CHECK((str.coefficients - dense.coefficients).norm() <=
        1e-8 * std::max(1.0, dense.coefficients.norm()));
}

TEST_CASE("global driver: kept rank is monotone in the truncation tolerance") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  int last = 0;
  for (double tol : {1e-4, 1e-8, 1e-12, 1e-14}) {
    cfg.trunc_tol = tol;
    auto rep = solve_strfm(p, cfg);
    CHECK(rep.numerical_rank >= last);
    last = rep.numerical_rank;
  }
}

TEST_CASE("global driver: normal-equations optimality on the kept subspace") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  Decomposition d = decompose(p.domain, cfg.n_x, cfg.n_t, p.t_end);
  FeatureBank bank =
      draw_bank(cfg.kind, d, cfg.j_n, cfg.seed, cfg.r_m, cfg.share_across_time);
  CollocationSet colloc = sample_collocation(p.domain, d, cfg.q_x, cfg.q_t);
  LSSystem sys = assemble_strfm(p, d, bank, colloc, cfg.assembly_options());
  auto rep = lstsq(sys.a, sys.b, 1e-12);
  const Eigen::VectorXd grad = sys.a.transpose() * (sys.a * rep.coefficients - sys.b);
  CHECK(grad.norm() <= 1e-8 * (sys.a.transpose() * sys.b).norm());
}

TEST_CASE("evaluate: zero coefficients give zero everywhere") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  Decomposition d = decompose(p.domain, cfg.n_x, cfg.n_t, p.t_end);
  FeatureBank bank =
      draw_bank(cfg.kind, d, cfg.j_n, cfg.seed, cfg.r_m, cfg.share_across_time);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(strfm_cols(d, bank, p));
  std::vector<std::pair<Vec, double>> pts = {{vec1(0.0), 0.0},
                                             {vec1(5.5), 3.25},
                                             {vec1(12.0), 10.0}};
  const std::vector<DerivIndex> needed = {DerivIndex::value(), DerivIndex::d_t()};
  auto out = evaluate(p, d, bank, cfg.pou_space, cfg.pou_time, c, pts, needed);
  CHECK(out[0].cwiseAbs().maxCoeff() == 0.0);
  CHECK(out[1].cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("evaluate: a single unit coefficient reproduces its basis function") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  Decomposition d = decompose(p.domain, cfg.n_x, cfg.n_t, p.t_end);
  FeatureBank bank =
      draw_bank(cfg.kind, d, cfg.j_n, cfg.seed, cfg.r_m, cfg.share_across_time);
  const int cx = 0, it = 1, j = 5;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(strfm_cols(d, bank, p));
  c[((long long)cx * cfg.n_t + it) * cfg.j_n + j] = 1.0;

  const std::vector<DerivIndex> needed = {DerivIndex::value(), DerivIndex::d_x(0)};
  std::vector<std::pair<Vec, double>> pts = {{vec1(3.7), 6.1}, {vec1(9.2), 7.9}};
  auto out = evaluate(p, d, bank, cfg.pou_space, cfg.pou_time, c, pts, needed);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto want = basis_jet(bank, d, cfg.pou_space, cfg.pou_time, cx, it, j,
                          pts[i].first, pts[i].second, needed);
    CHECK(out[0]((long long)i, 0) == doctest::Approx(want[0]).epsilon(1e-14));
    CHECK(out[1]((long long)i, 0) == doctest::Approx(want[1]).epsilon(1e-14));
  }
}

TEST_CASE("evaluate: system rows reconstruct through the evaluator") {
  // A row of the assembled system applied to arbitrary coefficients must equal
  // the corresponding operator applied to the evaluated field at that row's
  // collocation point.
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  cfg.n_x = {2};
  Decomposition d = decompose(p.domain, cfg.n_x, cfg.n_t, p.t_end);
  FeatureBank bank =
      draw_bank(cfg.kind, d, cfg.j_n, cfg.seed, cfg.r_m, cfg.share_across_time);
  CollocationSet colloc = sample_collocation(p.domain, d, cfg.q_x, cfg.q_t);
  LSSystem sys = assemble_strfm(p, d, bank, colloc, cfg.assembly_options());

  TestRng rng(606);
  Eigen::VectorXd c(sys.a.cols());
  for (long long i = 0; i < c.size(); ++i) c[i] = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd ac = sys.a * c;

  // initial rows come first, one per (cell, grid point): identity at t = 0
  const std::vector<DerivIndex> val = {DerivIndex::value()};
  long long row = 0;
  for (int cx = 0; cx < 2; ++cx)
    for (const Vec& x : colloc.cell_grid[cx]) {
      REQUIRE(sys.row_tag[(std::size_t)row] == RowTag::Initial);
      std::vector<std::pair<Vec, double>> pt = {{x, 0.0}};
      auto out = evaluate(p, d, bank, cfg.pou_space, cfg.pou_time, c, pt, val);
      CHECK(close_rel(ac[row], out[0](0, 0), 1e-12));
      ++row;
    }

  // then interior rows of the first collocation time, owner slab 0
  std::vector<DerivIndex> lhs_needed = p.lhs.needed();
  for (int cx = 0; cx < 2; ++cx)
    for (const Vec& x : colloc.cell_grid[cx]) {
      REQUIRE(sys.row_tag[(std::size_t)row] == RowTag::Interior);
      std::vector<std::pair<Vec, double>> pt = {{x, d.time_lo(0)}};
      auto out = evaluate(p, d, bank, cfg.pou_space, cfg.pou_time, c, pt,
                          lhs_needed);
      double want = 0.0;
      for (const auto& term : p.lhs.terms) {
        int pos = 0;
        while (!(lhs_needed[(std::size_t)pos] == term.index)) ++pos;
        want += term.eval_coeff(x, d.time_lo(0)) * out[(std::size_t)pos](0, 0);
      }
      CHECK(close_rel(ac[row], want, 1e-12));
      ++row;
    }
}

TEST_CASE("evaluate: rejects points outside the closed space-time domain") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  Decomposition d = decompose(p.domain, cfg.n_x, cfg.n_t, p.t_end);
  FeatureBank bank =
      draw_bank(cfg.kind, d, cfg.j_n, cfg.seed, cfg.r_m, cfg.share_across_time);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(strfm_cols(d, bank, p));
  const std::vector<DerivIndex> needed = {DerivIndex::value()};
  std::vector<std::pair<Vec, double>> bad_x = {{vec1(12.5), 1.0}};
  CHECK_THROWS_AS(
      evaluate(p, d, bank, cfg.pou_space, cfg.pou_time, c, bad_x, needed),
      std::invalid_argument);
  std::vector<std::pair<Vec, double>> bad_t = {{vec1(1.0), 10.5}};
  CHECK_THROWS_AS(
      evaluate(p, d, bank, cfg.pou_space, cfg.pou_time, c, bad_t, needed),
      std::invalid_argument);
}

TEST_CASE("reorder: block-major coefficients land on the global layout") {
  const int n_cells = 2, n_t = 3, j_n = 2, d_u = 1;
  Decomposition d = decompose(SpatialDomain::box(vec1(0.0), vec1(2.0)), {n_cells},
                              n_t, 3.0);
  Eigen::VectorXd bm(n_cells * n_t * j_n * d_u);
  // value encodes (block, cell, j) so the mapping is visible in the result
  long long at = 0;
  for (int it = 0; it < n_t; ++it)
    for (int cx = 0; cx < n_cells; ++cx)
      for (int j = 0; j < j_n; ++j) bm[at++] = 100.0 * it + 10.0 * cx + j;
  Eigen::VectorXd g = reorder_block_coefficients(bm, d, j_n, d_u);
  REQUIRE(g.size() == bm.size());
  for (int cx = 0; cx < n_cells; ++cx)
    for (int it = 0; it < n_t; ++it)
      for (int j = 0; j < j_n; ++j)
        CHECK(g[((long long)cx * n_t + it) * j_n + j] ==
              100.0 * it + 10.0 * cx + j);
  CHECK_THROWS_AS(reorder_block_coefficients(bm.head(5), d, j_n, d_u),
                  std::invalid_argument);
}

TEST_CASE("marching: one block equals the global solve with one slab") {
  ProblemSpec p = make_heat();
  SolverConfig cfg = tiny_cfg();
  cfg.n_t = 1;
  auto global = solve_strfm(p, cfg);
  auto march = solve_block_marching(p, cfg, 1);
  REQUIRE(march.blocks.size() == 1);
  REQUIRE(march.coefficients.size() == global.coefficients.size());
  CHECK((march.coefficients - global.coefficients).norm() <=
        1e-10 * std::max(1.0, global.coefficients.norm()));
}

TEST_CASE("marching: consistent instances reproduce the global solution") {
  // Draw coefficients in the nullspace of the time-continuity rows, freeze the
  // field they represent as problem data, and check that marching and the
  // global indicator-in-time solve both recover it.
  ProblemSpec base = make_heat();
  SolverConfig cfg;
  cfg.n_x = {1};
  cfg.n_t = 3;
  cfg.q_x = 4;
  cfg.q_t = 4;
  cfg.j_n = 6;
  cfg.pou_time = PouKind::A;
  cfg.seed = 11;

  Decomposition d = decompose(base.domain, cfg.n_x, cfg.n_t, base.t_end);
  FeatureBank bank =
      draw_bank(cfg.kind, d, cfg.j_n, cfg.seed, cfg.r_m, cfg.share_across_time);
  CollocationSet colloc = sample_collocation(base.domain, d, cfg.q_x, cfg.q_t);
  LSSystem sys = assemble_strfm(base, d, bank, colloc, cfg.assembly_options());

  // continuity-row submatrix, extended by slab agreement at the boundary
  // abscissae (both slabs sample boundary nodes at the shared face times, so
  // a consistent field must also match there)
  std::vector<long long> cont;
  for (long long i = 0; i < sys.a.rows(); ++i)
    if (sys.row_tag[(std::size_t)i] == RowTag::InterfaceTime) cont.push_back(i);
  REQUIRE(!cont.empty());
  const long long n_extra = 2LL * (cfg.n_t - 1);
  Eigen::MatrixXd cmat((long long)cont.size() + n_extra, sys.a.cols());
  for (std::size_t i = 0; i < cont.size(); ++i) cmat.row((long long)i) = sys.a.row(cont[i]);
  {
    const std::vector<DerivIndex> val = {DerivIndex::value()};
    long long r = (long long)cont.size();
    for (int it = 0; it + 1 < cfg.n_t; ++it)
      for (double xb : {d.lo[0], d.hi[0]}) {
        cmat.row(r).setZero();
        for (int j = 0; j < cfg.j_n; ++j) {
          auto up = basis_jet(bank, d, PouKind::B, PouKind::None, 0, it + 1, j,
                              vec1(xb), d.time_hi(it), val);
          auto lo_ = basis_jet(bank, d, PouKind::B, PouKind::None, 0, it, j,
                               vec1(xb), d.time_hi(it), val);
          cmat(r, (long long)(it + 1) * cfg.j_n + j) += up[0];
          cmat(r, (long long)it * cfg.j_n + j) -= lo_[0];
        }
        ++r;
      }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cmat, Eigen::ComputeFullV);
  const long long null_dim = sys.a.cols() - svd.rank();
  REQUIRE(null_dim > 0);

  TestRng rng(707);
  for (int trial = 0; trial < 3; ++trial) {
    Eigen::VectorXd y(null_dim);
    for (long long i = 0; i < null_dim; ++i) y[i] = rng.uniform(-1.0, 1.0);
    const Eigen::VectorXd target =
        svd.matrixV().rightCols(null_dim) * y;

    ProblemSpec p = base;
    auto fld = [=, &base](const Vec& x, double t,
                          std::span<const DerivIndex> needed) {
      std::vector<std::pair<Vec, double>> pt = {{x, t}};
      return evaluate(base, d, bank, PouKind::B, PouKind::A, target, pt, needed);
    };
    p.initial[0].data = [=](const Vec& x, double, int) {
      const std::vector<DerivIndex> v = {DerivIndex::value()};
      return fld(x, 0.0, v)[0](0, 0);
    };
    for (auto& bc : p.boundary)
      bc.data = [=](const Vec& x, double t, int) {
        const std::vector<DerivIndex> v = {DerivIndex::value()};
        return fld(x, t, v)[0](0, 0);
      };
    p.forcing = [=, &base](const Vec& x, double t, int) {
      auto needed = base.lhs.needed();
      auto out = fld(x, t, needed);
      double s = 0.0;
      for (const auto& term : base.lhs.terms) {
        int pos = 0;
        while (!(needed[(std::size_t)pos] == term.index)) ++pos;
        s += term.eval_coeff(x, t) * out[(std::size_t)pos](0, 0);
      }
      return s;
    };
    p.exact = {};

    auto global = solve_strfm(p, cfg);
    CHECK(global.residual_2norm <= 1e-8);
    auto march = solve_block_marching(p, cfg, cfg.n_t);
    Eigen::VectorXd marched =
        reorder_block_coefficients(march.coefficients, d, cfg.j_n, p.d_u);
    CHECK((marched - global.coefficients).norm() <=
          1e-8 * std::max(1.0, global.coefficients.norm()));

    Solution sg = make_solution(p, cfg, global);
    Solution sb = make_solution(p, cfg, cfg.n_t, march);
    CHECK(field_linf_diff(p, sg, sb, 13, 11) <= 1e-8);
  }
}

TEST_CASE("marching: rejects a non-positive block count") {
  ProblemSpec p = make_heat();
  CHECK_THROWS_AS(solve_block_marching(p, tiny_cfg(), 0), std::invalid_argument);
}
