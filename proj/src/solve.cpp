#include "strfm/solve.hpp"

#include <lapacke.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <string>

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace strfm {

namespace {

std::once_flag g_thread_once;

void apply_blas_threads(int n) {
  if (openblas_set_num_threads) openblas_set_num_threads(n);
}

void ensure_thread_default() {
  std::call_once(g_thread_once, [] {
    int n = 1;
    if (const char* env = std::getenv("STRFM_THREADS")) {
      const int k = std::atoi(env);
      if (k >= 1) n = k;
    }
    apply_blas_threads(n);
  });
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void check_trunc_tol(double trunc_tol) {
  if (!(trunc_tol > 0.0 && trunc_tol < 1.0))
    throw SolveError("trunc_tol must lie in (0, 1)");
}

// dgelsd on a destroyable column-major copy; b_io must have max(m, n) rows
SolveReport gelsd_inplace(Eigen::MatrixXd& a_io, Eigen::VectorXd& b_io, int m,
                          int n, double trunc_tol) {
  Eigen::VectorXd sigma(std::min(m, n) > 0 ? std::min(m, n) : 1);
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dgelsd(
      LAPACK_COL_MAJOR, m, n, 1, a_io.data(), std::max(m, 1), b_io.data(),
      std::max({m, n, 1}), sigma.data(), trunc_tol, &rank);
  if (info != 0)
    throw SolveError("least-squares backend failed, info = " +
                     std::to_string(info));
  SolveReport rep;
  rep.coefficients = b_io.head(n);
  rep.numerical_rank = static_cast<int>(rank);
  rep.sigma_max = std::min(m, n) > 0 ? sigma[0] : 0.0;
  rep.sigma_min_kept = rank > 0 ? sigma[rank - 1] : 0.0;
  rep.truncation_tol = trunc_tol;
  return rep;
}

}  // namespace

void set_blas_threads(int n) {
  ensure_thread_default();
  if (n >= 1) apply_blas_threads(n);
}

SolveReport lstsq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                  double trunc_tol) {
  ensure_thread_default();
  check_trunc_tol(trunc_tol);
  const auto t0 = std::chrono::steady_clock::now();
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (m == 0 || n == 0) throw SolveError("empty least-squares system");
  if (b.size() != m) throw SolveError("rhs length does not match row count");
  if (!a.allFinite() || !b.allFinite())
    throw SolveError("non-finite entries in least-squares input");

  Eigen::MatrixXd a_copy = a;
  Eigen::VectorXd b_io(std::max(m, n));
  b_io.head(m) = b;
  if (n > m) b_io.tail(n - m).setZero();

  SolveReport rep = gelsd_inplace(a_copy, b_io, m, n, trunc_tol);
  rep.residual_2norm = (a * rep.coefficients - b).norm();
  rep.wall_time = seconds_since(t0);
  return rep;
}

QrRowReducer::QrRowReducer(int n_cols) : n_(n_cols) {
  if (n_cols < 1) throw SolveError("reducer needs at least one column");
  r_ = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
}

void QrRowReducer::fold(const Eigen::MatrixXd& rows, const Eigen::VectorXd& rhs) {
  ensure_thread_default();
  const int m = static_cast<int>(rows.rows());
  if (m == 0) return;
  if (rows.cols() != n_) throw SolveError("row block has wrong column count");
  if (rhs.size() != m) throw SolveError("rhs length does not match row count");
  if (!rows.allFinite() || !rhs.allFinite())
    throw SolveError("non-finite entries in least-squares input");

  const int na = n_ + 1;  // augmented columns
  Eigen::MatrixXd pent(m, na);
  pent.leftCols(n_) = rows;
  pent.col(n_) = rhs;

  const lapack_int nb = std::min(64, na);
  Eigen::MatrixXd tau(nb, na);
  const lapack_int info =
      LAPACKE_dtpqrt(LAPACK_COL_MAJOR, m, na, 0, nb, r_.data(), na,
                     pent.data(), std::max(m, 1), tau.data(), nb);
  if (info != 0)
    throw SolveError("row-reduction backend failed, info = " +
                     std::to_string(info));
  seen_ += m;
}

SolveReport QrRowReducer::solve(double trunc_tol) const {
  check_trunc_tol(trunc_tol);
  const auto t0 = std::chrono::steady_clock::now();
  // reduced system: R u = c with leftover norm |rho|
  Eigen::MatrixXd r = r_.topLeftCorner(n_, n_).triangularView<Eigen::Upper>();
  const Eigen::VectorXd c = r_.col(n_).head(n_);
  const double rho = r_(n_, n_);

  Eigen::MatrixXd a_copy = r;
  Eigen::VectorXd b_io = c;
  SolveReport rep = gelsd_inplace(a_copy, b_io, n_, n_, trunc_tol);
  const double in_span = (r * rep.coefficients - c).norm();
  rep.residual_2norm = std::sqrt(in_span * in_span + rho * rho);
  rep.wall_time = seconds_since(t0);
  return rep;
}

// ------------------------------------------------------------------ drivers

namespace {

struct Discretization {
  Decomposition decomp;
  FeatureBank bank;
  CollocationSet colloc;
};

Discretization discretize(const ProblemSpec& p, const SolverConfig& cfg) {
  Discretization ds;
  ds.decomp = decompose(p.domain, cfg.n_x, cfg.n_t, p.t_end);
  ds.bank = draw_bank(cfg.kind, ds.decomp, cfg.j_n, cfg.seed, cfg.r_m,
                      cfg.share_across_time);
  ds.colloc = sample_collocation(p.domain, ds.decomp, cfg.q_x, cfg.q_t);
  return ds;
}

}  // namespace

SolveReport solve_strfm(const ProblemSpec& problem, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  Discretization ds = discretize(problem, config);
  const AssemblyOptions opts = config.assembly_options();
  const long long rows = count_strfm_rows(problem, ds.decomp, ds.colloc, opts);
  const long long cols = strfm_cols(ds.decomp, ds.bank, problem);

  SolveReport rep;
  if ((unsigned long long)rows * (unsigned long long)cols * 8ull <=
      config.max_dense_bytes) {
    LSSystem sys = assemble_strfm(problem, ds.decomp, ds.bank, ds.colloc, opts);
    rep = lstsq(sys.a, sys.b, config.trunc_tol);
  } else {
    QrRowReducer reducer((int)cols);
    stream_strfm_rows(problem, ds.decomp, ds.bank, ds.colloc, opts,
                      [&](const Eigen::MatrixXd& chunk,
                          const Eigen::VectorXd& rhs,
                          const std::vector<RowTag>&) { reducer.fold(chunk, rhs); });
    rep = reducer.solve(config.trunc_tol);
  }
  rep.wall_time = seconds_since(t0);
  return rep;
}

MarchReport solve_block_marching(const ProblemSpec& problem,
                                 const SolverConfig& config, int n_b) {
  if (n_b < 1) throw std::invalid_argument("block count must be at least 1");
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig cfg = config;
  cfg.n_t = n_b;
  Discretization ds = discretize(problem, cfg);
  auto blocks =
      assemble_blocks(problem, ds.decomp, ds.bank, ds.colloc, cfg.assembly_options());

  MarchReport mr;
  const long long block_cols = blocks[0].cols();
  mr.coefficients.resize(block_cols * n_b);
  Eigen::VectorXd init = blocks[0].h;

  for (int i = 0; i < n_b; ++i) {
    const BlockSystem& bs = blocks[(std::size_t)i];
    Eigen::VectorXd rhs(bs.a.rows());
    rhs << init, bs.f, bs.tail_b;
    SolveReport rep = lstsq(bs.a, rhs, cfg.trunc_tol);
    if (rep.residual_2norm > 1e3 * rhs.norm())
      throw SolveError("time march diverged in block " + std::to_string(i) +
                       ": residual " + std::to_string(rep.residual_2norm) +
                       " against data norm " + std::to_string(rhs.norm()));
    const Eigen::VectorXd& u = rep.coefficients;
    Eigen::VectorXd term(bs.phi1.rows() + bs.phi1_dt.rows());
    term.head(bs.phi1.rows()) = bs.phi1 * u;
    if (bs.phi1_dt.rows() > 0) term.tail(bs.phi1_dt.rows()) = bs.phi1_dt * u;
    mr.coefficients.segment((long long)i * block_cols, block_cols) = u;
    mr.terminal.push_back(term);
    mr.blocks.push_back(std::move(rep));
    init = mr.terminal.back();
  }
  mr.wall_time = seconds_since(t0);
  return mr;
}

Eigen::VectorXd reorder_block_coefficients(const Eigen::VectorXd& block_major,
                                           const Decomposition& decomp,
                                           int j_n, int d_u) {
  const long long n_cells = decomp.cell_count();
  const long long n_t = decomp.n_time;
  const long long block_cols = n_cells * j_n * d_u;
  if (block_major.size() != block_cols * n_t)
    throw std::invalid_argument("coefficient length does not match the layout");
  Eigen::VectorXd out(block_major.size());
  for (long long it = 0; it < n_t; ++it)
    for (long long cx = 0; cx < n_cells; ++cx)
      for (long long j = 0; j < j_n; ++j)
        for (long long k = 0; k < d_u; ++k)
          out[(((cx * n_t + it) * j_n + j)) * d_u + k] =
              block_major[it * block_cols + (cx * j_n + j) * d_u + k];
  return out;
}

std::vector<Eigen::MatrixXd> evaluate(
    const ProblemSpec& problem, const Decomposition& decomp,
    const FeatureBank& bank, PouKind pou_space, PouKind pou_time,
    const Eigen::VectorXd& coefficients,
    const std::vector<std::pair<Vec, double>>& points,
    std::span<const DerivIndex> needed) {
  const int d_u = problem.d_u;
  const long long n_cols =
      (long long)decomp.cell_count() * decomp.n_time * bank.j_n * d_u;
  if (coefficients.size() != n_cols)
    throw std::invalid_argument("coefficient length does not match the layout");

  // the closure of the domain is allowed; anything beyond a tolerance is not
  const double geom_tol = 1e-9;
  auto inside = [&](const Vec& x) {
    if (problem.domain.is_box()) {
      for (int a = 0; a < decomp.dim; ++a) {
        const double pad = geom_tol * (1.0 + std::abs(decomp.hi[a] - decomp.lo[a]));
        if (x[a] < decomp.lo[a] - pad || x[a] > decomp.hi[a] + pad) return false;
      }
      return true;
    }
    return problem.domain.contains(x) ||
           problem.domain.boundary_distance(x) <= geom_tol;
  };

  const PouKind space_eval = pou_space == PouKind::A ? PouKind::None : PouKind::B;
  const PouKind time_eval = pou_time == PouKind::A ? PouKind::None : PouKind::B;

  std::vector<Eigen::MatrixXd> out(needed.size());
  for (auto& m : out) m.setZero((long long)points.size(), d_u);

  Eigen::MatrixXd jets;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const Vec& x = points[pi].first;
    const double t = points[pi].second;
    if ((int)x.size() != decomp.dim)
      throw std::invalid_argument("evaluation point dimension mismatch");
    if (!inside(x) || t < -geom_tol * (1.0 + problem.t_end) ||
        t > problem.t_end * (1.0 + geom_tol) + geom_tol)
      throw std::invalid_argument("evaluation point outside the domain");
    for (auto [cx, it] : covering_cells(decomp, pou_space, pou_time, x, t)) {
      basis_jets(bank, decomp, space_eval, time_eval, cx, it, x, t, needed, jets);
      for (int j = 0; j < bank.j_n; ++j) {
        const long long base =
            ((long long)(cx * decomp.n_time + it) * bank.j_n + j) * d_u;
        for (std::size_t ni = 0; ni < needed.size(); ++ni)
          for (int k = 0; k < d_u; ++k)
            out[ni]((long long)pi, k) += coefficients[base + k] * jets(j, (int)ni);
      }
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> evaluate(
    const ProblemSpec& problem, const Solution& sol,
    const std::vector<std::pair<Vec, double>>& points,
    std::span<const DerivIndex> needed) {
  return evaluate(problem, sol.decomp, sol.bank, sol.pou_space, sol.pou_time,
                  sol.coefficients, points, needed);
}

Solution make_solution(const ProblemSpec& problem, const SolverConfig& config,
                       const SolveReport& report) {
  Solution s;
  s.decomp = decompose(problem.domain, config.n_x, config.n_t, problem.t_end);
  s.bank = draw_bank(config.kind, s.decomp, config.j_n, config.seed, config.r_m,
                     config.share_across_time);
  s.pou_space = config.pou_space;
  s.pou_time = config.pou_time;
  s.d_u = problem.d_u;
  s.coefficients = report.coefficients;
  return s;
}

Solution make_solution(const ProblemSpec& problem, const SolverConfig& config,
                       int n_b, const MarchReport& report) {
  SolverConfig cfg = config;
  cfg.n_t = n_b;
  Solution s;
  s.decomp = decompose(problem.domain, cfg.n_x, n_b, problem.t_end);
  s.bank = draw_bank(cfg.kind, s.decomp, cfg.j_n, cfg.seed, cfg.r_m,
                     cfg.share_across_time);
  s.pou_space = cfg.pou_space;
  // marched blocks tile time with raw per-slab features
  s.pou_time = PouKind::A;
  s.d_u = problem.d_u;
  s.coefficients = reorder_block_coefficients(report.coefficients, s.decomp,
                                              cfg.j_n, problem.d_u);
  return s;
}

}  // namespace strfm
