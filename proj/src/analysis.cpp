#include "strfm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace strfm {

namespace {

// tensor grid of (grid_x + 1) trapezoid nodes per axis over the bounding box;
// weight 0 for nodes outside a composite domain
struct SpaceGrid {
  std::vector<Vec> points;
  std::vector<double> weights;  // trapezoid weight * cell volume factor
};

SpaceGrid space_grid(const SpatialDomain& domain, int grid_x) {
  if (grid_x < 1) throw std::invalid_argument("eval grid needs >= 1 interval");
  const int dim = domain.dim();
  const Vec lo = domain.box_lo(), hi = domain.box_hi();
  SpaceGrid g;
  std::vector<int> ix(dim, 0);
  while (true) {
    Vec x(dim);
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      x[a] = lo[a] + (hi[a] - lo[a]) * ix[a] / grid_x;
      w *= ((ix[a] == 0 || ix[a] == grid_x) ? 0.5 : 1.0) *
           (hi[a] - lo[a]) / grid_x;
    }
    if (!domain.is_box() && !domain.contains(x)) w = 0.0;
    if (w > 0.0 || domain.is_box()) {
      g.points.push_back(x);
      g.weights.push_back(w);
    }
    int a = dim - 1;
    while (a >= 0 && ++ix[a] > grid_x) ix[a--] = 0;
    if (a < 0) break;
  }
  return g;
}

}  // namespace

ErrorReport error_report(const ProblemSpec& problem, const Solution& sol,
                         const ReferenceFn& reference, int grid_x, int grid_t) {
  if (grid_t < 1) throw std::invalid_argument("eval grid needs >= 1 interval");
  const int n_seg = sol.decomp.n_time;
  const int d_u = problem.d_u;
  SpaceGrid sg = space_grid(problem.domain, grid_x);

  ErrorReport rep;
  rep.grid_x = grid_x;
  rep.grid_t = grid_t;
  rep.component_linf.assign((std::size_t)d_u, 0.0);
  rep.segment_l2.resize((std::size_t)n_seg);
  rep.segment_l2_rel.resize((std::size_t)n_seg);
  rep.segment_t_mid.resize((std::size_t)n_seg);

  const std::vector<DerivIndex> needed = {DerivIndex::value()};
  const int m = std::max(1, (grid_t + n_seg - 1) / n_seg);  // intervals per segment
  double err_sq = 0.0, ref_sq = 0.0;

  for (int seg = 0; seg < n_seg; ++seg) {
    const double t0 = sol.decomp.time_lo(seg), t1 = sol.decomp.time_hi(seg);
    rep.segment_t_mid[(std::size_t)seg] = 0.5 * (t0 + t1);
    double seg_err = 0.0, seg_ref = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double t = t0 + (t1 - t0) * k / m;
      const double wt = ((k == 0 || k == m) ? 0.5 : 1.0) * (t1 - t0) / m;
      std::vector<std::pair<Vec, double>> pts;
      pts.reserve(sg.points.size());
      for (const Vec& x : sg.points) pts.push_back({x, t});
      auto out = evaluate(problem, sol, pts, needed);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        double e2 = 0.0, r2 = 0.0;
        for (int c = 0; c < d_u; ++c) {
          const double want = reference(pts[i].first, t, c);
          const double diff = out[0]((long long)i, c) - want;
          e2 += diff * diff;
          r2 += want * want;
          const double a = std::abs(diff);
          if (a > rep.component_linf[(std::size_t)c])
            rep.component_linf[(std::size_t)c] = a;
          if (a > rep.linf) rep.linf = a;
        }
        seg_err += wt * sg.weights[i] * e2;
        seg_ref += wt * sg.weights[i] * r2;
      }
    }
    rep.segment_l2[(std::size_t)seg] = std::sqrt(seg_err);
    rep.segment_l2_rel[(std::size_t)seg] =
        seg_ref > 0.0 ? std::sqrt(seg_err / seg_ref) : 0.0;
    err_sq += seg_err;
    ref_sq += seg_ref;
  }
  rep.l2 = std::sqrt(err_sq);
  rep.l2_rel = ref_sq > 0.0 ? std::sqrt(err_sq / ref_sq) : 0.0;
  return rep;
}

ErrorReport error_report(const ProblemSpec& problem, const Solution& sol,
                         int grid_x, int grid_t) {
  if (!problem.exact.available)
    throw std::invalid_argument(
        "problem has no closed-form solution; supply a reference");
  const auto& exact = problem.exact;
  return error_report(
      problem, sol,
      [&exact](const Vec& x, double t, int k) { return exact.value(x, t, k); },
      grid_x, grid_t);
}

EigenReport eigen_report(const Eigen::MatrixXcd& b) {
  if (b.rows() != b.cols()) throw std::invalid_argument("matrix must be square");
  if (!b.allFinite()) throw std::invalid_argument("matrix has non-finite entries");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue iteration failed to converge");

  EigenReport rep;
  rep.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b2) {
              if (a.real() != b2.real()) return a.real() < b2.real();
              return a.imag() < b2.imag();
            });
  for (const auto& ev : rep.eigenvalues)
    rep.lambda_m = std::max(rep.lambda_m, std::abs(ev));
  rep.growth_factor = std::sqrt(rep.lambda_m);

  // greedy clustering at 1e-9 relative separation
  std::vector<std::complex<double>> reps;
  for (const auto& ev : rep.eigenvalues) {
    bool fresh = true;
    for (const auto& r : reps)
      if (std::abs(ev - r) <= 1e-9 * std::max(std::abs(ev), std::abs(r))) {
        fresh = false;
        break;
      }
    if (fresh) reps.push_back(ev);
  }
  rep.unique_count = (int)reps.size();
  return rep;
}

EigenReport eigen_report(const Eigen::MatrixXd& b) {
  return eigen_report(Eigen::MatrixXcd(b.cast<std::complex<double>>()));
}

Eigen::MatrixXcd fold_complex_pairs(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols() || b.rows() % 2 != 0)
    throw std::invalid_argument("matrix is not an even-sized square");
  const long long n = b.rows() / 2;
  Eigen::MatrixXcd out(n, n);
  double defect = 0.0;
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      const double re0 = b(2 * i, 2 * j), im0 = b(2 * i + 1, 2 * j);
      // complex-linear structure: [re -im; im re] per 2x2 block
      defect = std::max(defect, std::abs(b(2 * i + 1, 2 * j + 1) - re0));
      defect = std::max(defect, std::abs(b(2 * i, 2 * j + 1) + im0));
      out(i, j) = {re0, im0};
    }
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (defect > 1e-8 * scale)
    throw std::invalid_argument(
        "matrix does not act complex-linearly on (re, im) pairs");
  return out;
}

GrowthFit growth_fit(const std::vector<double>& segment_errors) {
  const int n = (int)segment_errors.size();
  if (n < 3)
    throw std::invalid_argument("growth fit needs at least 3 segments");
  std::vector<double> y((std::size_t)n);
  for (int i = 0; i < n; ++i) {
    if (!(segment_errors[(std::size_t)i] > 0.0))
      throw std::invalid_argument("growth fit needs positive errors");
    y[(std::size_t)i] = std::log(segment_errors[(std::size_t)i]);
  }
  // centered abscissae make the slope invariant under common scaling of the
  // errors (the shift in log cancels exactly against the zero-sum weights)
  const double xbar = 0.5 * (n - 1);
  double sxy = 0.0, sxx = 0.0, ybar = 0.0;
  for (int i = 0; i < n; ++i) ybar += y[(std::size_t)i] / n;
  for (int i = 0; i < n; ++i) {
    sxy += (i - xbar) * y[(std::size_t)i];
    sxx += (i - xbar) * (i - xbar);
  }
  const double slope = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fit = ybar + slope * (i - xbar);
    ss_res += (y[(std::size_t)i] - fit) * (y[(std::size_t)i] - fit);
    ss_tot += (y[(std::size_t)i] - ybar) * (y[(std::size_t)i] - ybar);
  }
  GrowthFit g;
  g.rate = std::exp(slope);
  g.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return g;
}

std::vector<SweepRow> convergence_sweep(const ProblemSpec& problem,
                                        const SolverConfig& base,
                                        SweepAxis axis,
                                        const std::vector<int>& values,
                                        int n_b,
                                        const ReferenceFn* reference,
                                        int grid_x, int grid_t) {
  if (values.empty()) throw std::invalid_argument("sweep needs values");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] <= values[i - 1])
      throw std::invalid_argument("sweep values must be strictly increasing");
  if (!reference && !problem.exact.available)
    throw std::invalid_argument(
        "problem has no closed-form solution; supply a reference");
  if (n_b < 1) throw std::invalid_argument("sweep block count must be >= 1");
  if (n_b > 1 && axis == SweepAxis::NT)
    throw std::invalid_argument("time-cell sweep cannot fix a block count");

  std::vector<SweepRow> rows;
  for (int v : values) {
    SolverConfig cfg = base;
    Solution sol;
    const int blocks = axis == SweepAxis::NB ? v : n_b;
    if (axis == SweepAxis::NT) cfg.n_t = v;
    if (axis == SweepAxis::JN) cfg.j_n = v;
    if (axis == SweepAxis::Q) cfg.q_x = cfg.q_t = v;
    if (blocks > 1 || axis == SweepAxis::NB) {
      cfg.n_t = 1;
      auto rep = solve_block_marching(problem, cfg, blocks);
      sol = make_solution(problem, cfg, blocks, rep);
    } else {
      auto rep = solve_strfm(problem, cfg);
      sol = make_solution(problem, cfg, rep);
    }
    ErrorReport er = reference
                         ? error_report(problem, sol, *reference, grid_x, grid_t)
                         : error_report(problem, sol, grid_x, grid_t);
    rows.push_back({v, er.l2_rel > 0.0 ? er.l2_rel : er.l2, er.linf});
  }
  return rows;
}

}  // namespace strfm
