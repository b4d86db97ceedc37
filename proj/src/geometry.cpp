#include "strfm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace strfm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryTol = 1e-12;

double cross2(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return u.x() * v.y() - u.y() * v.x();
}

bool nearly_full_turn(double th0, double th1) {
  return std::abs(std::abs(th1 - th0) - 2.0 * kPi) <= 1e-12;
}

// Is angle theta (any branch) inside the arc's swept range?  margin > 0
// flags near-endpoint hits as "unsure" via the returned code:
// 1 inside, 0 outside, -1 grazing an endpoint.
int angle_in_arc(double theta, double th0, double th1, double margin) {
  if (nearly_full_turn(th0, th1)) return 1;
  const double lo = std::min(th0, th1), hi = std::max(th0, th1);
  for (int k = -2; k <= 2; ++k) {
    const double a = theta + 2.0 * kPi * k;
    if (std::abs(a - lo) <= margin || std::abs(a - hi) <= margin) return -1;
    if (a > lo && a < hi) return 1;
  }
  return 0;
}

}  // namespace

// ------------------------------------------------------------------ Segment

Segment Segment::line(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  Segment s;
  s.kind = Kind::Line;
  s.a = a;
  s.b = b;
  return s;
}

Segment Segment::arc(const Eigen::Vector2d& c, double r, double th0, double th1) {
  if (r <= 0.0) throw std::invalid_argument("arc radius must be positive");
  if (std::abs(th1 - th0) > 2.0 * kPi + 1e-12)
    throw std::invalid_argument("arc sweep exceeds a full turn");
  Segment s;
  s.kind = Kind::Arc;
  s.c = c;
  s.r = r;
  s.th0 = th0;
  s.th1 = th1;
  return s;
}

Eigen::Vector2d Segment::start() const {
  if (kind == Kind::Line) return a;
  return c + r * Eigen::Vector2d(std::cos(th0), std::sin(th0));
}

Eigen::Vector2d Segment::end() const {
  if (kind == Kind::Line) return b;
  return c + r * Eigen::Vector2d(std::cos(th1), std::sin(th1));
}

double Segment::length() const {
  if (kind == Kind::Line) return (b - a).norm();
  return r * std::abs(th1 - th0);
}

Eigen::Vector2d Segment::point_at(double s) const {
  if (kind == Kind::Line) return a + s * (b - a);
  const double th = th0 + s * (th1 - th0);
  return c + r * Eigen::Vector2d(std::cos(th), std::sin(th));
}

Eigen::Vector2d Segment::right_normal_at(double s) const {
  if (kind == Kind::Line) {
    const Eigen::Vector2d d = (b - a).normalized();
    return {d.y(), -d.x()};
  }
  const double th = th0 + s * (th1 - th0);
  // travel direction is +/-(-sin, cos); right of travel is radial
  const Eigen::Vector2d radial(std::cos(th), std::sin(th));
  return th1 > th0 ? radial : Eigen::Vector2d(-radial);
}

double Segment::distance(const Eigen::Vector2d& p) const {
  if (kind == Kind::Line) {
    const Eigen::Vector2d e = b - a;
    const double len2 = e.squaredNorm();
    const double t = len2 > 0 ? std::clamp((p - a).dot(e) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * e)).norm();
  }
  const Eigen::Vector2d d = p - c;
  const double theta = std::atan2(d.y(), d.x());
  if (angle_in_arc(theta, th0, th1, 0.0) != 0) return std::abs(d.norm() - r);
  return std::min((p - start()).norm(), (p - end()).norm());
}

// --------------------------------------------------------------------- Loop

double Loop::signed_area() const {
  double area = 0.0;
  for (const Segment& s : segments) {
    if (s.kind == Segment::Kind::Line) {
      area += 0.5 * cross2(s.a, s.b);
    } else {
      const double ds = std::sin(s.th1) - std::sin(s.th0);
      const double dc = std::cos(s.th1) - std::cos(s.th0);
      area += 0.5 * (s.c.x() * s.r * ds - s.c.y() * s.r * dc +
                     s.r * s.r * (s.th1 - s.th0));
    }
  }
  return area;
}

void Loop::reverse() {
  std::reverse(segments.begin(), segments.end());
  for (Segment& s : segments) {
    if (s.kind == Segment::Kind::Line)
      std::swap(s.a, s.b);
    else
      std::swap(s.th0, s.th1);
  }
}

bool Loop::is_closed(double tol) const {
  if (segments.empty()) return false;
  for (size_t i = 0; i < segments.size(); ++i) {
    const Eigen::Vector2d gap =
        segments[i].end() - segments[(i + 1) % segments.size()].start();
    if (gap.norm() > tol) return false;
  }
  return true;
}

namespace {

// Crossing count of the ray p + t*dir, t > 0, against one segment.
// Returns -1 when the configuration is numerically ambiguous (parallel
// overlap, tangency, endpoint graze); the caller then rotates the ray.
int ray_crossings(const Segment& s, const Eigen::Vector2d& p,
                  const Eigen::Vector2d& dir) {
  constexpr double kTEps = 1e-11;
  constexpr double kSEps = 1e-11;
  if (s.kind == Segment::Kind::Line) {
    const Eigen::Vector2d e = s.b - s.a;
    const double den = cross2(dir, e);
    const double scale = std::max(1.0, e.norm());
    if (std::abs(den) <= 1e-14 * scale) {
      // parallel; ambiguous only if the line is close to the ray's carrier
      if (std::abs(cross2(s.a - p, dir)) <= kSEps * scale) return -1;
      return 0;
    }
    const double t = cross2(s.a - p, e) / den;
    const double u = cross2(s.a - p, dir) / den;
    if (std::abs(t) <= kTEps) {
      // The ray's origin sits on the carrier line.  That is only ambiguous
      // when the origin also falls within the segment's span; merely being
      // collinear with a far-away segment (uniform grids align with
      // axis-parallel edges all the time) is a clean miss for every ray.
      return (u > -kSEps && u < 1.0 + kSEps) ? -1 : 0;
    }
    if (u <= kSEps || u >= 1.0 - kSEps) {
      // endpoint graze matters only if the hit is on the actual ray side
      if (t > 0 && u > -kSEps && u < 1.0 + kSEps) return -1;
      return 0;
    }
    return t > 0 ? 1 : 0;
  }
  // arc: intersect the carrier circle, then filter by angle
  const Eigen::Vector2d f = p - s.c;
  const double bq = f.dot(dir);
  const double cq = f.squaredNorm() - s.r * s.r;
  const double disc = bq * bq - cq;
  if (std::abs(disc) <= 1e-12 * s.r * s.r) return -1;  // near tangency
  if (disc < 0) return 0;
  const double sq = std::sqrt(disc);
  int count = 0;
  for (double t : {-bq - sq, -bq + sq}) {
    const Eigen::Vector2d q = p + t * dir - s.c;
    const int in = angle_in_arc(std::atan2(q.y(), q.x()), s.th0, s.th1, 1e-11);
    if (std::abs(t) <= kTEps) {
      // origin on the carrier circle: ambiguous only if it grazes the arc
      // itself, otherwise the root at the origin simply does not count
      if (in != 0) return -1;
      continue;
    }
    if (t < 0) continue;
    if (in < 0) return -1;
    count += in;
  }
  return count;
}

}  // namespace

bool Loop::encloses(const Eigen::Vector2d& p) const {
  for (int attempt = 0; attempt < 32; ++attempt) {
    const double alpha =
        2.0 * kPi * std::fmod(0.6180339887498949 * (attempt + 1), 1.0) + 0.0137;
    const Eigen::Vector2d dir(std::cos(alpha), std::sin(alpha));
    int total = 0;
    bool ok = true;
    for (const Segment& s : segments) {
      const int c = ray_crossings(s, p, dir);
      if (c < 0) {
        ok = false;
        break;
      }
      total += c;
    }
    if (ok) return (total % 2) == 1;
  }
  throw std::runtime_error("point-in-loop test failed to find a clean ray");
}

double Loop::distance(const Eigen::Vector2d& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) d = std::min(d, s.distance(p));
  return d;
}

void Loop::bounding_box(Eigen::Vector2d& lo, Eigen::Vector2d& hi) const {
  lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  hi = -lo;
  auto absorb = [&](const Eigen::Vector2d& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  for (const Segment& s : segments) {
    absorb(s.start());
    absorb(s.end());
    if (s.kind == Segment::Kind::Arc) {
      // axis-extreme angles that fall inside the sweep
      for (int k = -4; k <= 4; ++k) {
        const double th = 0.5 * kPi * k;
        if (angle_in_arc(th, s.th0, s.th1, 0.0) != 0)
          absorb(s.c + s.r * Eigen::Vector2d(std::cos(th), std::sin(th)));
      }
    }
  }
}

// ------------------------------------------------------------ SpatialDomain

SpatialDomain SpatialDomain::box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() < 1 || lo.size() > 3)
    throw std::invalid_argument("box domain needs 1 to 3 matching bounds");
  for (int k = 0; k < lo.size(); ++k)
    if (!(lo[k] < hi[k]))
      throw std::invalid_argument("box domain bounds must satisfy lo < hi");
  SpatialDomain d;
  d.is_box_ = true;
  d.dim_ = static_cast<int>(lo.size());
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

SpatialDomain SpatialDomain::composite(Loop outer, std::vector<Loop> holes) {
  Eigen::Vector2d blo, bhi;
  outer.bounding_box(blo, bhi);
  const double diam = (bhi - blo).norm();
  if (!outer.is_closed(1e-9 * std::max(1.0, diam)))
    throw std::invalid_argument("composite outer loop is not closed");
  if (outer.signed_area() < 0) outer.reverse();
  for (Loop& h : holes) {
    if (!h.is_closed(1e-9 * std::max(1.0, diam)))
      throw std::invalid_argument("composite hole loop is not closed");
    if (h.signed_area() > 0) h.reverse();
  }
  // holes must sit strictly inside the outer loop
  for (const Loop& h : holes)
    for (const Segment& s : h.segments)
      for (double fr : {0.25, 0.5, 0.75})
        if (!outer.encloses(s.point_at(fr)))
          throw std::invalid_argument("composite hole reaches outside the outer loop");
  SpatialDomain d;
  d.is_box_ = false;
  d.dim_ = 2;
  d.outer_ = std::move(outer);
  d.holes_ = std::move(holes);
  d.lo_ = Vec(2);
  d.hi_ = Vec(2);
  d.lo_ << blo.x(), blo.y();
  d.hi_ << bhi.x(), bhi.y();
  return d;
}

bool SpatialDomain::contains(const Vec& x) const {
  if (x.size() != dim_) throw std::invalid_argument("contains: dimension mismatch");
  if (is_box_) {
    for (int k = 0; k < dim_; ++k)
      if (!(x[k] > lo_[k] && x[k] < hi_[k])) return false;
    return true;
  }
  const Eigen::Vector2d p(x[0], x[1]);
  if (boundary_distance(x) <= kBoundaryTol) return false;
  if (!outer_.encloses(p)) return false;
  for (const Loop& h : holes_)
    if (h.encloses(p)) return false;
  return true;
}

double SpatialDomain::boundary_distance(const Vec& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("boundary_distance: dimension mismatch");
  if (is_box_) {
    // distance to the box surface (negative values never reported; this is
    // the unsigned distance from x to the nearest face, valid inside or out)
    double inside_min = std::numeric_limits<double>::infinity();
    bool inside = true;
    Vec clamped = x;
    for (int k = 0; k < dim_; ++k) {
      if (x[k] < lo_[k] || x[k] > hi_[k]) inside = false;
      clamped[k] = std::clamp(x[k], lo_[k], hi_[k]);
      inside_min = std::min(inside_min, std::min(x[k] - lo_[k], hi_[k] - x[k]));
    }
    if (!inside) return (x - clamped).norm();
    return inside_min;
  }
  const Eigen::Vector2d p(x[0], x[1]);
  double d = outer_.distance(p);
  for (const Loop& h : holes_) d = std::min(d, h.distance(p));
  return d;
}

void SpatialDomain::bounding_box(Vec& lo, Vec& hi) const {
  lo = lo_;
  hi = hi_;
}

// ----------------------------------------------------- composite text format

namespace {

[[noreturn]] void schema_fail(int lineno, const std::string& msg) {
  throw ConfigError("domain.file",
                    "composite domain file, line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

// Format: see docs/composite_domain_format.md.  Keywords: "composite 1"
// header, then "outer" / "hole" sections of "line x0 y0 x1 y1",
// "arc cx cy r th0_deg th1_deg", "circle cx cy r" records, and "end".
SpatialDomain SpatialDomain::load_composite(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool header = false, done = false;
  std::vector<Loop> loops;  // loops[0] = outer
  std::vector<bool> is_outer;
  auto current = [&]() -> Loop& {
    if (loops.empty()) schema_fail(lineno, "segment before any 'outer'/'hole'");
    return loops.back();
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (done) schema_fail(lineno, "content after 'end'");
    if (word == "composite") {
      int version = 0;
      if (!(ls >> version) || version != 1) schema_fail(lineno, "expected 'composite 1'");
      header = true;
      continue;
    }
    if (!header) schema_fail(lineno, "file must start with 'composite 1'");
    if (word == "outer") {
      if (std::count(is_outer.begin(), is_outer.end(), true) > 0)
        schema_fail(lineno, "duplicate 'outer' section");
      loops.emplace_back();
      is_outer.push_back(true);
    } else if (word == "hole") {
      loops.emplace_back();
      is_outer.push_back(false);
    } else if (word == "line") {
      double x0, y0, x1, y1;
      if (!(ls >> x0 >> y0 >> x1 >> y1)) schema_fail(lineno, "line needs 4 numbers");
      current().segments.push_back(Segment::line({x0, y0}, {x1, y1}));
    } else if (word == "arc") {
      double cx, cy, r, a0, a1;
      if (!(ls >> cx >> cy >> r >> a0 >> a1)) schema_fail(lineno, "arc needs 5 numbers");
      current().segments.push_back(
          Segment::arc({cx, cy}, r, a0 * kPi / 180.0, a1 * kPi / 180.0));
    } else if (word == "circle") {
      double cx, cy, r;
      if (!(ls >> cx >> cy >> r)) schema_fail(lineno, "circle needs 3 numbers");
      current().segments.push_back(Segment::arc({cx, cy}, r, 0.0, 2.0 * kPi));
    } else if (word == "end") {
      done = true;
    } else {
      schema_fail(lineno, "unknown keyword '" + word + "'");
    }
  }
  if (!done) schema_fail(lineno, "missing 'end'");
  if (loops.empty() || !is_outer.front())
    schema_fail(lineno, "first section must be 'outer'");
  std::vector<Loop> holes(loops.begin() + 1, loops.end());
  try {
    return composite(loops.front(), std::move(holes));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("domain.file", e.what());
  }
}

SpatialDomain SpatialDomain::load_composite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("domain.file", "cannot open composite domain file: " + path);
  return load_composite(in);
}

// ------------------------------------------------------------ Decomposition

int Decomposition::cell_count() const {
  int n = 1;
  for (int c : n_cells) n *= c;
  return n;
}

int Decomposition::flatten(const std::vector<int>& ix) const {
  int flat = 0;
  for (int k = 0; k < dim; ++k) flat = flat * n_cells[k] + ix[k];
  return flat;
}

std::vector<int> Decomposition::unflatten(int flat) const {
  std::vector<int> ix(dim);
  for (int k = dim - 1; k >= 0; --k) {
    ix[k] = flat % n_cells[k];
    flat /= n_cells[k];
  }
  return ix;
}

double Decomposition::cell_width(int axis) const {
  return (hi[axis] - lo[axis]) / n_cells[axis];
}

double Decomposition::to_unit(int axis, int idx, double x) const {
  const double a = cell_lo(axis, idx), b = cell_hi(axis, idx);
  return (2.0 * x - (a + b)) / (b - a);
}

double Decomposition::from_unit(int axis, int idx, double z) const {
  const double a = cell_lo(axis, idx), b = cell_hi(axis, idx);
  return 0.5 * (z * (b - a) + (a + b));
}

double Decomposition::time_to_unit(int it, double t) const {
  const double a = time_lo(it), b = time_hi(it);
  return (2.0 * t - (a + b)) / (b - a);
}

double Decomposition::time_from_unit(int it, double z) const {
  const double a = time_lo(it), b = time_hi(it);
  return 0.5 * (z * (b - a) + (a + b));
}

int Decomposition::locate(int axis, double x) const {
  const int idx = static_cast<int>(std::floor((x - lo[axis]) / cell_width(axis)));
  return std::clamp(idx, 0, n_cells[axis] - 1);
}

int Decomposition::locate_time(double t) const {
  const int idx = static_cast<int>(std::floor(t / time_width()));
  return std::clamp(idx, 0, n_time - 1);
}

Decomposition decompose(const SpatialDomain& domain, const std::vector<int>& n_x,
                        int n_t, double t_end) {
  if (static_cast<int>(n_x.size()) != domain.dim())
    throw ConfigError("N_x", "need one spatial cell count per axis");
  for (int c : n_x)
    if (c < 1) throw ConfigError("N_x", "spatial cell counts must be positive");
  if (n_t < 1) throw ConfigError("N_t", "time cell count must be positive");
  if (!(t_end > 0)) throw ConfigError("T", "final time must be positive");
  Decomposition d;
  d.dim = domain.dim();
  domain.bounding_box(d.lo, d.hi);
  d.n_cells = n_x;
  d.n_time = n_t;
  d.t_end = t_end;
  return d;
}

// -------------------------------------------------------- collocation points

namespace {

// Tensor product of cell-centered 1D grids, restricted to the domain.
std::vector<Vec> cell_interior_grid(const SpatialDomain& domain,
                                    const Decomposition& d,
                                    const std::vector<int>& ix, int q_x) {
  std::vector<Vec> pts;
  const int dim = d.dim;
  std::vector<int> q(dim, 0);
  while (true) {
    Vec x(dim);
    for (int k = 0; k < dim; ++k) {
      const double w = d.cell_width(k);
      x[k] = d.cell_lo(k, ix[k]) + (q[k] + 0.5) * w / q_x;
    }
    if (domain.contains(x)) pts.push_back(x);
    int k = dim - 1;
    while (k >= 0 && ++q[k] == q_x) q[k--] = 0;
    if (k < 0) break;
  }
  return pts;
}

}  // namespace

CollocationSet sample_collocation(const SpatialDomain& domain,
                                  const Decomposition& d, int q_x, int q_t) {
  if (q_x < 1) throw ConfigError("Q_x", "collocation counts must be positive");
  if (q_t < 1) throw ConfigError("Q_t", "collocation counts must be positive");
  CollocationSet cs;
  cs.q_x = q_x;
  cs.q_t = q_t;
  const int n_cells = d.cell_count();

  cs.cell_grid.resize(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    cs.cell_grid[c] = cell_interior_grid(domain, d, d.unflatten(c), q_x);
    if (cs.cell_grid[c].empty())
      throw ConfigError("N_x", "spatial cell " + std::to_string(c) +
                                   " has no collocation points inside the domain");
  }

  const double dt_node = d.time_width() / q_t;

  // interior PDE nodes: first q_t time nodes of every time cell
  for (int c = 0; c < n_cells; ++c)
    for (int it = 0; it < d.n_time; ++it)
      for (int qt = 0; qt < q_t; ++qt)
        for (const Vec& x : cs.cell_grid[c])
          cs.interior.push_back({x, d.time_lo(it) + qt * dt_node, c, it});

  // initial nodes
  for (int c = 0; c < n_cells; ++c)
    for (const Vec& x : cs.cell_grid[c]) cs.initial.push_back({x, c});

  // boundary nodes, density matched to the interior grids
  std::vector<std::pair<Vec, std::pair<int, Vec>>> bpts;  // (x, (face, normal))
  if (domain.is_box()) {
    const int dim = d.dim;
    std::vector<int> ix(dim, 0);
    for (int axis = 0; axis < dim; ++axis) {
      for (int side = 0; side < 2; ++side) {
        // tensor iterate boundary cells: fix this axis to its end cell
        std::vector<int> tcell(dim, 0);
        while (true) {
          std::vector<int> cell(dim);
          for (int k = 0; k < dim; ++k) cell[k] = tcell[k];
          cell[axis] = side == 0 ? 0 : d.n_cells[axis] - 1;
          // cell-centered tangential grid
          std::vector<int> q(dim, 0);
          bool any_tang = dim > 1;
          while (true) {
            Vec x(dim);
            for (int k = 0; k < dim; ++k) {
              if (k == axis) {
                x[k] = side == 0 ? d.lo[axis] : d.hi[axis];
              } else {
                x[k] = d.cell_lo(k, cell[k]) + (q[k] + 0.5) * d.cell_width(k) / q_x;
              }
            }
            Vec nrm = Vec::Zero(dim);
            nrm[axis] = side == 0 ? -1.0 : 1.0;
            bpts.push_back({x, {2 * axis + side, nrm}});
            if (!any_tang) break;
            int k = dim - 1;
            while (k >= 0 && (k == axis || ++q[k] == q_x)) {
              if (k != axis) q[k] = 0;
              --k;
            }
            if (k < 0) break;
          }
          // advance over tangential cells
          int k = dim - 1;
          while (k >= 0 && (k == axis || ++tcell[k] == d.n_cells[k])) {
            if (k != axis) tcell[k] = 0;
            --k;
          }
          if (k < 0) break;
        }
      }
    }
  } else {
    double h = std::numeric_limits<double>::infinity();
    for (int k = 0; k < d.dim; ++k) h = std::min(h, d.cell_width(k) / q_x);
    int face = 0;
    auto sample_loop = [&](const Loop& loop) {
      for (const Segment& s : loop.segments) {
        const int n = std::max<int>(1, std::llround(s.length() / h));
        for (int i = 0; i < n; ++i) {
          const double fr = (i + 0.5) / n;
          const Eigen::Vector2d p = s.point_at(fr);
          const Eigen::Vector2d nr = s.right_normal_at(fr);
          Vec x(2), nrm(2);
          x << p.x(), p.y();
          nrm << nr.x(), nr.y();
          bpts.push_back({x, {face, nrm}});
        }
        ++face;
      }
    };
    sample_loop(domain.outer());
    for (const Loop& hle : domain.holes()) sample_loop(hle);
  }
  for (const auto& [x, fn] : bpts) {
    int c;
    {
      std::vector<int> ix(d.dim);
      for (int k = 0; k < d.dim; ++k) ix[k] = d.locate(k, x[k]);
      c = d.flatten(ix);
    }
    for (int it = 0; it < d.n_time; ++it)
      for (int qt = 0; qt <= q_t; ++qt)
        cs.boundary.push_back({x, d.time_lo(it) + qt * dt_node, c, it, fn.first, fn.second});
  }

  // time-interface nodes: the N_t - 1 shared time levels, per grid point
  for (int c = 0; c < n_cells; ++c)
    for (int it = 0; it + 1 < d.n_time; ++it)
      for (const Vec& x : cs.cell_grid[c])
        cs.time_interface.push_back({x, d.time_hi(it), c, it});

  // space-interface nodes: shared faces between adjacent cells, tangential
  // grid matching the interior grid, all q_t + 1 time nodes
  for (int axis = 0; axis < d.dim; ++axis) {
    for (int c = 0; c < n_cells; ++c) {
      std::vector<int> ix = d.unflatten(c);
      if (ix[axis] + 1 >= d.n_cells[axis]) continue;
      std::vector<int> right = ix;
      right[axis] += 1;
      const int cr = d.flatten(right);
      const double xface = d.cell_hi(axis, ix[axis]);
      // tangential cell-centered grid of the left cell
      std::vector<int> q(d.dim, 0);
      while (true) {
        Vec x(d.dim);
        for (int k = 0; k < d.dim; ++k) {
          x[k] = k == axis
                     ? xface
                     : d.cell_lo(k, ix[k]) + (q[k] + 0.5) * d.cell_width(k) / q_x;
        }
        bool keep = domain.is_box() || domain.contains(x);
        if (keep)
          for (int it = 0; it < d.n_time; ++it)
            for (int qt = 0; qt <= q_t; ++qt)
              cs.space_interface.push_back(
                  {x, d.time_lo(it) + qt * dt_node, axis, c, cr, it});
        int k = d.dim - 1;
        while (k >= 0 && (k == axis || ++q[k] == q_x)) {
          if (k != axis) q[k] = 0;
          --k;
        }
        if (k < 0) break;
      }
    }
  }
  return cs;
}

}  // namespace strfm
