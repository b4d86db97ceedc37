#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strfm/types.hpp"

namespace strfm {

// ---------------------------------------------------------------- domains

// One piece of a composite-domain loop.  Arcs are circular, parameterized by
// center, radius and start/end angles in radians; travel is from th0 to th1
// (counter-clockwise when th1 > th0).
struct Segment {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  Eigen::Vector2d a{0, 0}, b{0, 0};  // line endpoints
  Eigen::Vector2d c{0, 0};           // arc center
  double r = 0.0, th0 = 0.0, th1 = 0.0;

  static Segment line(const Eigen::Vector2d& a, const Eigen::Vector2d& b);
  static Segment arc(const Eigen::Vector2d& c, double r, double th0, double th1);

  Eigen::Vector2d start() const;
  Eigen::Vector2d end() const;
  double length() const;
  // arclength-fraction parameterization, s in [0, 1]
  Eigen::Vector2d point_at(double s) const;
  // unit normal pointing to the right of the travel direction
  Eigen::Vector2d right_normal_at(double s) const;
  double distance(const Eigen::Vector2d& p) const;
};

// Closed chain of segments.  Orientation is normalized on construction:
// counter-clockwise for outer loops, clockwise for holes, so the outward
// domain normal is always the right-of-travel normal.
struct Loop {
  std::vector<Segment> segments;

  double signed_area() const;
  void reverse();
  bool is_closed(double tol) const;
  // even-odd test against the loop outline (boundary points unspecified)
  bool encloses(const Eigen::Vector2d& p) const;
  double distance(const Eigen::Vector2d& p) const;
  void bounding_box(Eigen::Vector2d& lo, Eigen::Vector2d& hi) const;
};

// Spatial domain: an axis-aligned box in 1..3 dimensions, or a planar
// composite region (outer loop minus holes).  contains() is the open
// interior; points on the boundary (within 1e-12) report false.
class SpatialDomain {
 public:
  static SpatialDomain box(const Vec& lo, const Vec& hi);
  static SpatialDomain composite(Loop outer, std::vector<Loop> holes);
  static SpatialDomain load_composite(std::istream& in);
  static SpatialDomain load_composite_file(const std::string& path);

  int dim() const { return dim_; }
  bool is_box() const { return is_box_; }
  const Vec& box_lo() const { return lo_; }
  const Vec& box_hi() const { return hi_; }
  const Loop& outer() const { return outer_; }
  const std::vector<Loop>& holes() const { return holes_; }

  bool contains(const Vec& x) const;
  double boundary_distance(const Vec& x) const;
  void bounding_box(Vec& lo, Vec& hi) const;

 private:
  SpatialDomain() = default;
  bool is_box_ = true;
  int dim_ = 1;
  Vec lo_, hi_;  // box bounds, or composite bounding box
  Loop outer_;
  std::vector<Loop> holes_;
};

// ---------------------------------------------------- decomposition in x, t

// Uniform tensor decomposition of the domain bounding box and of [0, T].
// Cell flattening is lexicographic with the last axis fastest.  Normalized
// cell coordinates z = (2x - (lo + hi)) / (hi - lo) live in [-1, 1].
struct Decomposition {
  int dim = 1;
  Vec lo, hi;                // spatial bounding box
  std::vector<int> n_cells;  // per axis
  int n_time = 1;
  double t_end = 1.0;

  int cell_count() const;
  int flatten(const std::vector<int>& ix) const;
  std::vector<int> unflatten(int flat) const;

  double cell_width(int axis) const;
  double cell_lo(int axis, int idx) const { return lo[axis] + idx * cell_width(axis); }
  double cell_hi(int axis, int idx) const { return lo[axis] + (idx + 1) * cell_width(axis); }

  double time_width() const { return t_end / n_time; }
  double time_lo(int it) const { return it * time_width(); }
  double time_hi(int it) const { return (it + 1) * time_width(); }

  // normalization maps per axis/cell and their inverses
  double to_unit(int axis, int idx, double x) const;
  double from_unit(int axis, int idx, double z) const;
  double unit_scale(int axis) const { return 2.0 / cell_width(axis); }
  double time_to_unit(int it, double t) const;
  double time_from_unit(int it, double z) const;
  double time_unit_scale() const { return 2.0 / time_width(); }

  // index of the cell owning x along an axis; half-open cells, clamped so
  // the domain's upper edge belongs to the last cell
  int locate(int axis, double x) const;
  int locate_time(double t) const;
};

Decomposition decompose(const SpatialDomain& domain, const std::vector<int>& n_x,
                        int n_t, double t_end);

// ------------------------------------------------------- collocation points

struct InteriorNode {
  Vec x;
  double t = 0.0;
  int cell_x = 0, cell_t = 0;
};

struct BoundaryNode {
  Vec x;
  double t = 0.0;
  int cell_x = 0, cell_t = 0;
  int face = 0;  // box: 2*axis+side; composite: global segment index
  Vec normal;    // outward unit normal
};

struct InitialNode {
  Vec x;
  int cell_x = 0;
};

struct TimeInterfaceNode {
  Vec x;
  double t = 0.0;
  int cell_x = 0;
  int cell_t_left = 0;  // interface between cell_t_left and cell_t_left + 1
};

struct SpaceInterfaceNode {
  Vec x;
  double t = 0.0;
  int axis = 0;
  int cell_x_left = 0, cell_x_right = 0;
  int cell_t = 0;
};

// Interior nodes carry only the time levels used by PDE rows (the first Q_t
// nodes of each cell); boundary and interface nodes carry all Q_t + 1.
struct CollocationSet {
  int q_x = 0, q_t = 0;
  std::vector<InteriorNode> interior;
  std::vector<BoundaryNode> boundary;
  std::vector<InitialNode> initial;
  std::vector<TimeInterfaceNode> time_interface;
  std::vector<SpaceInterfaceNode> space_interface;
  // spatial interior grid per cell, shared by interior/initial/interface rows
  std::vector<std::vector<Vec>> cell_grid;
};

CollocationSet sample_collocation(const SpatialDomain& domain,
                                  const Decomposition& decomp, int q_x, int q_t);

}  // namespace strfm
