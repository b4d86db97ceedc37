#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace strfm {

// Spatial points are low-dimensional (1 to 3 axes); a fixed-capacity vector
// keeps them off the heap in the hot evaluation loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

inline Vec vec1(double x) {
  Vec v(1);
  v << x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Mixed partial-derivative request: per-axis spatial orders plus a time
// order.  Orders above 2 on any axis (and total spatial order above 2) are
// outside the operator algebra and rejected on use.
struct DerivIndex {
  std::array<int, 3> dx{0, 0, 0};
  int dt = 0;

  int spatial_order() const { return dx[0] + dx[1] + dx[2]; }
  int total_order() const { return spatial_order() + dt; }
  bool is_value() const { return total_order() == 0; }

  bool operator==(const DerivIndex&) const = default;

  static DerivIndex value() { return {}; }
  static DerivIndex d_t() { return {{0, 0, 0}, 1}; }
  static DerivIndex d_tt() { return {{0, 0, 0}, 2}; }
  static DerivIndex d_x(int axis, int order = 1) {
    DerivIndex ix;
    ix.dx.at(axis) = order;
    return ix;
  }
  static DerivIndex d_xt(int axis) {
    DerivIndex ix;
    ix.dx.at(axis) = 1;
    ix.dt = 1;
    return ix;
  }

  std::string to_string() const {
    std::string s = "d(";
    for (int k = 0; k < 3; ++k) s += std::to_string(dx[k]) + (k < 2 ? "," : ";");
    return s + std::to_string(dt) + ")";
  }
};

inline void validate_deriv_index(const DerivIndex& ix, int dim) {
  for (int k = 0; k < 3; ++k) {
    if (ix.dx[k] < 0 || ix.dx[k] > 2)
      throw std::invalid_argument("derivative order above 2 per axis: " + ix.to_string());
    if (k >= dim && ix.dx[k] != 0)
      throw std::invalid_argument("derivative along missing axis: " + ix.to_string());
  }
  if (ix.dt < 0 || ix.dt > 2)
    throw std::invalid_argument("time derivative order above 2: " + ix.to_string());
  if (ix.spatial_order() > 2)
    throw std::invalid_argument("total spatial order above 2: " + ix.to_string());
}

// Raised for invalid run configurations; carries the offending field name so
// the CLI can report it machine-readably.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error(msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Raised when a linear solve cannot proceed (non-finite data, singular
// normal matrix, diverging time march).
class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace strfm
