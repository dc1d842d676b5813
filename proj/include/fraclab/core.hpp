#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace fraclab {

/// Points and vectors of the ambient plane.
using Point = Eigen::Vector2d;

/// Ambient dimension d. All formulas carry it symbolically.
inline constexpr int kAmbientDim = 2;

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo = Point::Zero();
  Point hi = Point::Zero();

  Point extent() const { return hi - lo; }
  Point center() const { return 0.5 * (lo + hi); }
  double area() const { return extent().prod(); }
  bool contains(const Point& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }
  Box inflated(double margin) const {
    return {(lo.array() - margin).matrix(), (hi.array() + margin).matrix()};
  }
};

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an estimator or construction was violated.
class EstimatorError : public Error {
 public:
  using Error::Error;
};

/// A run configuration could not be parsed or is invalid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Method { grid, montecarlo };

inline const char* to_string(Method m) { return m == Method::grid ? "grid" : "montecarlo"; }

/// Sampling controls shared by every estimator. Results depend only on
/// `seed` and `samples` (and grid resolution), never on `workers`.
struct SampleConfig {
  std::uint64_t seed = 1;
  std::uint64_t samples = 1u << 20;
  /// Explicit grid cell size; 0 selects `cells_per_r` cells per tube radius.
  double grid_h = 0.0;
  double cells_per_r = 8.0;
  /// Informational only; the worker pool size comes from FRACLAB_THREADS.
  int workers = 0;
};

inline double square(double v) { return v * v; }

}  // namespace fraclab
