#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "krein/linalg.hpp"

namespace krein {

/// Points within distance r of the real segment [p, q].
struct Capsule {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
};

/// Union of closed balls B(t, sqrt(c0 + c1 t^2)) over t in [-gamma, gamma].
struct BallUnion {
  double gamma = 0.0;
  double c0 = 0.0;
  double c1 = 0.0;
};

struct EmptyRegion {};

/// Compact set symmetric about the real axis, used as the exceptional set K
/// of a local non-negativity statement.
class EnclosureRegion {
 public:
  using Variant = std::variant<EmptyRegion, Capsule, BallUnion>;

  EnclosureRegion() = default;
  static EnclosureRegion empty() { return EnclosureRegion(EmptyRegion{}); }
  static EnclosureRegion capsule(double p, double q, double r);
  static EnclosureRegion ball_union(double gamma, double c0, double c1);

  const Variant& variant() const { return v_; }
  bool is_empty() const { return std::holds_alternative<EmptyRegion>(v_); }
  bool has_interior() const;

  bool contains(Complex z) const;

  /// Negative inside, positive outside. Exact outside; inside, the magnitude
  /// is a lower bound on the depth.
  double signed_distance(Complex z) const;

  /// Horizontal extent [x_min, x_max] and half-height squared h(x)^2 of the
  /// vertical slice through x (negative outside the extent).
  std::pair<double, double> x_extent() const;
  double half_height_squared(double x) const;

  /// Nearest "spine" point: the ball centre t* (or segment point) realising
  /// the membership minimum for z.
  double spine_point(Complex z) const;

  double diameter() const;

  std::string variant_name() const;
  std::string parameter_string() const;

 private:
  explicit EnclosureRegion(Variant v) : v_(v) {}
  Variant v_{EmptyRegion{}};
};

bool contains(const EnclosureRegion& k, Complex z);

/// count points on the boundary, counter-clockwise, starting at the rightmost
/// point; the loop closes back onto the first sample.
std::vector<Complex> boundary_samples(const EnclosureRegion& k, int count);

EnclosureRegion dilate(const EnclosureRegion& k, double factor);

/// CSV with a "# region=<variant> params=<...>" header and re,im columns.
void write_boundary_csv(std::ostream& out, const EnclosureRegion& k, int count);

struct Disc {
  Complex center;
  double radius;
};

struct Rect {
  double x_min, x_max, y_min, y_max;
};

/// Bounded open set U used to split an operator into a bounded part with
/// spectrum in U-bar and a non-negative remainder.
class Neighborhood {
 public:
  using Variant = std::variant<std::vector<Disc>, std::vector<Rect>, EnclosureRegion>;

  static Neighborhood discs(std::vector<Disc> d) { return Neighborhood(std::move(d)); }
  static Neighborhood rects(std::vector<Rect> r) { return Neighborhood(std::move(r)); }
  /// Interior of a region.
  static Neighborhood interior(EnclosureRegion k) { return Neighborhood(std::move(k)); }

  bool is_empty() const;
  bool contains(Complex z) const;  // open set
  double signed_distance(Complex z) const;
  std::string describe() const;

 private:
  explicit Neighborhood(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

}  // namespace krein
