#include "krein/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "krein/errors.hpp"

namespace krein {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double segment_distance(Complex z, double p, double q) {
  const double t = std::clamp(z.real(), p, q);
  return std::abs(z - Complex(t, 0.0));
}

double ball_radius(const BallUnion& b, double t) { return std::sqrt(std::max(0.0, b.c0 + b.c1 * t * t)); }

// Minimiser over [-gamma, gamma] of q(t) = (x - t)^2 + y^2 - c0 - c1 t^2.
double ball_argmin(const BallUnion& b, double x) {
  const auto q = [&](double t) { return (x - t) * (x - t) - b.c0 - b.c1 * t * t; };
  double best = -b.gamma;
  if (q(b.gamma) < q(best)) best = b.gamma;
  const double lead = 1.0 - b.c1;
  if (lead > 0.0) {
    const double t = std::clamp(x / lead, -b.gamma, b.gamma);
    if (q(t) <= q(best)) best = t;
  }
  return best;
}

double ball_min_q(const BallUnion& b, Complex z) {
  const double t = ball_argmin(b, z.real());
  const double dx = z.real() - t;
  return dx * dx + z.imag() * z.imag() - b.c0 - b.c1 * t * t;
}

// Minimum of a function on [lo, hi]: dense grid, then golden-section
// refinement around the best grid point.
template <class F>
std::pair<double, double> minimize_on(F f, double lo, double hi) {
  if (hi <= lo) return {lo, f(lo)};
  constexpr int grid = 2000;
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid; ++k) {
    const double v = f(lo + (hi - lo) * k / grid);
    if (v < best_v) {
      best_v = v;
      best = k;
    }
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / grid;
  double c = lo + (hi - lo) * std::min(grid, best + 1) / grid;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - g * (c - a), x2 = a + g * (c - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && c - a > 1e-15 * (1.0 + std::abs(a) + std::abs(c)); ++it) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = f(x2);
    }
  }
  const double t = f1 < f2 ? x1 : x2;
  const double v = std::min(f1, f2);
  return v < best_v ? std::pair{t, v} : std::pair{lo + (hi - lo) * best / grid, best_v};
}

}  // namespace

EnclosureRegion EnclosureRegion::capsule(double p, double q, double r) {
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(r) || p > q || r < 0.0)
    throw Error(ErrorKind::InvalidInput,
                "capsule needs finite p <= q and r >= 0, got p=" + fmt(p) + " q=" + fmt(q) + " r=" + fmt(r));
  return EnclosureRegion(Capsule{p, q, r});
}

EnclosureRegion EnclosureRegion::ball_union(double gamma, double c0, double c1) {
  if (!std::isfinite(gamma) || !std::isfinite(c0) || !std::isfinite(c1) || gamma < 0.0 || c0 < 0.0 ||
      c1 < 0.0)
    throw Error(ErrorKind::InvalidInput, "ball union needs finite gamma, c0, c1 >= 0");
  return EnclosureRegion(BallUnion{gamma, c0, c1});
}

bool EnclosureRegion::has_interior() const {
  return std::visit(overloaded{[](const EmptyRegion&) { return false; },
                               [](const Capsule& c) { return c.r > 0.0; },
                               [](const BallUnion& b) { return b.c0 > 0.0 || (b.c1 > 0.0 && b.gamma > 0.0); }},
                    v_);
}

bool EnclosureRegion::contains(Complex z) const {
  return std::visit(overloaded{[](const EmptyRegion&) { return false; },
                               [&](const Capsule& c) { return segment_distance(z, c.p, c.q) <= c.r; },
                               [&](const BallUnion& b) { return ball_min_q(b, z) <= 0.0; }},
                    v_);
}

bool contains(const EnclosureRegion& k, Complex z) { return k.contains(z); }

double EnclosureRegion::signed_distance(Complex z) const {
  return std::visit(
      overloaded{[](const EmptyRegion&) { return std::numeric_limits<double>::infinity(); },
                 [&](const Capsule& c) { return segment_distance(z, c.p, c.q) - c.r; },
                 [&](const BallUnion& b) {
                   const auto f = [&](double t) { return std::abs(z - Complex(t, 0.0)) - ball_radius(b, t); };
                   double best = minimize_on(f, -b.gamma, b.gamma).second;
                   best = std::min({best, f(-b.gamma), f(b.gamma), f(std::clamp(z.real(), -b.gamma, b.gamma))});
                   return best;
                 }},
      v_);
}

std::pair<double, double> EnclosureRegion::x_extent() const {
  return std::visit(overloaded{[](const EmptyRegion&) { return std::pair{0.0, 0.0}; },
                               [](const Capsule& c) { return std::pair{c.p - c.r, c.q + c.r}; },
                               [](const BallUnion& b) {
                                 const auto f = [&](double t) { return -(t + ball_radius(b, t)); };
                                 const double right = -minimize_on(f, -b.gamma, b.gamma).second;
                                 return std::pair{-right, right};
                               }},
                    v_);
}

double EnclosureRegion::half_height_squared(double x) const {
  return std::visit(overloaded{[](const EmptyRegion&) { return -1.0; },
                               [&](const Capsule& c) {
                                 const double d = segment_distance(Complex(x, 0.0), c.p, c.q);
                                 return c.r * c.r - d * d;
                               },
                               [&](const BallUnion& b) { return -ball_min_q(b, Complex(x, 0.0)); }},
                    v_);
}

double EnclosureRegion::spine_point(Complex z) const {
  return std::visit(overloaded{[](const EmptyRegion&) { return 0.0; },
                               [&](const Capsule& c) { return std::clamp(z.real(), c.p, c.q); },
                               [&](const BallUnion& b) { return ball_argmin(b, z.real()); }},
                    v_);
}

double EnclosureRegion::diameter() const {
  return std::visit(overloaded{[](const EmptyRegion&) { return 0.0; },
                               [](const Capsule& c) { return std::max(c.q - c.p + 2.0 * c.r, 2.0 * c.r); },
                               [this](const BallUnion& b) {
                                 const auto [lo, hi] = x_extent();
                                 return std::max(hi - lo, 2.0 * ball_radius(b, b.gamma));
                               }},
                    v_);
}

std::string EnclosureRegion::variant_name() const {
  return std::visit(overloaded{[](const EmptyRegion&) { return std::string("empty"); },
                               [](const Capsule&) { return std::string("capsule"); },
                               [](const BallUnion&) { return std::string("ball_union"); }},
                    v_);
}

std::string EnclosureRegion::parameter_string() const {
  return std::visit(
      overloaded{[](const EmptyRegion&) { return std::string(); },
                 [](const Capsule& c) { return "p=" + fmt(c.p) + ",q=" + fmt(c.q) + ",r=" + fmt(c.r); },
                 [](const BallUnion& b) {
                   return "gamma=" + fmt(b.gamma) + ",c0=" + fmt(b.c0) + ",c1=" + fmt(b.c1);
                 }},
      v_);
}

std::vector<Complex> boundary_samples(const EnclosureRegion& k, int count) {
  if (count < 8) throw Error(ErrorKind::InvalidInput, "boundary sampling needs at least 8 points");
  if (k.is_empty()) throw Error(ErrorKind::InvalidInput, "the empty region has no boundary");
  const auto [lo, hi] = k.x_extent();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double s = 2.0 * std::numbers::pi * i / count;
    const double x = std::clamp(mid + half * std::cos(s), lo, hi);
    const double h = std::sqrt(std::max(0.0, k.half_height_squared(x)));
    Complex z(x, std::sin(s) >= 0.0 ? h : -h);
    const Complex spine(k.spine_point(z), 0.0);
    for (int step = 0; step < 64 && !k.contains(z); ++step)
      z = spine + (z - spine) * (1.0 - std::ldexp(1.0, step - 52));
    out.push_back(z);
  }
  return out;
}

EnclosureRegion dilate(const EnclosureRegion& k, double factor) {
  if (!(factor >= 1.0)) throw Error(ErrorKind::InvalidInput, "dilation factor must be >= 1");
  return std::visit(
      overloaded{[](const EmptyRegion&) { return EnclosureRegion::empty(); },
                 [&](const Capsule& c) { return EnclosureRegion::capsule(c.p, c.q, c.r * factor); },
                 [&](const BallUnion& b) {
                   return EnclosureRegion::ball_union(b.gamma * factor, b.c0 * factor * factor, b.c1);
                 }},
      k.variant());
}

void write_boundary_csv(std::ostream& out, const EnclosureRegion& k, int count) {
  out << "# region=" << k.variant_name() << " params=" << k.parameter_string() << "\n";
  out << "re,im\n";
  if (k.is_empty()) return;
  for (const Complex& z : boundary_samples(k, count)) out << fmt(z.real()) << "," << fmt(z.imag()) << "\n";
}

bool Neighborhood::is_empty() const {
  return std::visit(
      overloaded{[](const std::vector<Disc>& d) {
                   return std::none_of(d.begin(), d.end(), [](const Disc& x) { return x.radius > 0.0; });
                 },
                 [](const std::vector<Rect>& r) {
                   return std::none_of(r.begin(), r.end(), [](const Rect& x) {
                     return x.x_max > x.x_min && x.y_max > x.y_min;
                   });
                 },
                 [](const EnclosureRegion& k) { return !k.has_interior(); }},
      v_);
}

bool Neighborhood::contains(Complex z) const { return signed_distance(z) < 0.0; }

double Neighborhood::signed_distance(Complex z) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      overloaded{[&](const std::vector<Disc>& ds) {
                   double best = inf;
                   for (const Disc& d : ds) best = std::min(best, std::abs(z - d.center) - d.radius);
                   return best;
                 },
                 [&](const std::vector<Rect>& rs) {
                   double best = inf;
                   for (const Rect& r : rs) {
                     const double dx = std::max(r.x_min - z.real(), z.real() - r.x_max);
                     const double dy = std::max(r.y_min - z.imag(), z.imag() - r.y_max);
                     const double outside = std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
                     best = std::min(best, outside > 0.0 ? outside : std::max(dx, dy));
                   }
                   return best;
                 },
                 [&](const EnclosureRegion& k) { return k.has_interior() ? k.signed_distance(z) : inf; }},
      v_);
}

std::string Neighborhood::describe() const {
  std::ostringstream s;
  std::visit(overloaded{[&](const std::vector<Disc>& ds) {
                          s << "discs";
                          for (const Disc& d : ds)
                            s << " (" << fmt(d.center.real()) << "," << fmt(d.center.imag()) << ";r=" << fmt(d.radius)
                              << ")";
                        },
                        [&](const std::vector<Rect>& rs) {
                          s << "rects";
                          for (const Rect& r : rs)
                            s << " [" << fmt(r.x_min) << "," << fmt(r.x_max) << "]x[" << fmt(r.y_min) << ","
                              << fmt(r.y_max) << "]";
                        },
                        [&](const EnclosureRegion& k) {
                          s << "interior " << k.variant_name() << " " << k.parameter_string();
                        }},
             v_);
  return s.str();
}

}  // namespace krein
