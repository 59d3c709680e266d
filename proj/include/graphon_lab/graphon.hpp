#pragma once

// Graphon descriptors: symmetric kernels W: [0,1]^2 -> [0,1] drawn from a
// fixed set of families, optionally restricted to a sub-window A x A and
// rescaled back onto the unit square.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "graphon_lab/errors.hpp"

namespace graphon_lab {

// Closed sub-interval [lo, hi] of [0,1] with positive length.
class Interval {
 public:
  Interval() = default;
  Interval(double lo, double hi);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }

  // Maps u in [0,1] affinely onto the interval.
  double map(double u) const { return lo_ + u * (hi_ - lo_); }

  // Window obtained by first restricting to *this and then to `inner`
  // (expressed in this window's rescaled coordinates).
  Interval compose(const Interval& inner) const;

  bool operator==(const Interval&) const = default;

 private:
  double lo_ = 0.0;
  double hi_ = 1.0;
};

// Tabulated one-dimensional profile f: [0,1] -> [0,1], evaluated by
// piecewise-linear interpolation between knots. First knot at 0, last at 1.
class Profile {
 public:
  Profile(std::vector<double> xs, std::vector<double> values);

  // Two-column text file, one `x f(x)` row per line; `#` starts a comment.
  static Profile load(const std::string& path);

  double operator()(double x) const;

  std::span<const double> knots() const { return xs_; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> xs_;
  std::vector<double> values_;
};

namespace family {

struct Constant {
  double p;
};
// W_r(x,y) = (1-x)^r (1-y)^r
struct SqrtFamily {
  double r;
};
// U_r(x,y) = (1-x^r)(1-y^r)
struct PolyFamily {
  double r;
};
// U_{alpha,C}(x,y) = (1-C x^alpha)(1-C y^alpha) on [0, C^{-1/alpha}]^2, else 0
struct HolderFamily {
  double alpha;
  double c;
};
// W(x,y) = 1 - |x-y|
struct Line {};
// W(x,y) = (1-f(x))(1-f(y)), f(x) = exp(-1/x^2), f(0) = 0
struct FlatExp {};
// W(x,y) = (1 - x sin^2(1/x))(1 - y sin^2(1/y)), value 1 at coordinate 0
struct Oscillating {};
// W(x,y) = f(x) f(y) for a tabulated profile f
struct Rank1 {
  std::shared_ptr<const Profile> profile;
  std::string source;  // file path used in the serialized form
};

}  // namespace family

using Family =
    std::variant<family::Constant, family::SqrtFamily, family::PolyFamily,
                 family::HolderFamily, family::Line, family::FlatExp,
                 family::Oscillating, family::Rank1>;

// Immutable value describing a kernel. Parameter domains are validated by the
// factory functions, so evaluation never fails.
class GraphonSpec {
 public:
  static GraphonSpec constant(double p);
  static GraphonSpec sqrt_family(double r);
  static GraphonSpec poly_family(double r);
  static GraphonSpec holder_family(double alpha, double c);
  static GraphonSpec line();
  static GraphonSpec flat_exp();
  static GraphonSpec oscillating();
  static GraphonSpec rank1(Profile profile, std::string source = "inline");

  // Single-line text form, e.g. `poly:r=2`, `holder:alpha=0.5,C=2@[0,0.5]`.
  static GraphonSpec parse(std::string_view text);
  std::string to_string() const;

  const Family& family() const { return family_; }
  const std::optional<Interval>& restriction() const { return window_; }

  // W(x,y) with x,y in [0,1], composed through the restriction window.
  double evaluate(double x, double y) const;

  // True for product-form kernels f(x) f(y) (Constant included, f = sqrt(p)).
  bool is_rank1() const;

  // f(u) for rank-1 families, with u in the (restricted) unit coordinates.
  // For non-constant rank-1 families evaluate(x,y) == profile(x) * profile(y)
  // bit for bit. Throws UnsupportedSpecError for other families.
  double profile(double u) const;

  // Restriction composed into a single window.
  GraphonSpec restricted(const Interval& window) const;

 private:
  explicit GraphonSpec(Family f) : family_(std::move(f)) {}

  double base_profile(double x) const;
  double base_evaluate(double x, double y) const;

  Family family_;
  std::optional<Interval> window_;
};

inline double evaluate(const GraphonSpec& spec, double x, double y) {
  return spec.evaluate(x, y);
}

GraphonSpec restrict(const GraphonSpec& spec, const Interval& window);

// Dense grid scan certifying lower(x,y) <= upper(x,y) at every grid point
// (grid_points per axis, endpoints included).
bool dominated_on_grid(const GraphonSpec& lower, const GraphonSpec& upper,
                       int grid_points = 1001);

}  // namespace graphon_lab
