#include "graphon_lab/graphon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "graphon_lab/format.hpp"

namespace graphon_lab {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo >= 0.0 && hi <= 1.0))
    throw DomainError("interval [" + format_double(lo) + "," +
                      format_double(hi) + "] is not inside [0,1]");
  if (!(lo < hi))
    throw DomainError("degenerate interval [" + format_double(lo) + "," +
                      format_double(hi) + "]");
}

Interval Interval::compose(const Interval& inner) const {
  return Interval(map(inner.lo()), map(inner.hi()));
}

Profile::Profile(std::vector<double> xs, std::vector<double> values)
    : xs_(std::move(xs)), values_(std::move(values)) {
  if (xs_.size() != values_.size() || xs_.size() < 2)
    throw ParameterError("profile needs at least two (x, f(x)) knots");
  if (xs_.front() != 0.0 || xs_.back() != 1.0)
    throw ParameterError("profile knots must start at x=0 and end at x=1");
  for (std::size_t i = 1; i < xs_.size(); ++i)
    if (!(xs_[i] > xs_[i - 1]))
      throw ParameterError("profile knots must be strictly increasing");
  for (double v : values_)
    if (!(v >= 0.0 && v <= 1.0))
      throw ParameterError("profile values must lie in [0,1], got " +
                           format_double(v));
}

Profile Profile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file '" + path + "'");
  std::vector<double> xs, vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream row(line);
    double x, v;
    if (!(row >> x)) continue;
    if (!(row >> v))
      throw ParseError(path + ":" + std::to_string(lineno) +
                       ": expected two columns `x f(x)`");
    xs.push_back(x);
    vs.push_back(v);
  }
  return Profile(std::move(xs), std::move(vs));
}

double Profile::operator()(double x) const {
  if (x <= 0.0) return values_.front();
  if (x >= 1.0) return values_.back();
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - xs_.begin());
  double x0 = xs_[j - 1], x1 = xs_[j];
  double t = (x - x0) / (x1 - x0);
  return values_[j - 1] + t * (values_[j] - values_[j - 1]);
}

GraphonSpec GraphonSpec::constant(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ParameterError("const: p must lie in [0,1], got " + format_double(p));
  return GraphonSpec(family::Constant{p});
}

GraphonSpec GraphonSpec::sqrt_family(double r) {
  if (!(r > 0.0 && std::isfinite(r)))
    throw ParameterError("sqrt: r must be positive, got " + format_double(r));
  return GraphonSpec(family::SqrtFamily{r});
}

GraphonSpec GraphonSpec::poly_family(double r) {
  if (!(r > 0.0 && std::isfinite(r)))
    throw ParameterError("poly: r must be positive, got " + format_double(r));
  return GraphonSpec(family::PolyFamily{r});
}

GraphonSpec GraphonSpec::holder_family(double alpha, double c) {
  if (!(alpha > 0.0 && std::isfinite(alpha)))
    throw ParameterError("holder: alpha must be positive, got " +
                         format_double(alpha));
  if (!(c >= 1.0 && std::isfinite(c)))
    throw ParameterError("holder: C must be at least 1, got " +
                         format_double(c));
  return GraphonSpec(family::HolderFamily{alpha, c});
}

GraphonSpec GraphonSpec::line() { return GraphonSpec(family::Line{}); }
GraphonSpec GraphonSpec::flat_exp() { return GraphonSpec(family::FlatExp{}); }
GraphonSpec GraphonSpec::oscillating() {
  return GraphonSpec(family::Oscillating{});
}

GraphonSpec GraphonSpec::rank1(Profile profile, std::string source) {
  return GraphonSpec(family::Rank1{
      std::make_shared<const Profile>(std::move(profile)), std::move(source)});
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double flat_profile(double x) {
  if (x == 0.0) return 1.0;
  return 1.0 - std::exp(-1.0 / (x * x));
}

double oscillating_profile(double x) {
  if (x == 0.0) return 1.0;
  double s = std::sin(1.0 / x);
  return 1.0 - x * s * s;
}

double holder_profile(const family::HolderFamily& h, double x) {
  if (x > std::pow(h.c, -1.0 / h.alpha)) return 0.0;
  return std::max(0.0, 1.0 - h.c * std::pow(x, h.alpha));
}

}  // namespace

double GraphonSpec::base_profile(double x) const {
  return std::visit(
      overloaded{
          [](const family::Constant& c) { return std::sqrt(c.p); },
          [x](const family::SqrtFamily& s) { return std::pow(1.0 - x, s.r); },
          [x](const family::PolyFamily& p) {
            return 1.0 - std::pow(x, p.r);
          },
          [x](const family::HolderFamily& h) { return holder_profile(h, x); },
          [](const family::Line&) -> double {
            throw UnsupportedSpecError("line graphon is not rank-1");
          },
          [x](const family::FlatExp&) { return flat_profile(x); },
          [x](const family::Oscillating&) { return oscillating_profile(x); },
          [x](const family::Rank1& r) { return (*r.profile)(x); },
      },
      family_);
}

double GraphonSpec::base_evaluate(double x, double y) const {
  return std::visit(overloaded{
                        [](const family::Constant& c) { return c.p; },
                        [x, y](const family::Line&) {
                          return 1.0 - std::abs(x - y);
                        },
                        [this, x, y](const auto&) {
                          return base_profile(x) * base_profile(y);
                        },
                    },
                    family_);
}

double GraphonSpec::evaluate(double x, double y) const {
  if (window_) return base_evaluate(window_->map(x), window_->map(y));
  return base_evaluate(x, y);
}

bool GraphonSpec::is_rank1() const {
  return !std::holds_alternative<family::Line>(family_);
}

double GraphonSpec::profile(double u) const {
  return base_profile(window_ ? window_->map(u) : u);
}

GraphonSpec GraphonSpec::restricted(const Interval& window) const {
  GraphonSpec out = *this;
  out.window_ = window_ ? window_->compose(window) : window;
  return out;
}

GraphonSpec restrict(const GraphonSpec& spec, const Interval& window) {
  return spec.restricted(window);
}

bool dominated_on_grid(const GraphonSpec& lower, const GraphonSpec& upper,
                       int grid_points) {
  if (grid_points < 2) throw ParameterError("grid needs at least 2 points");
  const double step = 1.0 / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    double x = i * step;
    for (int j = i; j < grid_points; ++j) {
      double y = j * step;
      if (lower.evaluate(x, y) > upper.evaluate(x, y)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Text form

std::string GraphonSpec::to_string() const {
  std::string out = std::visit(
      overloaded{
          [](const family::Constant& c) { return "const:p=" + format_double(c.p); },
          [](const family::SqrtFamily& s) { return "sqrt:r=" + format_double(s.r); },
          [](const family::PolyFamily& p) { return "poly:r=" + format_double(p.r); },
          [](const family::HolderFamily& h) {
            return "holder:alpha=" + format_double(h.alpha) +
                   ",C=" + format_double(h.c);
          },
          [](const family::Line&) { return std::string("line"); },
          [](const family::FlatExp&) { return std::string("flatexp"); },
          [](const family::Oscillating&) { return std::string("osc"); },
          [](const family::Rank1& r) { return "rank1:file=" + r.source; },
      },
      family_);
  if (window_)
    out += "@[" + format_double(window_->lo()) + "," +
           format_double(window_->hi()) + "]";
  return out;
}

namespace {

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError("malformed number '" + std::string(text) + "' for " +
                     std::string(what));
  return v;
}

// Parses `key=value,key=value` into a small ordered list.
std::vector<std::pair<std::string, std::string>> parse_params(
    std::string_view text, std::string_view spec) {
  std::vector<std::pair<std::string, std::string>> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("malformed parameter '" + std::string(item) +
                       "' in graphon spec '" + std::string(spec) + "'");
    out.emplace_back(std::string(item.substr(0, eq)),
                     std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

const std::string& require_param(
    const std::vector<std::pair<std::string, std::string>>& params,
    std::string_view key, std::string_view spec) {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  throw ParseError("graphon spec '" + std::string(spec) +
                   "' is missing parameter '" + std::string(key) + "'");
}

void expect_keys(const std::vector<std::pair<std::string, std::string>>& params,
                 std::initializer_list<std::string_view> allowed,
                 std::string_view spec) {
  for (const auto& [k, v] : params)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ParseError("unknown parameter '" + k + "' in graphon spec '" +
                       std::string(spec) + "'");
}

}  // namespace

GraphonSpec GraphonSpec::parse(std::string_view text) {
  const std::string_view full = text;
  std::optional<Interval> window;
  if (auto at = text.find('@'); at != std::string_view::npos) {
    std::string_view w = text.substr(at + 1);
    text = text.substr(0, at);
    if (w.size() < 5 || w.front() != '[' || w.back() != ']')
      throw ParseError("malformed window in graphon spec '" +
                       std::string(full) + "', expected @[lo,hi]");
    w = w.substr(1, w.size() - 2);
    auto comma = w.find(',');
    if (comma == std::string_view::npos)
      throw ParseError("malformed window in graphon spec '" +
                       std::string(full) + "', expected @[lo,hi]");
    window = Interval(parse_number(w.substr(0, comma), "window lo"),
                      parse_number(w.substr(comma + 1), "window hi"));
  }

  std::string_view name = text;
  std::string_view rest;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    rest = text.substr(colon + 1);
  }
  auto params = parse_params(rest, full);

  auto number = [&](std::string_view key) {
    return parse_number(require_param(params, key, full), key);
  };

  GraphonSpec spec = [&]() {
    if (name == "const") {
      expect_keys(params, {"p"}, full);
      return constant(number("p"));
    }
    if (name == "sqrt") {
      expect_keys(params, {"r"}, full);
      return sqrt_family(number("r"));
    }
    if (name == "poly") {
      expect_keys(params, {"r"}, full);
      return poly_family(number("r"));
    }
    if (name == "holder") {
      expect_keys(params, {"alpha", "C"}, full);
      return holder_family(number("alpha"), number("C"));
    }
    if (name == "rank1") {
      expect_keys(params, {"file"}, full);
      const std::string& path = require_param(params, "file", full);
      return rank1(Profile::load(path), path);
    }
    if (!params.empty())
      throw ParseError("graphon '" + std::string(name) +
                       "' takes no parameters");
    if (name == "line") return line();
    if (name == "flatexp") return flat_exp();
    if (name == "osc") return oscillating();
    throw ParseError("unknown graphon family '" + std::string(name) + "'");
  }();

  if (window) spec = spec.restricted(*window);
  return spec;
}

}  // namespace graphon_lab
