#include "blochlab/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blochlab/numfmt.hpp"
#include "blochlab/quadrature.hpp"

namespace blochlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit_interval_param(const char* name, double v, double lo,
                                 double hi) {
  if (!(v > lo) || !(v < hi)) {
    throw domain_error(std::string(name) + " must lie in (" +
                       format_double(lo) + "," + format_double(hi) + "); got " +
                       format_double(v));
  }
}

}  // namespace

Gauge::Gauge(GaugeFamily family, double param, double eps)
    : family_(family), param_(param), eps_(eps) {
  require_unit_interval_param("eps", eps, 0.0, 1.0);
}

Gauge Gauge::constant(double eps) { return Gauge(GaugeFamily::Const, 0.0, eps); }

Gauge Gauge::power(double alpha) { return power(alpha, 0.5 * (1.0 + alpha)); }

Gauge Gauge::power(double alpha, double eps) {
  require_unit_interval_param("pow exponent", alpha, 0.0, 1.0);
  return Gauge(GaugeFamily::Pow, alpha, eps);
}

Gauge Gauge::logarithmic(double beta, double eps) {
  if (!(beta <= 0.0)) {
    throw domain_error("log exponent must be <= 0 (increasing gauge); got " +
                       format_double(beta));
  }
  return Gauge(GaugeFamily::Log, beta, eps);
}

double Gauge::operator()(double t) const {
  if (!(t > 0.0) || t > 1.0) {
    throw domain_error("gauge argument outside (0,1]: t=" + format_double(t));
  }
  switch (family_) {
    case GaugeFamily::Const:
      return 1.0;
    case GaugeFamily::Pow:
      return std::pow(t, param_);
    case GaugeFamily::Log:
      return std::pow(1.0 - std::log(t), param_);
  }
  return 1.0;
}

double eval_gauge(const Gauge& g, double t) { return g(t); }

namespace {

// Positional number scan for DSL parsing.
double parse_number(std::string_view s, std::size_t& pos) {
  const std::string rest(s.substr(pos));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(rest, &used);
  } catch (const std::exception&) {
    throw parse_error("expected a number", pos);
  }
  pos += used;
  return v;
}

}  // namespace

Gauge Gauge::parse(std::string_view dsl) {
  std::size_t pos = 0;
  GaugeFamily family;
  double param = 0.0;
  bool has_param = false;

  if (dsl.rfind("const", 0) == 0) {
    family = GaugeFamily::Const;
    pos = 5;
  } else if (dsl.rfind("pow:", 0) == 0) {
    family = GaugeFamily::Pow;
    pos = 4;
    param = parse_number(dsl, pos);
    has_param = true;
  } else if (dsl.rfind("log:", 0) == 0) {
    family = GaugeFamily::Log;
    pos = 4;
    param = parse_number(dsl, pos);
    has_param = true;
  } else {
    throw parse_error("unknown gauge family (expected const, pow:A or log:B)",
                      0);
  }

  bool has_eps = false;
  double eps = 0.0;
  std::size_t eps_pos = 0;
  if (pos < dsl.size()) {
    if (dsl.compare(pos, 5, ";eps=") != 0) {
      throw parse_error("expected ';eps=' suffix or end of string", pos);
    }
    pos += 5;
    eps_pos = pos;
    eps = parse_number(dsl, pos);
    has_eps = true;
    if (pos != dsl.size()) throw parse_error("trailing characters", pos);
  }

  const std::size_t value_pos = has_param ? 4 : 0;
  try {
    switch (family) {
      case GaugeFamily::Const:
        return has_eps ? constant(eps) : constant();
      case GaugeFamily::Pow:
        return has_eps ? power(param, eps) : power(param);
      case GaugeFamily::Log:
        return has_eps ? logarithmic(param, eps) : logarithmic(param);
    }
  } catch (const domain_error& e) {
    const std::string what = e.what();
    throw parse_error(what, what.rfind("eps", 0) == 0 ? eps_pos : value_pos);
  }
  throw parse_error("unreachable", 0);
}

std::string Gauge::dsl() const {
  std::string out;
  switch (family_) {
    case GaugeFamily::Const:
      out = "const";
      break;
    case GaugeFamily::Pow:
      out = "pow:" + format_double(param_);
      break;
    case GaugeFamily::Log:
      out = "log:" + format_double(param_);
      break;
  }
  out += ";eps=" + format_double(eps_);
  return out;
}

namespace {

// Closed form for I in the variable s = ln(1/x) >= 0.
double closed_I_from_log(const Gauge& g, double s) {
  switch (g.family()) {
    case GaugeFamily::Const:
      return s;
    case GaugeFamily::Pow: {
      const double two_alpha = 2.0 * g.alpha();
      // (1 - e^(-2a s)) / (2a), stable near s = 0
      return -std::expm1(-two_alpha * s) / two_alpha;
    }
    case GaugeFamily::Log: {
      const double big_l = 1.0 + s;  // 1 + ln(1/x) >= 1
      const double delta = 2.0 * g.beta() + 1.0;
      if (delta == 0.0) return std::log(big_l);
      // (L^delta - 1) / delta
      return std::expm1(delta * std::log(big_l)) / delta;
    }
  }
  return 0.0;
}

// Closed form for I(x) = int_x^1 omega^2(t)/t dt on (0,1].
double closed_I(const Gauge& g, double x) {
  return closed_I_from_log(g, -std::log(x));
}

void require_integral_domain(double x) {
  if (!(x > 0.0) || x > 1.0) {
    throw domain_error("quadratic integral argument outside (0,1]: x=" +
                       format_double(x));
  }
}

}  // namespace

QuadraticIntegralValue quadratic_integral(const Gauge& g, double x) {
  require_integral_domain(x);
  QuadraticIntegralValue out;
  out.x = x;
  out.value_I = closed_I(g, x);
  out.value_Phi = 1.0 + out.value_I;
  out.method = IntegralMethod::ClosedForm;
  out.abs_error_bound =
      4.0 * std::numeric_limits<double>::epsilon() * (1.0 + out.value_I);
  return out;
}

QuadraticIntegralValue quadratic_integral_quadrature(const Gauge& g, double x,
                                                     double abs_tol) {
  require_integral_domain(x);
  const auto integrand = [&g](double t) {
    const double w = g(t);
    return w * w / t;
  };

  // Breakpoints x < ... < 2^-m < ... < 1 at the dyadic points inside (x, 1).
  std::vector<double> pts{x};
  for (int m = 60; m >= 1; --m) {
    const double d = std::ldexp(1.0, -m);
    if (d > x && d < 1.0) pts.push_back(d);
  }
  pts.push_back(1.0);

  const double per_panel_tol = abs_tol / static_cast<double>(pts.size());
  QuadraticIntegralValue out;
  out.x = x;
  out.method = IntegralMethod::Quadrature;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    try {
      const auto r = integrate_adaptive(integrand, pts[i], pts[i + 1],
                                        per_panel_tol);
      total += r.value;
      err += r.error_bound;
    } catch (const numeric_error& e) {
      throw numeric_error("quadratic integral quadrature stalled on [" +
                              format_double(pts[i]) + "," +
                              format_double(pts[i + 1]) + "]",
                          total + e.partial);
    }
  }
  out.value_I = total;
  out.value_Phi = 1.0 + total;
  out.abs_error_bound = err;
  return out;
}

double phi(const Gauge& g, double x) {
  require_integral_domain(x);
  return 1.0 + closed_I(g, x);
}

double phi_from_log(const Gauge& g, double s) {
  if (!(s >= 0.0)) {
    throw domain_error("phi_from_log requires s >= 0; got s=" +
                       format_double(s));
  }
  return 1.0 + closed_I_from_log(g, s);
}

PsiValue psi(const Gauge& g, double r, int K) {
  if (!(r >= 0.0) || r >= 1.0) {
    throw domain_error("psi argument outside [0,1): r=" + format_double(r));
  }
  constexpr double kAutoTol = 1e-12;
  constexpr int kCap = 60;
  const bool automatic = K < 0;
  const int k_max = automatic ? kCap : K;
  const double w1 = g(1.0);

  double sum = 0.0;
  double rpow = 1.0;  // r^(2^k - 1)
  double tail = 0.0;
  int k = 0;
  for (;; ++k) {
    const double w = g(std::ldexp(1.0, -k));
    sum += w * w * rpow;
    const double rpow_next = rpow * rpow * r;  // r^(2^(k+1) - 1)
    tail = w1 * w1 * rpow_next / (1.0 - r);
    if (k == k_max) break;
    if (automatic && tail <= kAutoTol) break;
    rpow = rpow_next;
  }
  return {sum, tail, k};
}

DichotomyResult classify_dichotomy(const Gauge& g) {
  DichotomyResult out;
  switch (g.family()) {
    case GaugeFamily::Const:
      out.kind = Dichotomy::Divergent;
      out.limit = kInf;
      out.reason = "I(x) = ln(1/x) -> inf as x -> 0+";
      break;
    case GaugeFamily::Pow:
      out.kind = Dichotomy::Convergent;
      out.limit = 1.0 / (2.0 * g.alpha());
      out.reason = "I(0+) = 1/(2*alpha)";
      break;
    case GaugeFamily::Log: {
      const double delta = 2.0 * g.beta() + 1.0;
      if (delta >= 0.0) {
        out.kind = Dichotomy::Divergent;
        out.limit = kInf;
        out.reason = delta == 0.0
                         ? "I(x) = ln(1+ln(1/x)) -> inf as x -> 0+"
                         : "I(x) ~ (1+ln(1/x))^(2*beta+1) -> inf as x -> 0+";
      } else {
        out.kind = Dichotomy::Convergent;
        out.limit = -1.0 / delta;
        out.reason = "I(0+) = -1/(2*beta+1)";
      }
      break;
    }
  }
  return out;
}

std::vector<double> dichotomy_evidence(const Gauge& g, int m_max) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(0, m_max)));
  for (int m = 1; m <= m_max; ++m) {
    out.push_back(quadratic_integral(g, std::ldexp(1.0, -m)).value_I);
  }
  return out;
}

namespace {

// Monotone scan with a small relative slack against float noise.
RegularityCondition scan_monotone(const std::string& name,
                                  const std::vector<double>& xs,
                                  const std::vector<double>& vs,
                                  bool nondecreasing) {
  constexpr double kSlack = 1e-12;
  RegularityCondition cond;
  cond.name = name;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = vs[i], b = vs[i + 1];
    const bool ok = nondecreasing ? b >= a * (1.0 - kSlack) - kSlack
                                  : b <= a * (1.0 + kSlack) + kSlack;
    if (!ok) {
      cond.pass = false;
      cond.x_lo = xs[i];
      cond.x_hi = xs[i + 1];
      cond.value_lo = a;
      cond.value_hi = b;
      break;
    }
  }
  return cond;
}

}  // namespace

RegularityReport check_regularity(const Gauge& g, std::vector<double> grid) {
  for (double t : grid) {
    if (!(t > 0.0) || t > 1.0) {
      throw domain_error("regularity grid point outside (0,1]: t=" +
                         format_double(t));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t n = grid.size();
  std::vector<double> w(n), w_over_teps(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = g(grid[i]);
    w_over_teps[i] = w[i] / std::pow(grid[i], g.eps());
  }

  // tau = 1/t, ascending in tau (descending in t)
  std::vector<double> tau(n), w_tau(n), tau_eps_w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    tau[i] = 1.0 / grid[j];
    w_tau[i] = w[j];
    tau_eps_w[i] = std::pow(tau[i], g.eps()) * w[j];
  }

  RegularityReport rep;
  rep.conditions.push_back(
      scan_monotone("omega nondecreasing in t", grid, w, true));
  rep.conditions.push_back(scan_monotone("omega(t)/t^eps nonincreasing in t",
                                         grid, w_over_teps, false));
  rep.conditions.push_back(
      scan_monotone("omega(1/tau) nonincreasing in tau", tau, w_tau, false));
  rep.conditions.push_back(scan_monotone(
      "tau^eps*omega(1/tau) nondecreasing in tau", tau, tau_eps_w, true));
  for (const auto& c : rep.conditions) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

std::vector<double> dyadic_grid(int m_lo, int m_hi) {
  std::vector<double> out;
  for (int m = m_hi; m >= m_lo; --m) out.push_back(std::ldexp(1.0, -m));
  return out;
}

}  // namespace blochlab
