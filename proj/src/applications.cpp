#include "blochlab/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blochlab/numfmt.hpp"
#include "blochlab/quadrature.hpp"

namespace blochlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = 0.6931471805599453;
// Singular-direction guard: samples with 1-|phi| below this are excluded.
constexpr double kBoundaryGuard = 1e-14;
// Numeric blow-up rule for partial integrals on dyadic refinement.
constexpr double kBlowupLevel = 1e12;
constexpr double kBlowupGrowth = 1.5;

double parse_number_at(std::string_view s, std::size_t& pos) {
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

// Complex literal: "0.5", "0.5i", "0.1+0.2i", "0.1-0.2i".
std::complex<double> parse_complex_at(std::string_view s, std::size_t& pos) {
  double first = parse_number_at(s, pos);
  if (pos < s.size() && s[pos] == 'i') {
    ++pos;
    return {0.0, first};
  }
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    const std::size_t sign_pos = pos;
    double second = parse_number_at(s, pos);
    if (pos >= s.size() || s[pos] != 'i') {
      throw parse_error("expected trailing 'i' on the imaginary part",
                        sign_pos);
    }
    ++pos;
    return {first, second};
  }
  return {first, 0.0};
}

std::string format_complex(std::complex<double> v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) return format_double(v.imag()) + "i";
  const std::string im = format_double(v.imag());
  return format_double(v.real()) + (im[0] == '-' ? "" : "+") + im + "i";
}

void require_disk_point(std::complex<double> z) {
  if (!(std::abs(z) < 1.0)) {
    throw domain_error("evaluation point outside the open disk: |z|=" +
                       format_double(std::abs(z)));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// RadialMeasure

RadialMeasure RadialMeasure::parse(std::string_view dsl) {
  const auto parse_component = [](std::string_view s,
                                  std::size_t base) -> Component {
    std::size_t pos = 0;
    if (s.rfind("power:", 0) == 0) {
      pos = 6;
      const double beta = parse_number_at(s, pos);
      if (pos != s.size()) throw parse_error("trailing characters", base + pos);
      return Power{beta};
    }
    if (s.rfind("atom:", 0) == 0) {
      pos = 5;
      const double r0 = parse_number_at(s, pos);
      if (pos >= s.size() || s[pos] != ':') {
        throw parse_error("expected ':' before the atom mass", base + pos);
      }
      ++pos;
      const double mass = parse_number_at(s, pos);
      if (pos != s.size()) throw parse_error("trailing characters", base + pos);
      if (!(r0 >= 0.0) || r0 >= 1.0) {
        throw parse_error("atom location must lie in [0,1)", base + 5);
      }
      if (!(mass > 0.0)) {
        throw parse_error("atom mass must be positive", base + pos);
      }
      return Atom{r0, mass};
    }
    throw parse_error("unknown measure component (expected power: or atom:)",
                      base);
  };

  RadialMeasure out;
  if (dsl.rfind("mix:[", 0) == 0) {
    if (dsl.empty() || dsl.back() != ']') {
      throw parse_error("expected closing ']'", dsl.size());
    }
    std::string_view body = dsl.substr(5, dsl.size() - 6);
    std::size_t base = 5;
    while (!body.empty()) {
      const std::size_t comma = body.find(',');
      const std::string_view item =
          comma == std::string_view::npos ? body : body.substr(0, comma);
      if (item.empty()) throw parse_error("empty mixture component", base);
      out.components.push_back(parse_component(item, base));
      if (comma == std::string_view::npos) break;
      body.remove_prefix(comma + 1);
      base += comma + 1;
    }
    if (out.components.empty()) {
      throw parse_error("mixture must contain at least one component", 5);
    }
    return out;
  }
  out.components.push_back(parse_component(dsl, 0));
  return out;
}

std::string RadialMeasure::dsl() const {
  const auto component_dsl = [](const Component& c) {
    if (const auto* p = std::get_if<Power>(&c)) {
      return "power:" + format_double(p->beta);
    }
    const auto& a = std::get<Atom>(c);
    return "atom:" + format_double(a.r0) + ":" + format_double(a.mass);
  };
  if (components.size() == 1) return component_dsl(components[0]);
  std::string out = "mix:[";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += ',';
    out += component_dsl(components[i]);
  }
  out += ']';
  return out;
}

// ---------------------------------------------------------------------------
// Carleson classification

namespace {

// int_0^1 Phi^(q/2)(u) u^beta du in the variable s = ln(1/u):
// int_0^inf Phi^(q/2)(e^-s) e^(-(beta+1)s) ds. Requires beta > -1.
// Also fills per-dyadic-depth panel contributions panel[m] for
// s in [m ln2, (m+1) ln2], m = 0..depth-1.
double power_integral(const Gauge& g, double q, double beta, double& err,
                      std::vector<double>& panels, int depth) {
  const double c = beta + 1.0;
  const double w1 = g(1.0);
  const double halfq = 0.5 * q;
  const auto integrand = [&](double s) {
    return std::pow(phi_from_log(g, s), halfq) * std::exp(-c * s);
  };

  // Cutoff S with a certified exponential tail: beyond S the integrand is
  // dominated by (1 + w1^2 s)^(q/2) e^(-cs), whose integral from S is at
  // most twice the endpoint value over c once the logarithmic derivative
  // falls under c/2.
  double S = std::max(8.0, 30.0 / c);
  const auto dominating = [&](double s) {
    return std::pow(1.0 + w1 * w1 * s, halfq) * std::exp(-c * s);
  };
  double tail = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    const bool decay_ok =
        halfq * w1 * w1 / (1.0 + w1 * w1 * S) <= 0.5 * c;
    tail = 2.0 * dominating(S) / c;
    if (decay_ok && tail <= 1e-11) break;
    S *= 1.5;
  }

  panels.assign(static_cast<std::size_t>(depth), 0.0);
  double total = 0.0;
  err = tail;
  double covered = 0.0;
  for (int m = 0; m < depth; ++m) {
    const double a = m * kLn2;
    const double b = std::min((m + 1) * kLn2, S);
    if (a >= S) break;
    const auto res = integrate_adaptive(integrand, a, b, 1e-12);
    panels[static_cast<std::size_t>(m)] = res.value;
    total += res.value;
    err += res.error_bound;
    covered = b;
  }
  if (covered < S) {
    const auto res = integrate_adaptive(integrand, covered, S, 1e-11, 20000);
    total += res.value;
    err += res.error_bound;
  }
  return total;
}

// Divergent case (beta <= -1): per-depth panels only, stopped at blow-up.
// The panel integrand grows like e^(-(beta+1)s), so the tolerance must
// scale with the panel magnitude.
std::vector<double> power_panels_divergent(const Gauge& g, double q,
                                           double beta, int depth) {
  const double c = beta + 1.0;
  const double halfq = 0.5 * q;
  const auto integrand = [&](double s) {
    return std::pow(phi_from_log(g, s), halfq) * std::exp(-c * s);
  };
  std::vector<double> panels;
  double running = 0.0;
  for (int m = 0; m < depth; ++m) {
    double probe_err = 0.0;
    const double probe =
        gauss_kronrod_15(integrand, m * kLn2, (m + 1) * kLn2, probe_err);
    const double tol = std::max(1e-9, 1e-10 * std::fabs(probe));
    const auto res =
        integrate_adaptive(integrand, m * kLn2, (m + 1) * kLn2, tol, 20000);
    panels.push_back(res.value);
    const double prev = running;
    running += res.value;
    if (running > kBlowupLevel && prev > 0.0 &&
        running >= kBlowupGrowth * prev) {
      break;
    }
  }
  return panels;
}

}  // namespace

CarlesonClassification carleson_classify(const Gauge& g, double q,
                                         const RadialMeasure& rho) {
  if (!(q > 0.0)) throw domain_error("carleson exponent q must be > 0");
  if (rho.components.empty()) {
    throw domain_error("measure must have at least one component");
  }
  constexpr int kDepth = 48;
  CarlesonClassification out;
  out.finite = true;

  std::vector<double> panel_sum(kDepth, 0.0);
  std::vector<std::string> reasons;
  int panel_depth_used = kDepth;

  for (const auto& comp : rho.components) {
    if (const auto* pw = std::get_if<RadialMeasure::Power>(&comp)) {
      if (pw->beta <= -1.0) {
        out.finite = false;
        reasons.push_back("power component beta=" + format_double(pw->beta) +
                          " <= -1: (1-r)^beta alone is non-integrable at r=1 "
                          "and Phi >= 1");
        const auto panels = power_panels_divergent(g, q, pw->beta, kDepth);
        panel_depth_used =
            std::min(panel_depth_used, static_cast<int>(panels.size()));
        for (std::size_t m = 0; m < panels.size(); ++m) {
          panel_sum[m] += panels[m];
        }
      } else {
        double err = 0.0;
        std::vector<double> panels;
        const double v = power_integral(g, q, pw->beta, err, panels, kDepth);
        out.value += v;
        out.error_bound += err;
        reasons.push_back(
            "power component beta=" + format_double(pw->beta) +
            " > -1: Phi grows at most polylogarithmically, integral finite");
        for (std::size_t m = 0; m < panels.size(); ++m) {
          panel_sum[m] += panels[m];
        }
      }
    } else {
      const auto& a = std::get<RadialMeasure::Atom>(comp);
      const double v = a.mass * std::pow(phi(g, 1.0 - a.r0), 0.5 * q);
      out.value += v;
      reasons.push_back("atom at r0=" + format_double(a.r0) +
                        ": single point, contribution " + format_double(v));
      // atoms enter the cumulative partials below
    }
  }

  // cumulative partials over [0, 1-2^-m]
  double running = 0.0;
  for (int m = 1; m <= panel_depth_used; ++m) {
    running += panel_sum[static_cast<std::size_t>(m - 1)];
    double with_atoms = running;
    for (const auto& comp : rho.components) {
      if (const auto* a = std::get_if<RadialMeasure::Atom>(&comp)) {
        if (a->r0 <= 1.0 - std::ldexp(1.0, -m)) {
          with_atoms += a->mass * std::pow(phi(g, 1.0 - a->r0), 0.5 * q);
        }
      }
    }
    out.partials.emplace_back(m, with_atoms);
    if (!out.finite && with_atoms > kBlowupLevel) break;
  }

  if (!out.finite) {
    out.value = std::numeric_limits<double>::infinity();
    out.error_bound = 0.0;
  }
  for (std::size_t i = 0; i < reasons.size(); ++i) {
    if (i) out.reason += "; ";
    out.reason += reasons[i];
  }
  return out;
}

CarlesonProbe carleson_necessity_probe(const Gauge& g, double q,
                                       const RadialMeasure& rho,
                                       int family_terms, int m_max,
                                       int angles) {
  if (family_terms < 1) {
    throw domain_error("witness family needs at least one term");
  }
  if (!(q > 0.0)) throw domain_error("carleson exponent q must be > 0");
  const RademacherFamily fam = make_family(g, family_terms - 1);
  const double p_mom = 0.5 * q;

  // D(z) = int_0^1 |F_y(z)|^q dy; radial for q = 2.
  const auto moment_at = [&](std::complex<double> z) {
    if (q == 2.0) return moment_closed_form_p1(fam, z);
    return moment_integral_exact(fam, z, p_mom);
  };
  const auto sphere_moment = [&](double r) {
    if (r == 0.0) return moment_at(0.0);
    if (q == 2.0) return moment_at(std::complex<double>(r, 0.0));
    auto sampler = [&](double theta) { return moment_at(std::polar(r, theta)); };
    return circle_average(sampler, angles, 1e-6, 4096).value;
  };

  CarlesonProbe out;
  out.family_terms = family_terms;
  const auto classification = carleson_classify(g, q, rho);
  out.classified_finite = classification.finite;
  out.classify_value = classification.value;

  double running = 0.0;
  double prev_running = 0.0;
  for (int m = 1; m <= m_max; ++m) {
    // panel r in [1-2^-(m-1), 1-2^-m]
    const double a = 1.0 - std::ldexp(1.0, -(m - 1));
    const double b = 1.0 - std::ldexp(1.0, -m);
    for (const auto& comp : rho.components) {
      if (const auto* pw = std::get_if<RadialMeasure::Power>(&comp)) {
        const auto integrand = [&](double r) {
          return sphere_moment(r) * std::pow(1.0 - r, pw->beta);
        };
        running += integrate_adaptive(integrand, a, b, 1e-8, 200).value;
      } else {
        const auto& atom = std::get<RadialMeasure::Atom>(comp);
        if (atom.r0 >= a && atom.r0 < b) {
          running += atom.mass * sphere_moment(atom.r0);
        }
      }
    }
    // atoms at or beyond the current depth boundary enter once reached
    out.partials.emplace_back(m, running);
    if (running > kBlowupLevel && prev_running > 0.0 &&
        running >= kBlowupGrowth * prev_running) {
      break;
    }
    prev_running = running;
  }
  out.final_partial = running;
  // settled when the depth increments decay geometrically
  if (out.partials.size() >= 3) {
    const auto n = out.partials.size();
    const double d_last = out.partials[n - 1].second - out.partials[n - 2].second;
    const double d_prev = out.partials[n - 2].second - out.partials[n - 3].second;
    out.bounded_evidence = d_prev <= 0.0 || d_last <= 0.9 * d_prev;
  } else {
    out.bounded_evidence = out.classified_finite;
  }
  if (out.classified_finite && out.classify_value > 0.0) {
    out.ratio_to_classify = out.final_partial / out.classify_value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Self-maps

namespace {

std::complex<double> blaschke_factor(std::complex<double> a,
                                     std::complex<double> z) {
  if (a == std::complex<double>(0.0)) return z;
  return (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
}

std::complex<double> blaschke_factor_derivative(std::complex<double> a,
                                                std::complex<double> z) {
  if (a == std::complex<double>(0.0)) return 1.0;
  const std::complex<double> den = 1.0 - std::conj(a) * z;
  return (std::abs(a) / a) * (std::norm(a) - 1.0) / (den * den);
}

}  // namespace

SelfMap::SelfMap(Spec spec) : spec_(std::move(spec)) {
  if (const auto* s = std::get_if<Scale>(&spec_)) {
    if (!(std::abs(s->c) <= 1.0)) {
      throw domain_error("scale factor must satisfy |c| <= 1");
    }
  } else if (const auto* m = std::get_if<Moebius>(&spec_)) {
    if (!(std::abs(m->a) < 1.0)) {
      throw domain_error("moebius parameter must satisfy |a| < 1");
    }
  } else if (const auto* b = std::get_if<Blaschke>(&spec_)) {
    if (b->zeros.empty()) {
      throw domain_error("blaschke product needs at least one zero");
    }
    for (auto zero : b->zeros) {
      if (!(std::abs(zero) < 1.0)) {
        throw domain_error("blaschke zeros must lie in the open disk");
      }
    }
  } else if (const auto* at = std::get_if<Atomic>(&spec_)) {
    if (!(at->c > 0.0)) {
      throw domain_error("atomic parameter must be positive");
    }
  }
}

SelfMap SelfMap::parse(std::string_view dsl) {
  std::size_t pos = 0;
  if (dsl.rfind("scale:", 0) == 0) {
    pos = 6;
    const auto c = parse_complex_at(dsl, pos);
    if (pos != dsl.size()) throw parse_error("trailing characters", pos);
    try {
      return SelfMap(Scale{c});
    } catch (const domain_error& e) {
      throw parse_error(e.what(), 6);
    }
  }
  if (dsl.rfind("moebius:", 0) == 0) {
    pos = 8;
    const auto a = parse_complex_at(dsl, pos);
    if (pos != dsl.size()) throw parse_error("trailing characters", pos);
    try {
      return SelfMap(Moebius{a});
    } catch (const domain_error& e) {
      throw parse_error(e.what(), 8);
    }
  }
  if (dsl.rfind("blaschke:[", 0) == 0) {
    if (dsl.back() != ']') throw parse_error("expected closing ']'", dsl.size());
    Blaschke b;
    pos = 10;
    while (pos < dsl.size() - 1) {
      b.zeros.push_back(parse_complex_at(dsl, pos));
      if (pos < dsl.size() - 1) {
        if (dsl[pos] != ',') throw parse_error("expected ','", pos);
        ++pos;
      }
    }
    try {
      return SelfMap(std::move(b));
    } catch (const domain_error& e) {
      throw parse_error(e.what(), 10);
    }
  }
  if (dsl.rfind("atomic:", 0) == 0) {
    pos = 7;
    const double c = parse_number_at(dsl, pos);
    if (pos != dsl.size()) throw parse_error("trailing characters", pos);
    try {
      return SelfMap(Atomic{c});
    } catch (const domain_error& e) {
      throw parse_error(e.what(), 7);
    }
  }
  throw parse_error(
      "unknown self-map (expected scale:, moebius:, blaschke:[...] or "
      "atomic:)",
      0);
}

std::string SelfMap::dsl() const {
  if (const auto* s = std::get_if<Scale>(&spec_)) {
    return "scale:" + format_complex(s->c);
  }
  if (const auto* m = std::get_if<Moebius>(&spec_)) {
    return "moebius:" + format_complex(m->a);
  }
  if (const auto* b = std::get_if<Blaschke>(&spec_)) {
    std::string out = "blaschke:[";
    for (std::size_t i = 0; i < b->zeros.size(); ++i) {
      if (i) out += ',';
      out += format_complex(b->zeros[i]);
    }
    return out + ']';
  }
  return "atomic:" + format_double(std::get<Atomic>(spec_).c);
}

std::complex<double> SelfMap::operator()(std::complex<double> z) const {
  require_disk_point(z);
  if (const auto* s = std::get_if<Scale>(&spec_)) return s->c * z;
  if (const auto* m = std::get_if<Moebius>(&spec_)) {
    return (z + m->a) / (1.0 + std::conj(m->a) * z);
  }
  if (const auto* b = std::get_if<Blaschke>(&spec_)) {
    std::complex<double> prod = 1.0;
    for (auto a : b->zeros) prod *= blaschke_factor(a, z);
    return prod;
  }
  const double c = std::get<Atomic>(spec_).c;
  return std::exp(c * (z + 1.0) / (z - 1.0));
}

std::complex<double> SelfMap::derivative(std::complex<double> z) const {
  require_disk_point(z);
  if (const auto* s = std::get_if<Scale>(&spec_)) return s->c;
  if (const auto* m = std::get_if<Moebius>(&spec_)) {
    const std::complex<double> den = 1.0 + std::conj(m->a) * z;
    return (1.0 - std::norm(m->a)) / (den * den);
  }
  if (const auto* b = std::get_if<Blaschke>(&spec_)) {
    // product rule; O(n^2) in the number of zeros
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < b->zeros.size(); ++j) {
      std::complex<double> term = blaschke_factor_derivative(b->zeros[j], z);
      for (std::size_t l = 0; l < b->zeros.size(); ++l) {
        if (l != j) term *= blaschke_factor(b->zeros[l], z);
      }
      sum += term;
    }
    return sum;
  }
  const double c = std::get<Atomic>(spec_).c;
  const std::complex<double> d = z - 1.0;
  return -2.0 * c / (d * d) * std::exp(c * (z + 1.0) / d);
}

double hyperbolic_ratio(const SelfMap& phi_map, const Gauge& Om,
                        std::complex<double> z) {
  require_disk_point(z);
  const std::complex<double> w = phi_map(z);
  const double x = 1.0 - std::abs(w);
  if (x < kBoundaryGuard) {
    throw numeric_error("self-map modulus within 1e-14 of 1 at z=" +
                            format_complex(z),
                        std::abs(w));
  }
  const double d = std::abs(phi_map.derivative(z));
  return d * (1.0 - std::abs(z)) / x * Om(x);
}

// ---------------------------------------------------------------------------
// Corollary audit

namespace {

struct SkippingMean {
  double mean = 0.0;
  int angles_used = 0;
  int skipped = 0;
  bool converged = true;
};

// Circle average that drops samples rejected by the integrand (returns
// NaN); doubling refinement as in circle_average.
SkippingMean circle_average_skipping(
    const std::function<double(double)>& samples, int initial_angles,
    double rel_tol, int angle_cap) {
  int n = initial_angles;
  double sum = 0.0;
  long count = 0;
  int skipped = 0;
  const auto take = [&](double theta) {
    const double v = samples(theta);
    if (std::isnan(v)) {
      ++skipped;
    } else {
      sum += v;
      ++count;
    }
  };
  for (int j = 0; j < n; ++j) take(2.0 * kPi * j / n);
  double avg = count > 0 ? sum / count : 0.0;
  while (n < angle_cap) {
    for (int j = 0; j < n; ++j) take(kPi * (2.0 * j + 1.0) / n);
    n *= 2;
    const double refined = count > 0 ? sum / count : 0.0;
    const double scale = std::max({std::fabs(refined), std::fabs(avg), 1e-300});
    const bool ok = std::fabs(refined - avg) <= rel_tol * scale;
    avg = refined;
    if (ok) return {avg, n, skipped, true};
  }
  return {avg, n, skipped, false};
}

}  // namespace

Cor43Report cor43_audit(const SelfMap& phi_map, const Gauge& omega,
                        const Gauge& Omega, double p, const RadialGrid& grid) {
  if (!(p >= 1.0)) throw precondition_error("audit requires p >= 1");
  const auto dw = classify_dichotomy(omega);
  if (dw.kind != Dichotomy::Convergent) {
    throw precondition_error("hypothesis I_omega(0+) < inf fails: gauge " +
                             omega.dsl() + " is divergent");
  }
  const auto dOm = classify_dichotomy(Omega);
  if (dOm.kind != Dichotomy::Divergent) {
    throw precondition_error("hypothesis I_Omega(0+) = inf fails: gauge " +
                             Omega.dsl() + " is convergent");
  }

  Cor43Report out;
  EstimateReport& rep = out.hypothesis;
  rep.name = "hyperbolic-audit.hypothesis";
  rep.config["map"] = phi_map.dsl();
  rep.config["omega"] = omega.dsl();
  rep.config["Omega"] = Omega.dsl();
  rep.config["p"] = p;
  rep.grid = grid.descriptor();

  constexpr int kAngleCap = 1 << 14;
  const double two_p = 2.0 * p;

  const auto ratio_sample = [&](double r, double theta) -> double {
    const std::complex<double> z = std::polar(r, theta);
    const std::complex<double> w = phi_map(z);
    const double x = 1.0 - std::abs(w);
    if (x < kBoundaryGuard) return std::numeric_limits<double>::quiet_NaN();
    const double h = std::abs(phi_map.derivative(z)) / x * Omega(x);
    return std::pow(h, two_p);
  };

  for (double r : grid.radii()) {
    if (r == 0.0) continue;
    const auto mean = circle_average_skipping(
        [&](double theta) { return ratio_sample(r, theta); }, grid.angles,
        1e-7, kAngleCap);
    out.skipped_angle_samples += mean.skipped;
    const double m2p = std::pow(mean.mean, 1.0 / two_p);
    const double lhs = (1.0 - r) * m2p;
    const double rhs = omega(1.0 - r);
    rep.points.push_back({.r = r, .lhs = lhs, .rhs = rhs, .ratio = lhs / rhs});
  }
  rep.provenance["angle_cap"] = kAngleCap;
  rep.provenance["boundary_guard"] = kBoundaryGuard;
  rep.finalize(Extremum::Max, 1.0 + 1e-12);
  out.hypothesis_holds = rep.holds;

  if (out.hypothesis_holds) {
    out.profile_computed = true;
    const auto phi_sample = [&](double r, double theta) -> double {
      const std::complex<double> z = std::polar(r, theta);
      const std::complex<double> w = phi_map(z);
      const double x = 1.0 - std::abs(w);
      if (x < kBoundaryGuard) return std::numeric_limits<double>::quiet_NaN();
      return std::pow(phi(Omega, x), p);
    };
    double sup = 0.0;
    std::vector<std::pair<double, double>> rows;
    for (double r : grid.radii()) {
      if (r == 0.0) continue;
      const auto mean = circle_average_skipping(
          [&](double theta) { return phi_sample(r, theta); }, grid.angles,
          1e-7, kAngleCap);
      out.skipped_angle_samples += mean.skipped;
      rows.emplace_back(r, mean.mean);
      sup = std::max(sup, mean.mean);
    }
    out.phi_sup = sup;
    for (auto [r, v] : rows) {
      out.phi_profile.push_back(
          {.r = r, .lhs = v, .rhs = sup, .ratio = sup > 0.0 ? v / sup : 0.0});
    }
  }
  return out;
}

}  // namespace blochlab
