#include "blochlab/means.hpp"

#include <cmath>
#include <numbers>

#include "blochlab/numfmt.hpp"

namespace blochlab {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double modulus_power(std::complex<double> v, double p) {
  if (p == 2.0) return std::norm(v);
  if (p == 1.0) return std::abs(v);
  return std::pow(std::abs(v), p);
}

}  // namespace

Evaluable as_evaluable(const GapSeries& s) {
  Evaluable e;
  e.value = [s](std::complex<double> z) { return eval(s, z).value; };
  e.radial_derivative = [s](std::complex<double> z) {
    return radial_derivative_eval(s, z);
  };
  e.nonnegative_coefficients = s.nonnegative_coefficients();
  e.label = "gap-series(rule=" + rule_name(s.rule) +
            ",K=" + std::to_string(s.order()) + ")";
  return e;
}

RadialGrid::RadialGrid(int m_min_, int m_max_, int angles_)
    : m_min(m_min_), m_max(m_max_), angles(angles_) {
  if (m_min < 0 || m_max < m_min) {
    throw domain_error("radial grid requires 0 <= m_min <= m_max");
  }
  if (!is_power_of_two(angles) || angles < 16) {
    throw domain_error("angle count must be a power of two >= 16; got " +
                       std::to_string(angles));
  }
}

std::vector<double> RadialGrid::radii() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m_max - m_min) + 1);
  for (int m = m_min; m <= m_max; ++m) {
    out.push_back(1.0 - std::ldexp(1.0, -m));
  }
  return out;
}

std::string RadialGrid::descriptor() const {
  return "dyadic[m=" + std::to_string(m_min) + ".." + std::to_string(m_max) +
         "],angles=" + std::to_string(angles);
}

MeanResult circle_average(const std::function<double(double)>& samples,
                          int initial_angles, double rel_tol, int angle_cap) {
  if (!is_power_of_two(initial_angles)) {
    throw domain_error("angle count must be a power of two; got " +
                       std::to_string(initial_angles));
  }
  int n = initial_angles;
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    sum += samples(2.0 * kPi * j / n);
  }
  double avg = sum / n;
  while (n < angle_cap) {
    // midpoints of the current partition: theta = pi(2j+1)/n
    double add = 0.0;
    for (int j = 0; j < n; ++j) {
      add += samples(kPi * (2.0 * j + 1.0) / n);
    }
    sum += add;
    n *= 2;
    const double refined = sum / n;
    const double scale = std::max({std::fabs(refined), std::fabs(avg), 1e-300});
    const bool ok = std::fabs(refined - avg) <= rel_tol * scale;
    avg = refined;
    if (ok) return {avg, n, true};
  }
  return {avg, n, false};
}

MeanResult integral_mean(const Evaluable& f, double p, double r,
                         int initial_angles) {
  if (!(p > 0.0)) throw domain_error("integral mean requires p > 0");
  if (!(r > 0.0) || r >= 1.0) {
    throw domain_error("integral mean radius outside (0,1): r=" +
                       format_double(r));
  }
  auto sampler = [&](double theta) {
    const std::complex<double> z = std::polar(r, theta);
    return modulus_power(f.value(z), p);
  };
  MeanResult res = circle_average(sampler, initial_angles);
  res.value = std::pow(res.value, 1.0 / p);
  return res;
}

NormEstimate bloch_norm_estimate(const Evaluable& f, const Gauge& g,
                                 const RadialGrid& grid) {
  NormEstimate out;
  out.grid = grid.descriptor();
  const double base = std::abs(f.value(0.0));

  double best = -1.0;
  for (double r : grid.radii()) {
    double v = 0.0;
    double theta_at = 0.0;
    if (f.nonnegative_coefficients) {
      v = std::abs(f.radial_derivative(std::complex<double>(r, 0.0)));
    } else {
      for (int j = 0; j < grid.angles; ++j) {
        const double theta = 2.0 * kPi * j / grid.angles;
        const double m = std::abs(f.radial_derivative(std::polar(r, theta)));
        if (m > v) {
          v = m;
          theta_at = theta;
        }
      }
    }
    const double ratio = v * (1.0 - r) / g(1.0 - r);
    if (ratio > best) {
      best = ratio;
      out.argmax_r = r;
      out.argmax_theta = theta_at;
    }
  }
  out.value = base + std::max(best, 0.0);
  return out;
}

NormEstimate hardy_bloch_norm_estimate(const Evaluable& f, const Gauge& g,
                                       double p, const RadialGrid& grid) {
  if (!(p > 0.0)) throw domain_error("Hardy-Bloch norm requires p > 0");
  NormEstimate out;
  out.grid = grid.descriptor();
  const double base = std::abs(f.value(0.0));

  Evaluable derivative;
  derivative.value = f.radial_derivative;
  derivative.nonnegative_coefficients = f.nonnegative_coefficients;

  double best = -1.0;
  for (double r : grid.radii()) {
    double ratio = 0.0;
    if (r > 0.0) {
      const MeanResult m = integral_mean(derivative, p, r, grid.angles);
      if (!m.converged) ++out.unconverged_means;
      ratio = m.value * (1.0 - r) / g(1.0 - r);
    }
    if (ratio > best) {
      best = ratio;
      out.argmax_r = r;
    }
  }
  out.value = base + std::max(best, 0.0);
  return out;
}

}  // namespace blochlab
