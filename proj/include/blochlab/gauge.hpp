#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "blochlab/errors.hpp"

namespace blochlab {

enum class GaugeFamily { Const, Pow, Log };

/// Gauge function omega on (0,1]:
///   const     omega(t) = 1
///   pow       omega(t) = t^alpha,            0 < alpha < 1
///   log       omega(t) = (1+ln(1/t))^beta,   beta <= 0
/// eps in (0,1) is the regularity exponent: t -> omega(t)/t^eps is required
/// to be nonincreasing (normal-weight upper bound). Defaults make that hold
/// by construction: const -> 0.5, pow(alpha) -> (1+alpha)/2, log -> 0.5.
class Gauge {
 public:
  static Gauge constant(double eps = 0.5);
  static Gauge power(double alpha);
  static Gauge power(double alpha, double eps);
  static Gauge logarithmic(double beta, double eps = 0.5);

  // Mini-DSL: "const", "pow:0.5", "log:-0.5", optional ";eps=0.6" suffix.
  static Gauge parse(std::string_view dsl);

  GaugeFamily family() const { return family_; }
  double alpha() const { return param_; }  // pow only
  double beta() const { return param_; }   // log only
  double eps() const { return eps_; }

  // Canonical DSL form, round-trips through parse(). Used in report echoes.
  std::string dsl() const;

  // omega(t); throws domain_error for t outside (0,1].
  double operator()(double t) const;

 private:
  Gauge(GaugeFamily family, double param, double eps);
  GaugeFamily family_;
  double param_;
  double eps_;
};

double eval_gauge(const Gauge& g, double t);

enum class IntegralMethod { ClosedForm, Quadrature };

/// I(x) = int_x^1 omega^2(t)/t dt together with Phi(x) = 1 + I(x).
struct QuadraticIntegralValue {
  double x = 0.0;
  double value_I = 0.0;
  double value_Phi = 1.0;
  IntegralMethod method = IntegralMethod::ClosedForm;
  double abs_error_bound = 0.0;
};

// Closed form. Domain (0,1]; I(1) = 0.
QuadraticIntegralValue quadratic_integral(const Gauge& g, double x);

// Same integral by adaptive Gauss-Kronrod quadrature. Panels are pre-split
// at the dyadic points 2^-m inside [x,1] so the 1/t factor stays tame.
QuadraticIntegralValue quadratic_integral_quadrature(const Gauge& g, double x,
                                                     double abs_tol = 1e-10);

// Phi(x) = 1 + I(x), closed form.
double phi(const Gauge& g, double x);

// Phi(x) expressed through s = ln(1/x) >= 0; usable where x = e^-s would
// underflow.
double phi_from_log(const Gauge& g, double s);

struct PsiValue {
  double value = 0.0;       // partial sum over k = 0..order
  double tail_bound = 0.0;  // certified bound on the discarded remainder
  int order = 0;            // K actually used
};

// Psi(r) = sum_k omega^2(2^-k) r^(2^k - 1). K < 0 selects the smallest
// order with tail bound <= 1e-12 (capped at 60). Domain 0 <= r < 1.
PsiValue psi(const Gauge& g, double r, int K = -1);

enum class Dichotomy { Convergent, Divergent, Unknown };

struct DichotomyResult {
  Dichotomy kind = Dichotomy::Unknown;
  double limit = 0.0;  // I(0+) when convergent; +inf when divergent
  std::string reason;
  std::vector<double> evidence;  // I(2^-m) growth sequence, Unknown only
};

// Exact classification of I(0+); closed form for every built-in family.
DichotomyResult classify_dichotomy(const Gauge& g);

// Numeric evidence sequence I(2^-m), m = 1..m_max. Never proves divergence.
std::vector<double> dichotomy_evidence(const Gauge& g, int m_max = 40);

struct RegularityCondition {
  std::string name;
  bool pass = true;
  // First violating adjacent pair in the scanned variable (t or tau).
  double x_lo = 0.0, x_hi = 0.0;
  double value_lo = 0.0, value_hi = 0.0;
};

struct RegularityReport {
  std::vector<RegularityCondition> conditions;
  bool all_pass = true;
};

// Scans four monotonicity conditions on the grid (sorted internally):
//   1. omega nondecreasing in t
//   2. omega(t)/t^eps nonincreasing in t
//   3. omega(1/tau) nonincreasing in tau          (t-form of 1)
//   4. tau^eps * omega(1/tau) nondecreasing in tau (tau-form of 2)
// Violations are reported, never thrown.
RegularityReport check_regularity(const Gauge& g, std::vector<double> grid);

// Dyadic grid {2^-m : m = m_lo..m_hi}, ascending.
std::vector<double> dyadic_grid(int m_lo, int m_hi);

}  // namespace blochlab
