#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "blochlab/gauge.hpp"
#include "blochlab/means.hpp"
#include "blochlab/report.hpp"
#include "blochlab/stochastic.hpp"

namespace blochlab {

/// Positive measure on [0,1): finite mixture of (1-r)^beta dr components
/// and point masses.
struct RadialMeasure {
  struct Power {
    double beta = 0.0;
  };
  struct Atom {
    double r0 = 0.0;
    double mass = 1.0;
  };
  using Component = std::variant<Power, Atom>;
  std::vector<Component> components;

  // "power:-0.5", "atom:0.5:1.0", "mix:[power:0,atom:0.5:1.0]"
  static RadialMeasure parse(std::string_view dsl);
  std::string dsl() const;
};

struct CarlesonClassification {
  bool finite = false;
  double value = 0.0;       // int Phi^(q/2)(1-r) d rho(r) when finite
  double error_bound = 0.0;
  std::string reason;
  // cumulative integral over r in [0, 1-2^-m], evidence rows (m, value)
  std::vector<std::pair<int, double>> partials;
};

// Decides int_0^1 Phi^(q/2)(1-r) d rho(r) analytically (finite iff every
// power component has beta > -1; atoms always finite) and evaluates the
// finite value by dyadic-panel quadrature.
CarlesonClassification carleson_classify(const Gauge& g, double q,
                                         const RadialMeasure& rho);

struct CarlesonProbe {
  bool classified_finite = false;
  std::vector<std::pair<int, double>> partials;  // (depth m, partial value)
  double final_partial = 0.0;
  bool bounded_evidence = false;  // partial growth settled on the grid
  double classify_value = 0.0;    // the Phi-side value when finite
  double ratio_to_classify = 0.0;
  int family_terms = 0;
};

// Evidence for the necessity direction: partial integrals of
// int int |F_y(r zeta)|^q dsigma dy against rho over dyadic depths,
// via exact sign enumeration (Fubini) and angle quadrature.
CarlesonProbe carleson_necessity_probe(const Gauge& g, double q,
                                       const RadialMeasure& rho,
                                       int family_terms, int m_max,
                                       int angles);

/// Holomorphic self-map of the disk with a closed-form derivative.
class SelfMap {
 public:
  struct Scale {
    std::complex<double> c;
  };
  struct Moebius {
    std::complex<double> a;  // z -> (z+a)/(1+conj(a)z)
  };
  struct Blaschke {
    std::vector<std::complex<double>> zeros;
  };
  struct Atomic {
    double c;  // z -> exp(c(z+1)/(z-1)), c > 0
  };
  using Spec = std::variant<Scale, Moebius, Blaschke, Atomic>;

  explicit SelfMap(Spec spec);
  // "scale:0.5", "moebius:0.3", "blaschke:[0.1,0.5i]", "atomic:1.0"
  static SelfMap parse(std::string_view dsl);
  std::string dsl() const;

  std::complex<double> operator()(std::complex<double> z) const;
  std::complex<double> derivative(std::complex<double> z) const;

  const Spec& spec() const { return spec_; }

 private:
  Spec spec_;
};

// |phi'(z)| (1-|z|) / (1-|phi(z)|) * Omega(1-|phi(z)|).
// Throws numeric_error when |phi(z)| is within 1e-14 of 1.
double hyperbolic_ratio(const SelfMap& phi, const Gauge& Om,
                        std::complex<double> z);

struct Cor43Report {
  EstimateReport hypothesis;  // lhs = (1-r) M_2p(H, r), rhs = omega(1-r)
  bool hypothesis_holds = false;
  bool profile_computed = false;
  std::vector<RatioPoint> phi_profile;  // lhs = integral, rhs = closed bound
  double phi_sup = 0.0;
  int skipped_angle_samples = 0;
};

// Audits the hyperbolic-derivative hypothesis
//   (1-r) * M_2p( |phi'| / (1-|phi|) * Omega(1-|phi|), r ) <= omega(1-r)
// on the grid and, when it holds, the boundedness of
//   sup_r int Phi_Omega^p(1-|phi(r zeta)|) dsigma(zeta).
// Preconditions: I_omega(0+) < inf, I_Omega(0+) = inf, p >= 1.
Cor43Report cor43_audit(const SelfMap& phi_map, const Gauge& omega,
                        const Gauge& Omega, double p, const RadialGrid& grid);

}  // namespace blochlab
