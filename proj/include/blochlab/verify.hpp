#pragma once

#include <complex>
#include <vector>

#include "blochlab/gauge.hpp"
#include "blochlab/lacunary.hpp"
#include "blochlab/means.hpp"
#include "blochlab/report.hpp"
#include "blochlab/stochastic.hpp"

namespace blochlab {

// min over r = 1-2^-m, m = 0..m_max, of Psi(r)/Phi(1-r). At every m >= 1
// the report also checks the dyadic chain 2 Psi(r) >= omega^2(1) +
// (1/e) sum_{k=0..m-1} omega^2(2^-k).
EstimateReport verify_lemma31(const Gauge& g, int m_max);

// Reverse estimate at d = 1: builds the Rademacher family on exponents
// 2^k-1, normalizes by the measured Bloch norm of the all-plus series, and
// reports tau = min over r = 1-2^-m, m = 0..m_max, of the normalized moment
// over Phi^p(1-r). p = 1 goes through the orthogonality closed form; other
// p through the requested moment mode. K < 0 selects the default truncation.
EstimateReport verify_reverse(const Gauge& g, double p, int m_max, int K = -1,
                              const MomentMode& mode = MomentMode::exact());

// max over the grid of Phi(1-r)/Phi(1-r^2); holds iff <= 4.
EstimateReport verify_phi_doubling(const Gauge& g,
                                   const std::vector<double>& r_grid);

// Uniform open grid of n points in (lo, hi).
std::vector<double> uniform_open_grid(double lo, double hi, int n);

// max over grid radii of M_p(f,r) / (|f| * Phi^(1/2)(1-r)) with the grid
// Bloch norm; per-radius check of int_0^r |Rf(t)|^2 (r-t) dt <=
// |f|^2 Phi(1-r) by radial quadrature.
EstimateReport verify_direct(const Gauge& g, const GapSeries& f, double p,
                             const RadialGrid& grid);

// Same shape normalized by the Hardy-Bloch norm; requires p >= 2. The
// per-radius check integrates M_p^2(Rf,t)(r-t) dt.
EstimateReport verify_hardy_bloch(const Gauge& g, const GapSeries& f, double p,
                                  const RadialGrid& grid);

struct RayOscillation {
  double theta = 0.0;
  std::vector<double> osc_re;  // max-min of Re over trailing windows
  std::vector<double> osc_im;
  std::vector<double> osc;     // max of the two components
};

struct DivergenceDemoReport {
  L2Result l2;                       // the rigorous verdict
  std::vector<double> radii;
  std::vector<int> window_ends;     // indices into radii (last <= 5 depths)
  int window_size = 10;
  std::vector<RayOscillation> rays;
  std::vector<double> osc_by_depth;  // max over rays per window end
  GapSeries series;
};

// Oscillation of the extremal series along rays over trailing windows of
// dyadic radii; illustrative only, the l2 classification is the verdict.
DivergenceDemoReport divergence_demo(const Gauge& g,
                                     const std::vector<double>& rays,
                                     const std::vector<double>& radii);

}  // namespace blochlab
