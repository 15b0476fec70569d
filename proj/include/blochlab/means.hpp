#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "blochlab/gauge.hpp"
#include "blochlab/lacunary.hpp"

namespace blochlab {

/// A holomorphic function on the disk exposed through point evaluation and
/// its radial derivative Rf(z) = z f'(z). nonnegative_coefficients marks
/// power series with a_k >= 0, whose modulus on each circle peaks at
/// theta = 0.
struct Evaluable {
  std::function<std::complex<double>(std::complex<double>)> value;
  std::function<std::complex<double>(std::complex<double>)> radial_derivative;
  bool nonnegative_coefficients = false;
  std::string label;
};

Evaluable as_evaluable(const GapSeries& s);

/// Dyadic radii 1 - 2^-m, m = m_min..m_max, with a fixed angle count per
/// circle (power of two, >= 16).
struct RadialGrid {
  RadialGrid(int m_min, int m_max, int angles);
  int m_min;
  int m_max;
  int angles;
  std::vector<double> radii() const;
  std::string descriptor() const;
};

struct MeanResult {
  double value = 0.0;      // M_p(f, r)
  int angles_used = 0;     // final N
  bool converged = true;   // false when the N = 2^18 cap was hit
};

inline constexpr int kMeanAngleCap = 1 << 18;
inline constexpr double kMeanRelTol = 1e-8;

// Average of samples(theta) over N uniform angles, N doubling (samples
// reused) until successive averages agree to rel_tol or the cap is hit.
MeanResult circle_average(const std::function<double(double)>& samples,
                          int initial_angles, double rel_tol = kMeanRelTol,
                          int angle_cap = kMeanAngleCap);

// M_p(f, r): p-th root of the circle average of |f(r e^{i theta})|^p.
MeanResult integral_mean(const Evaluable& f, double p, double r,
                         int initial_angles);

struct NormEstimate {
  double value = 0.0;
  double argmax_r = 0.0;
  double argmax_theta = 0.0;
  std::string grid;
  int unconverged_means = 0;  // Hardy-Bloch estimator only
};

// |f(0)| + grid max of |Rf(z)|(1-|z|)/omega(1-|z|). Grid sup only: a lower
// estimate of the true supremum. Series with nonnegative coefficients skip
// the angle sweep (max at theta = 0).
NormEstimate bloch_norm_estimate(const Evaluable& f, const Gauge& g,
                                 const RadialGrid& grid);

// |f(0)| + grid max of M_p(Rf, r)(1-r)/omega(1-r).
NormEstimate hardy_bloch_norm_estimate(const Evaluable& f, const Gauge& g,
                                       double p, const RadialGrid& grid);

}  // namespace blochlab
