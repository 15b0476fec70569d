#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "blochlab/lacunary.hpp"

namespace blochlab {

// R_k(y) = sign sin(2^(k+1) pi y); +1 at the dyadic zeros by convention.
int rademacher(int k, double y);

/// Randomized family F_y(z) = sum_k R_k(y) a_k z^(n_k) over a gap series
/// with exponent rule n_k = 2^k - 1. terms() counts the randomized signs,
/// i.e. base order + 1.
struct RademacherFamily {
  explicit RademacherFamily(GapSeries base_series);
  GapSeries base;
  int terms() const { return base.order() + 1; }
};

RademacherFamily make_family(const Gauge& g, int K_order);

std::complex<double> family_eval(const RademacherFamily& fam, double y,
                                 std::complex<double> z);

inline constexpr int kExactEnumerationMaxTerms = 24;

struct MomentMode {
  enum class Kind { Exact, MonteCarlo } kind = Kind::Exact;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  static MomentMode exact() { return {}; }
  static MomentMode montecarlo(std::uint64_t seed, std::int64_t samples) {
    return {Kind::MonteCarlo, seed, samples};
  }
  std::string name() const {
    return kind == Kind::Exact ? "exact" : "montecarlo";
  }
};

struct MomentResult {
  double value = 0.0;
  double std_error = 0.0;  // Monte Carlo only
  MomentMode mode;
};

// int_0^1 |F_y(z)|^(2p) dy. Exact mode averages over all 2^terms sign
// patterns in Gray-code order with compensated accumulation (the dy
// integral equals that average: each pattern occupies one dyadic cell of
// length 2^-terms). Requires terms <= 24, else resource_error.
double moment_integral_exact(const RademacherFamily& fam,
                             std::complex<double> z, double p);

// Seeded sample average over uniform y; deterministic for a fixed seed,
// independent of the worker count.
MomentResult moment_integral_mc(const RademacherFamily& fam,
                                std::complex<double> z, double p,
                                std::uint64_t seed, std::int64_t samples);

MomentResult moment_integral(const RademacherFamily& fam,
                             std::complex<double> z, double p,
                             const MomentMode& mode);

// p = 1 orthogonality closed form: sum_k a_k^2 |z|^(2 n_k).
double moment_closed_form_p1(const RademacherFamily& fam,
                             std::complex<double> z);

}  // namespace blochlab
