#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blochlab/gauge.hpp"

namespace blochlab {

enum class ExponentRule {
  PowersOfTwo,          // n_k = 2^k
  PowersOfTwoMinusOne,  // n_k = 2^k - 1
};

std::string rule_name(ExponentRule rule);
ExponentRule rule_from_name(std::string_view name);

/// Hadamard gap series sum_k a_k z^(n_k), truncated at order K.
struct GapSeries {
  std::vector<double> coeffs;  // a_0 .. a_K
  ExponentRule rule = ExponentRule::PowersOfTwo;
  std::optional<Gauge> gauge_origin;  // set when a_k = omega(2^-k)

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  std::uint64_t exponent(int k) const;
  bool nonnegative_coefficients() const;
};

// Extremal series for a gauge: a_k = omega(2^-k), k = 0..K.
GapSeries build_extremal(const Gauge& g, int K, ExponentRule rule);

// Smallest K whose tail bound at radius r_max is <= 1e-12, capped at 40.
int default_truncation_order(const Gauge& g, double r_max, ExponentRule rule);

struct SeriesValue {
  std::complex<double> value;
  double tail_bound = 0.0;
};

// Direct summation with z^(n_k) obtained by squaring the previous power.
// Tail bound covers the omega-tail beyond K (increasing gauges) plus any
// underflow-flushed terms. Domain |z| < 1.
SeriesValue eval(const GapSeries& s, std::complex<double> z);

// Rf(z) = sum_k a_k n_k z^(n_k)  (= z f'(z) on the disk).
std::complex<double> radial_derivative_eval(const GapSeries& s,
                                            std::complex<double> z);

enum class L2Class { InL2, NotInL2 };

struct L2Result {
  L2Class kind = L2Class::InL2;
  double sum = 0.0;  // sum omega^2(2^-k): value when finite, +inf otherwise
  double abs_error_bound = 0.0;
  std::string reason;
};

// Closed-form classification of sum_k omega^2(2^-k). Requires gauge_origin.
L2Result l2_membership(const GapSeries& s);

// {gauge, rule, K, coeffs[]} record for report reproducibility.
nlohmann::ordered_json to_json(const GapSeries& s);
GapSeries gap_series_from_json(const nlohmann::json& j);

}  // namespace blochlab
