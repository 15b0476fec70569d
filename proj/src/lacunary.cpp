#include "blochlab/lacunary.hpp"

#include <cmath>
#include <limits>

#include "blochlab/numfmt.hpp"

namespace blochlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Powers with squared modulus below this are flushed to zero and accounted
// for in the tail bound, keeping sums deterministic near underflow.
constexpr double kFlushNormSq = 1e-300;
constexpr double kFlushAbs = 1e-150;

void require_disk(std::complex<double> z) {
  if (!(std::abs(z) < 1.0)) {
    throw domain_error("evaluation point outside the open disk: |z|=" +
                       format_double(std::abs(z)));
  }
}

}  // namespace

std::string rule_name(ExponentRule rule) {
  return rule == ExponentRule::PowersOfTwo ? "2^k" : "2^k-1";
}

ExponentRule rule_from_name(std::string_view name) {
  if (name == "2^k") return ExponentRule::PowersOfTwo;
  if (name == "2^k-1") return ExponentRule::PowersOfTwoMinusOne;
  throw parse_error("unknown exponent rule (expected 2^k or 2^k-1)", 0);
}

std::uint64_t GapSeries::exponent(int k) const {
  const std::uint64_t p = std::uint64_t{1} << k;
  return rule == ExponentRule::PowersOfTwo ? p : p - 1;
}

bool GapSeries::nonnegative_coefficients() const {
  for (double a : coeffs) {
    if (a < 0.0) return false;
  }
  return true;
}

GapSeries build_extremal(const Gauge& g, int K, ExponentRule rule) {
  if (K < 0) throw domain_error("truncation order must be >= 0");
  GapSeries s;
  s.rule = rule;
  s.gauge_origin = g;
  s.coeffs.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) s.coeffs.push_back(g(std::ldexp(1.0, -k)));
  return s;
}

int default_truncation_order(const Gauge& g, double r_max, ExponentRule rule) {
  if (!(r_max >= 0.0) || r_max >= 1.0) {
    throw domain_error("grid radius outside [0,1): r=" + format_double(r_max));
  }
  constexpr double kTol = 1e-12;
  constexpr int kCap = 40;
  if (r_max == 0.0) return 0;
  const double w1 = g(1.0);
  double rpow = r_max;  // r^(2^k)
  for (int K = 0; K < kCap; ++K) {
    rpow *= rpow;  // r^(2^(K+1))
    double tail = w1 * rpow / (1.0 - r_max);
    if (rule == ExponentRule::PowersOfTwoMinusOne) tail /= r_max;
    if (tail <= kTol) return K;
  }
  return kCap;
}

SeriesValue eval(const GapSeries& s, std::complex<double> z) {
  require_disk(z);
  std::complex<double> pw =
      s.rule == ExponentRule::PowersOfTwo ? z : std::complex<double>(1.0);
  std::complex<double> sum = 0.0;
  double flush_allowance = 0.0;
  bool flushed = false;
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    if (flushed) {
      flush_allowance += std::abs(s.coeffs[k]) * kFlushAbs;
      continue;
    }
    sum += s.coeffs[k] * pw;
    pw = s.rule == ExponentRule::PowersOfTwo ? pw * pw : pw * pw * z;
    if (std::norm(pw) < kFlushNormSq) {
      pw = 0.0;
      flushed = true;
    }
  }

  SeriesValue out;
  out.value = sum;
  out.tail_bound = flush_allowance;
  if (s.gauge_origin) {
    const double r = std::abs(z);
    if (flushed) {
      out.tail_bound += (*s.gauge_origin)(1.0) * kFlushAbs / (1.0 - r);
    } else {
      // |pw| = |z|^(n_(K+1)) after the loop
      out.tail_bound += (*s.gauge_origin)(1.0) * std::abs(pw) / (1.0 - r);
    }
  }
  return out;
}

std::complex<double> radial_derivative_eval(const GapSeries& s,
                                            std::complex<double> z) {
  require_disk(z);
  std::complex<double> pw =
      s.rule == ExponentRule::PowersOfTwo ? z : std::complex<double>(1.0);
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
    sum += s.coeffs[k] * static_cast<double>(s.exponent(static_cast<int>(k))) *
           pw;
    pw = s.rule == ExponentRule::PowersOfTwo ? pw * pw : pw * pw * z;
    if (std::norm(pw) < kFlushNormSq) {
      pw = 0.0;  // remaining terms vanish at double precision
    }
  }
  return sum;
}

L2Result l2_membership(const GapSeries& s) {
  if (!s.gauge_origin) {
    throw precondition_error(
        "l2 classification requires a gauge-built series");
  }
  const Gauge& g = *s.gauge_origin;
  L2Result out;
  switch (g.family()) {
    case GaugeFamily::Const:
      out.kind = L2Class::NotInL2;
      out.sum = kInf;
      out.reason = "sum_k omega^2(2^-k) = sum_k 1 diverges";
      break;
    case GaugeFamily::Pow: {
      // sum_k 2^(-2*alpha*k), geometric
      const double q = std::exp2(-2.0 * g.alpha());
      out.kind = L2Class::InL2;
      out.sum = 1.0 / (1.0 - q);
      out.abs_error_bound = 0.0;
      out.reason = "geometric series with ratio 2^(-2*alpha)";
      break;
    }
    case GaugeFamily::Log: {
      const double two_beta = 2.0 * g.beta();
      if (two_beta >= -1.0) {
        out.kind = L2Class::NotInL2;
        out.sum = kInf;
        out.reason =
            "sum_k (1+k*ln2)^(2*beta) diverges by comparison with the "
            "harmonic series (2*beta >= -1)";
      } else {
        // Partial sum plus integral-test bracket midpoint for the tail.
        constexpr int kTerms = 1 << 20;
        const double ln2 = std::log(2.0);
        double sum = 0.0;
        for (int k = kTerms - 1; k >= 0; --k) {
          sum += std::pow(1.0 + k * ln2, two_beta);
        }
        const auto tail_from = [&](double a) {
          // int_a^inf (1+x*ln2)^(2*beta) dx
          return -std::pow(1.0 + a * ln2, two_beta + 1.0) /
                 ((two_beta + 1.0) * ln2);
        };
        const double lo = tail_from(kTerms);
        const double hi = tail_from(kTerms - 1);
        out.kind = L2Class::InL2;
        out.sum = sum + 0.5 * (lo + hi);
        out.abs_error_bound = 0.5 * (hi - lo);
        out.reason = "p-series with exponent 2*beta < -1";
      }
      break;
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const GapSeries& s) {
  nlohmann::ordered_json j;
  j["gauge"] = s.gauge_origin ? nlohmann::ordered_json(s.gauge_origin->dsl())
                              : nlohmann::ordered_json(nullptr);
  j["rule"] = rule_name(s.rule);
  j["K"] = s.order();
  j["coeffs"] = s.coeffs;
  return j;
}

GapSeries gap_series_from_json(const nlohmann::json& j) {
  GapSeries s;
  if (!j.at("gauge").is_null()) {
    s.gauge_origin = Gauge::parse(j.at("gauge").get<std::string>());
  }
  s.rule = rule_from_name(j.at("rule").get<std::string>());
  s.coeffs = j.at("coeffs").get<std::vector<double>>();
  if (s.order() != j.at("K").get<int>()) {
    throw parse_error("series K does not match coefficient count", 0);
  }
  if (s.gauge_origin) {
    for (int k = 0; k <= s.order(); ++k) {
      const double expected = (*s.gauge_origin)(std::ldexp(1.0, -k));
      const double got = s.coeffs[static_cast<std::size_t>(k)];
      if (std::fabs(got - expected) > 1e-12 * std::max(1.0, expected)) {
        throw parse_error("coefficient a_" + std::to_string(k) +
                              " does not equal omega(2^-" +
                              std::to_string(k) + ") of the declared gauge",
                          0);
      }
    }
  }
  return s;
}

}  // namespace blochlab
