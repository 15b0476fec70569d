#include "blochlab/stochastic.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "blochlab/numfmt.hpp"
#include "blochlab/parallel.hpp"

namespace blochlab {

namespace {

void require_disk(std::complex<double> z) {
  if (!(std::abs(z) < 1.0)) {
    throw domain_error("evaluation point outside the open disk: |z|=" +
                       format_double(std::abs(z)));
  }
}

// w_k = a_k z^(n_k) for the family's exponents n_k = 2^k - 1.
std::vector<std::complex<double>> term_values(const RademacherFamily& fam,
                                              std::complex<double> z) {
  std::vector<std::complex<double>> w;
  w.reserve(fam.base.coeffs.size());
  std::complex<double> pw = 1.0;  // z^(2^k - 1)
  for (double a : fam.base.coeffs) {
    w.push_back(a * pw);
    pw = pw * pw * z;
    if (std::norm(pw) < 1e-300) pw = 0.0;
  }
  return w;
}

double modulus_power_2p(std::complex<double> v, double p) {
  const double n = std::norm(v);  // |v|^2
  if (p == 1.0) return n;
  if (p == 2.0) return n * n;
  return std::pow(n, p);
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Pattern i -> signs from the Gray code g = i ^ (i >> 1); bit set means -1.
std::complex<double> signed_sum(const std::vector<std::complex<double>>& w,
                                std::uint64_t gray) {
  std::complex<double> s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    s += (gray >> k) & 1u ? -w[k] : w[k];
  }
  return s;
}

// splitmix64, used to derive independent per-block generator states.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

int rademacher(int k, double y) {
  if (k < 0) throw domain_error("rademacher index must be >= 0");
  if (!(y >= 0.0) || y > 1.0) {
    throw domain_error("rademacher argument outside [0,1]: y=" +
                       format_double(y));
  }
  // sign sin(2^(k+1) pi y) = sign sin(2 pi frac(2^k y)); frac and the
  // comparison are exact in doubles, unlike the large-argument sine.
  const double frac = std::fmod(std::ldexp(y, k), 1.0);
  return frac <= 0.5 ? 1 : -1;
}

RademacherFamily::RademacherFamily(GapSeries base_series)
    : base(std::move(base_series)) {
  if (base.rule != ExponentRule::PowersOfTwoMinusOne) {
    throw precondition_error(
        "Rademacher family requires the exponent rule 2^k-1");
  }
  if (base.coeffs.empty()) {
    throw precondition_error("Rademacher family requires at least one term");
  }
}

RademacherFamily make_family(const Gauge& g, int K_order) {
  return RademacherFamily(
      build_extremal(g, K_order, ExponentRule::PowersOfTwoMinusOne));
}

std::complex<double> family_eval(const RademacherFamily& fam, double y,
                                 std::complex<double> z) {
  require_disk(z);
  const auto w = term_values(fam, z);
  std::complex<double> sum = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sum += static_cast<double>(rademacher(static_cast<int>(k), y)) * w[k];
  }
  return sum;
}

double moment_integral_exact(const RademacherFamily& fam,
                             std::complex<double> z, double p) {
  require_disk(z);
  if (!(p > 0.0)) throw domain_error("moment integral requires p > 0");
  const int K = fam.terms();
  if (K > kExactEnumerationMaxTerms) {
    throw resource_error(
        "exact enumeration limited to " +
        std::to_string(kExactEnumerationMaxTerms) + " terms (requested " +
        std::to_string(K) + "); use montecarlo mode");
  }
  const auto w = term_values(fam, z);
  const std::uint64_t total = std::uint64_t{1} << K;

  // Fixed chunking (independent of the worker count) keeps the fold order
  // and hence the result bit-stable.
  const int chunk_bits = K > 12 ? 6 : 0;
  const std::uint64_t n_chunks = std::uint64_t{1} << chunk_bits;
  const std::uint64_t per_chunk = total >> chunk_bits;

  std::vector<double> partial(n_chunks, 0.0);
  for_each_chunk(static_cast<int>(n_chunks), [&](int c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * per_chunk;
    const std::uint64_t end = begin + per_chunk;
    std::uint64_t gray = begin ^ (begin >> 1);
    std::complex<double> s = signed_sum(w, gray);
    KahanSum acc;
    acc.add(modulus_power_2p(s, p));
    for (std::uint64_t i = begin + 1; i < end; ++i) {
      const int flip = std::countr_zero(i);
      const std::uint64_t bit = std::uint64_t{1} << flip;
      gray ^= bit;
      if ((i & 0xFFu) == 0) {
        s = signed_sum(w, gray);  // periodic re-anchor against fp drift
      } else {
        // sign at position flip changed; adjust the running sum
        s += (gray & bit) ? -2.0 * w[flip] : 2.0 * w[flip];
      }
      acc.add(modulus_power_2p(s, p));
    }
    partial[static_cast<std::size_t>(c)] = acc.sum;
  });

  KahanSum fold;
  for (double v : partial) fold.add(v);
  return fold.sum / static_cast<double>(total);
}

MomentResult moment_integral_mc(const RademacherFamily& fam,
                                std::complex<double> z, double p,
                                std::uint64_t seed, std::int64_t samples) {
  require_disk(z);
  if (!(p > 0.0)) throw domain_error("moment integral requires p > 0");
  if (samples <= 0) throw domain_error("montecarlo mode requires samples > 0");
  const auto w = term_values(fam, z);
  const int K = fam.terms();

  constexpr std::int64_t kBlock = 4096;
  const std::int64_t n_blocks = (samples + kBlock - 1) / kBlock;

  std::vector<double> block_sum(static_cast<std::size_t>(n_blocks), 0.0);
  std::vector<double> block_sumsq(static_cast<std::size_t>(n_blocks), 0.0);
  for_each_chunk(static_cast<int>(n_blocks), [&](int b) {
    // one generator per block, derived from (seed, block index)
    std::uint64_t state = seed ^ (0xA5A5A5A5DEADBEEFull +
                                  static_cast<std::uint64_t>(b));
    KahanSum acc, accsq;
    const std::int64_t begin = static_cast<std::int64_t>(b) * kBlock;
    const std::int64_t end = std::min(begin + kBlock, samples);
    for (std::int64_t i = begin; i < end; ++i) {
      // 53-bit uniform y in [0,1); the sign pattern comes from its bits
      const double y =
          static_cast<double>(splitmix64(state) >> 11) * 0x1p-53;
      std::complex<double> s = 0.0;
      for (int k = 0; k < K; ++k) {
        s += static_cast<double>(rademacher(k, y)) * w[static_cast<size_t>(k)];
      }
      const double v = modulus_power_2p(s, p);
      acc.add(v);
      accsq.add(v * v);
    }
    block_sum[static_cast<std::size_t>(b)] = acc.sum;
    block_sumsq[static_cast<std::size_t>(b)] = accsq.sum;
  });

  KahanSum sum, sumsq;
  for (double v : block_sum) sum.add(v);
  for (double v : block_sumsq) sumsq.add(v);
  const double n = static_cast<double>(samples);
  const double mean = sum.sum / n;
  const double var = std::max(0.0, sumsq.sum / n - mean * mean);
  MomentResult out;
  out.value = mean;
  out.std_error = std::sqrt(var / n);
  out.mode = MomentMode::montecarlo(seed, samples);
  return out;
}

MomentResult moment_integral(const RademacherFamily& fam,
                             std::complex<double> z, double p,
                             const MomentMode& mode) {
  if (mode.kind == MomentMode::Kind::Exact) {
    MomentResult out;
    out.value = moment_integral_exact(fam, z, p);
    out.mode = mode;
    return out;
  }
  return moment_integral_mc(fam, z, p, mode.seed, mode.samples);
}

double moment_closed_form_p1(const RademacherFamily& fam,
                             std::complex<double> z) {
  require_disk(z);
  const auto w = term_values(fam, z);
  double sum = 0.0;
  for (auto v : w) sum += std::norm(v);
  return sum;
}

}  // namespace blochlab
