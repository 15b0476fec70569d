#include <doctest.h>

#include <cmath>
#include <complex>

#include "blochlab/means.hpp"

using namespace blochlab;
using cplx = std::complex<double>;

namespace {

Evaluable identity_map() {
  Evaluable e;
  e.value = [](cplx z) { return z; };
  e.radial_derivative = [](cplx z) { return z; };  // R z = z
  e.nonnegative_coefficients = true;
  e.label = "z";
  return e;
}

Evaluable constant_map(cplx c) {
  Evaluable e;
  e.value = [c](cplx) { return c; };
  e.radial_derivative = [](cplx) { return cplx(0.0); };
  e.nonnegative_coefficients = c.imag() == 0.0 && c.real() >= 0.0;
  e.label = "const";
  return e;
}

// Orthogonality oracle: M_2(f, r)^2 = sum a_k^2 r^(2 n_k) for gap series.
double m2_oracle(const GapSeries& s, double r) {
  double sum = 0.0;
  for (int k = 0; k <= s.order(); ++k) {
    const double a = s.coeffs[static_cast<std::size_t>(k)];
    sum += a * a * std::pow(r, 2.0 * static_cast<double>(s.exponent(k)));
  }
  return std::sqrt(sum);
}

}  // namespace

TEST_CASE("radial grid validation") {
  CHECK_THROWS_AS(RadialGrid(2, 1, 64), domain_error);
  CHECK_THROWS_AS(RadialGrid(-1, 4, 64), domain_error);
  CHECK_THROWS_AS(RadialGrid(1, 4, 48), domain_error);  // not a power of two
  CHECK_THROWS_AS(RadialGrid(1, 4, 8), domain_error);   // < 16

  const RadialGrid g(1, 5, 16);
  const auto radii = g.radii();
  REQUIRE(radii.size() == 5);
  CHECK(radii.front() == 0.5);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    CHECK(radii[i] < radii[i + 1]);
    CHECK(radii[i + 1] < 1.0);
  }
}

TEST_CASE("integral means of elementary functions") {
  const auto mz = integral_mean(identity_map(), 2.0, 0.5, 16);
  CHECK(mz.value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mz.converged);

  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    for (double r : {0.1, 0.5, 0.9}) {
      CHECK(integral_mean(constant_map(1.0), p, r, 16).value ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  CHECK_THROWS_AS(integral_mean(identity_map(), 2.0, 0.0, 16), domain_error);
  CHECK_THROWS_AS(integral_mean(identity_map(), 2.0, 1.0, 16), domain_error);
  CHECK_THROWS_AS(integral_mean(identity_map(), 0.0, 0.5, 16), domain_error);
}

TEST_CASE("gap series means match the orthogonality closed form") {
  const GapSeries s = build_extremal(Gauge::constant(), 10,
                                     ExponentRule::PowersOfTwo);
  const Evaluable f = as_evaluable(s);
  for (double r : {0.3, 0.5, 0.75}) {
    const auto m = integral_mean(f, 2.0, r, 64);
    CHECK(std::fabs(m.value - m2_oracle(s, r)) < 1e-8);
  }
  const auto at_half = integral_mean(f, 2.0, 0.5, 64);
  CHECK(at_half.value == doctest::Approx(std::sqrt(0.31642151)).epsilon(1e-6));
}

TEST_CASE("means are nondecreasing in r") {
  const GapSeries s = build_extremal(Gauge::power(0.5), 12,
                                     ExponentRule::PowersOfTwo);
  const Evaluable f = as_evaluable(s);
  for (double p : {1.0, 2.0}) {
    double prev = 0.0;
    for (int i = 1; i <= 12; ++i) {
      const double r = i / 13.0;
      const double v = integral_mean(f, p, r, 64).value;
      CHECK(v >= prev - 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("Bloch norm estimates") {
  const Gauge c = Gauge::constant();
  const RadialGrid grid(1, 12, 64);

  const auto nz = bloch_norm_estimate(identity_map(), c, grid);
  CHECK(nz.value == doctest::Approx(0.25).epsilon(1e-14));  // max r(1-r)
  CHECK(nz.argmax_r == 0.5);

  CHECK(bloch_norm_estimate(constant_map(cplx(0.0, -2.0)), c, grid).value ==
        doctest::Approx(2.0).epsilon(1e-15));

  // fine-grid oracle: refining the grid moves the estimate only slightly
  const GapSeries s = build_extremal(Gauge::constant(), 30,
                                     ExponentRule::PowersOfTwo);
  const Evaluable f = as_evaluable(s);
  const double n20 = bloch_norm_estimate(f, c, RadialGrid(1, 20, 64)).value;
  const double n24 = bloch_norm_estimate(f, c, RadialGrid(1, 24, 64)).value;
  CHECK(std::isfinite(n20));
  CHECK(n24 >= n20 - 1e-14);  // max over a superset
  CHECK(std::fabs(n24 - n20) / n20 < 0.02);
}

TEST_CASE("angle sweep handles signed coefficients") {
  GapSeries s;
  s.rule = ExponentRule::PowersOfTwo;
  s.coeffs = {1.0, -0.5, 0.25};
  const Evaluable f = as_evaluable(s);
  CHECK_FALSE(f.nonnegative_coefficients);
  const auto est = bloch_norm_estimate(f, Gauge::constant(), RadialGrid(1, 6, 64));
  CHECK(est.value > 0.0);
  // sweep maximum dominates the theta = 0 slice
  const double at_zero = std::abs(f.radial_derivative(cplx(est.argmax_r))) *
                         (1.0 - est.argmax_r);
  CHECK(est.value >= at_zero - 1e-12);
}

TEST_CASE("Hardy-Bloch norm is dominated by the Bloch norm") {
  const RadialGrid grid(1, 10, 64);
  const Gauge c = Gauge::constant();
  const GapSeries s = build_extremal(Gauge::constant(), 16,
                                     ExponentRule::PowersOfTwo);
  const struct {
    Evaluable f;
  } cases[] = {{identity_map()}, {constant_map(1.5)}, {as_evaluable(s)}};
  for (const auto& [f] : cases) {
    for (double p : {1.0, 2.0}) {
      const double hb = hardy_bloch_norm_estimate(f, c, p, grid).value;
      const double bl = bloch_norm_estimate(f, c, grid).value;
      CHECK(hb <= bl * (1.0 + 1e-9) + 1e-12);
    }
  }

  // f(z) = z has |Rf| = r on every circle: the two estimates coincide
  CHECK(hardy_bloch_norm_estimate(identity_map(), c, 2.0, grid).value ==
        doctest::Approx(0.25).epsilon(1e-10));
}
