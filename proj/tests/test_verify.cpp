#include <doctest.h>

#include <cmath>

#include "blochlab/verify.hpp"

using namespace blochlab;

namespace {

// brute-force ratio scan oracle with direct power sums
double lemma31_min_oracle(const Gauge& g, int m_max) {
  double best = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= m_max; ++m) {
    const double r = 1.0 - std::ldexp(1.0, -m);
    double num = 0.0;
    for (int k = 0; k <= 60; ++k) {
      const double w = g(std::ldexp(1.0, -k));
      num += w * w * std::pow(r, std::ldexp(1.0, k) - 1.0);
    }
    best = std::min(best, num / phi(g, std::ldexp(1.0, -m)));
  }
  return best;
}

}  // namespace

TEST_CASE("lemma31 certification") {
  const Gauge g = Gauge::constant();
  const auto rep = verify_lemma31(g, 20);
  CHECK(rep.holds);
  CHECK(rep.sense == Extremum::Min);
  CHECK(rep.extremal_constant > 0.0);
  CHECK(rep.extremal_constant ==
        doctest::Approx(lemma31_min_oracle(g, 20)).epsilon(1e-10));

  // r = 0 row: Psi(0)/Phi(1) = omega(1)^2 = 1
  CHECK(rep.points.front().r == 0.0);
  CHECK(rep.points.front().ratio == doctest::Approx(1.0).epsilon(1e-15));

  // proof chain passes everywhere and is reported per depth m >= 1
  CHECK(rep.checks.size() == 20);
  for (const auto& c : rep.checks) CHECK(c.pass);

  // min over a larger set cannot grow, and stays within 5%
  const auto rep24 = verify_lemma31(g, 24);
  CHECK(rep24.extremal_constant <= rep.extremal_constant + 1e-15);
  CHECK(std::fabs(rep24.extremal_constant - rep.extremal_constant) /
            rep.extremal_constant <
        0.05);

  for (const Gauge& gg :
       {Gauge::power(0.5), Gauge::power(0.25), Gauge::logarithmic(-0.5)}) {
    const auto r = verify_lemma31(gg, 20);
    CHECK(r.holds);
    CHECK(r.extremal_constant > 0.0);
    CHECK(r.extremal_constant ==
          doctest::Approx(lemma31_min_oracle(gg, 20)).epsilon(1e-9));
  }
}

TEST_CASE("reverse estimate at p = 1 matches the psi closed form") {
  const Gauge g = Gauge::power(0.5);
  const auto rep = verify_reverse(g, 1.0, 20);
  CHECK(rep.holds);
  const double tau = rep.extremal_constant;
  CHECK(tau > 0.0);

  const double cnorm = rep.provenance.at("normalization").get<double>();
  for (const auto& pt : rep.points) {
    const double r = pt.r;
    const double expected =
        psi(g, r * r).value / (cnorm * cnorm * phi(g, 1.0 - r));
    CHECK(std::fabs(pt.ratio - expected) < 1e-10);
  }

  // z = 0 row has moment a_0^2 = 1 and Phi(1) = 1
  CHECK(rep.points.front().lhs ==
        doctest::Approx(1.0 / (cnorm * cnorm)).epsilon(1e-13));
}

TEST_CASE("reverse estimate at p = 2 via exact enumeration") {
  const auto rep = verify_reverse(Gauge::constant(), 2.0, 12, 14);
  CHECK(rep.holds);
  CHECK(rep.extremal_constant > 0.0);
  CHECK(rep.config.at("K") == 14);
  CHECK(rep.provenance.at("p1_route") == "exact");
}

TEST_CASE("reverse estimate names the violated hypothesis") {
  CHECK_THROWS_WITH_AS(verify_reverse(Gauge::power(0.5, 0.25), 1.0, 10),
                       doctest::Contains("omega(t)/t^eps"),
                       precondition_error);
}

TEST_CASE("phi doubling holds with factor 4 on (2/3, 1)") {
  const auto grid = uniform_open_grid(2.0 / 3.0, 1.0, 1000);
  REQUIRE(grid.size() == 1000);
  CHECK(grid.front() > 2.0 / 3.0);
  CHECK(grid.back() < 1.0);

  for (const Gauge& g :
       {Gauge::constant(), Gauge::power(0.25), Gauge::power(0.5),
        Gauge::power(0.75), Gauge::logarithmic(-0.5)}) {
    const auto rep = verify_phi_doubling(g, grid);
    CHECK(rep.holds);
    CHECK(rep.extremal_constant <= 4.0);
    // Phi decreasing and 1-r < 1-r^2 force ratio >= 1
    for (const auto& pt : rep.points) CHECK(pt.ratio >= 1.0 - 1e-14);
  }

  // closed-form oracle at r = 0.9 for the constant gauge
  const auto rep = verify_phi_doubling(Gauge::constant(), {0.9});
  const double expected =
      (1.0 + std::log(10.0)) / (1.0 + std::log(1.0 / 0.19));
  CHECK(rep.points[0].ratio == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rep.points[0].ratio <= 4.0);

  CHECK_THROWS_AS(verify_phi_doubling(Gauge::constant(), {0.5}), domain_error);
}

TEST_CASE("direct estimate for the monomial") {
  // f(z) = z: M_p = r, measured norm = 1/4 at r = 1/2
  GapSeries f;
  f.rule = ExponentRule::PowersOfTwo;
  f.coeffs = {1.0};
  const Gauge g = Gauge::constant();
  const RadialGrid grid(1, 8, 64);
  const auto rep = verify_direct(g, f, 2.0, grid);
  CHECK(rep.holds);
  for (const auto& pt : rep.points) {
    const double expected =
        pt.r / (0.25 * std::sqrt(phi(g, 1.0 - pt.r)));
    CHECK(pt.ratio == doctest::Approx(expected).epsilon(1e-9));
    CHECK(pt.ratio <= 4.0);
  }
  // inner inequality: int_0^r t^2 (r-t) dt = r^4/12 <= (1/16) Phi(1-r)
  for (const auto& c : rep.checks) {
    CHECK(c.pass);
    const double r = c.r;
    CHECK(c.lhs == doctest::Approx(r * r * r * r / 12.0).epsilon(1e-7));
  }
}

TEST_CASE("direct estimate for the extremal series is grid-stable") {
  const Gauge g = Gauge::constant();
  const GapSeries f = build_extremal(
      g, default_truncation_order(g, 1.0 - std::ldexp(1.0, -14),
                                  ExponentRule::PowersOfTwo),
      ExponentRule::PowersOfTwo);
  const auto r12 = verify_direct(g, f, 2.0, RadialGrid(1, 12, 256));
  const auto r14 = verify_direct(g, f, 2.0, RadialGrid(1, 14, 256));
  CHECK(r12.holds);
  CHECK(r14.holds);
  CHECK(std::isfinite(r12.extremal_constant));
  CHECK(std::fabs(r14.extremal_constant - r12.extremal_constant) /
            r12.extremal_constant <
        0.10);
}

TEST_CASE("constant functions satisfy the direct estimate trivially") {
  GapSeries f;
  f.rule = ExponentRule::PowersOfTwoMinusOne;  // exponent 0: f == c
  f.coeffs = {2.5};
  const auto rep = verify_direct(Gauge::power(0.5), f, 1.0, RadialGrid(1, 6, 64));
  CHECK(rep.holds);
  for (const auto& pt : rep.points) {
    // M_p = |c| = measured norm, Phi^(1/2) >= 1
    CHECK(pt.ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("hardy-bloch estimate requires p >= 2") {
  GapSeries f;
  f.rule = ExponentRule::PowersOfTwo;
  f.coeffs = {1.0};
  CHECK_THROWS_AS(
      verify_hardy_bloch(Gauge::constant(), f, 1.5, RadialGrid(1, 4, 64)),
      precondition_error);
}

TEST_CASE("hardy-bloch estimate for monomial and extremal series") {
  const Gauge g = Gauge::constant();
  GapSeries mono;
  mono.rule = ExponentRule::PowersOfTwo;
  mono.coeffs = {1.0};
  const auto rep = verify_hardy_bloch(g, mono, 2.0, RadialGrid(1, 6, 64));
  CHECK(rep.holds);
  for (const auto& pt : rep.points) {
    // |Rf| is radial, so the Hardy-Bloch norm is again 1/4
    const double expected = pt.r / (0.25 * std::sqrt(phi(g, 1.0 - pt.r)));
    CHECK(pt.ratio == doctest::Approx(expected).epsilon(1e-8));
  }
  for (const auto& c : rep.checks) CHECK(c.pass);

  const GapSeries f = build_extremal(g, 16, ExponentRule::PowersOfTwo);
  const auto rep2 = verify_hardy_bloch(g, f, 2.0, RadialGrid(1, 8, 64));
  CHECK(rep2.holds);
  CHECK(std::isfinite(rep2.extremal_constant));

  GapSeries constant;  // exponent 0: f == c, so Rf == 0
  constant.rule = ExponentRule::PowersOfTwoMinusOne;
  constant.coeffs = {1.75};
  const auto rep3 = verify_hardy_bloch(g, constant, 2.0, RadialGrid(1, 5, 64));
  CHECK(rep3.holds);
  for (const auto& pt : rep3.points) CHECK(pt.ratio <= 1.0 + 1e-12);
}

TEST_CASE("divergence demo oscillation statistics") {
  std::vector<double> radii;
  for (int m = 1; m <= 20; ++m) radii.push_back(1.0 - std::ldexp(1.0, -m));
  const std::vector<double> rays{0.4, 1.3, 2.2, 3.7, 5.1};

  const auto conv = divergence_demo(Gauge::power(0.5), rays, radii);
  CHECK(conv.l2.kind == L2Class::InL2);
  REQUIRE(conv.osc_by_depth.size() == 5);
  for (std::size_t i = 0; i + 1 < conv.osc_by_depth.size(); ++i) {
    CHECK(conv.osc_by_depth[i] > conv.osc_by_depth[i + 1]);
  }

  const auto div = divergence_demo(Gauge::constant(), rays, radii);
  CHECK(div.l2.kind == L2Class::NotInL2);
  // empirical: oscillation stays well away from zero at the sampled depth
  CHECK(div.osc_by_depth.back() > 0.05);

  const auto single = divergence_demo(Gauge::constant(), rays, {0.5});
  for (const auto& ray : single.rays) {
    REQUIRE(ray.osc.size() == 1);
    CHECK(ray.osc[0] == 0.0);
  }
}

TEST_CASE("reports are internally consistent") {
  const auto rep = verify_lemma31(Gauge::power(0.5), 10);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : rep.points) best = std::min(best, pt.ratio);
  CHECK(rep.extremal_constant == best);
  CHECK(rep.verdict.find("holds-with-constant") == 0);

  const auto j = to_json(rep);
  CHECK(j.at("name") == "lemma31.psi-vs-phi");
  CHECK(j.at("ratios").size() == rep.points.size());
  CHECK(j.at("holds") == true);

  const std::string csv = to_csv(rep);
  CHECK(csv.rfind("r,theta,ratio,lhs,rhs\n", 0) == 0);
  // header + one row per point
  CHECK(std::count(csv.begin(), csv.end(), '\n') ==
        static_cast<long>(rep.points.size()) + 1);
}
