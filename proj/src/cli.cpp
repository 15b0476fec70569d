#include "blochlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "blochlab/applications.hpp"
#include "blochlab/gauge.hpp"
#include "blochlab/lacunary.hpp"
#include "blochlab/means.hpp"
#include "blochlab/numfmt.hpp"
#include "blochlab/report.hpp"
#include "blochlab/stochastic.hpp"
#include "blochlab/verify.hpp"
#include "blochlab/version.hpp"

namespace blochlab {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["command"] = cfg.command;
  j["gauge"] = cfg.gauge;
  j["omega2"] = cfg.omega2;
  j["measure"] = cfg.measure;
  j["map"] = cfg.map;
  j["p"] = cfg.p;
  j["q"] = cfg.q;
  j["m_min"] = cfg.m_min;
  j["m_max"] = cfg.m_max;
  j["angles"] = cfg.angles;
  j["K"] = cfg.K;
  j["seed"] = cfg.seed;
  j["mode"] = cfg.mode;
  j["samples"] = cfg.samples;
  j["out"] = cfg.out;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << text;
}

void emit(const RunConfig& cfg, const ordered_json& report_body,
          const std::string& csv) {
  ordered_json doc;
  doc["artifact"] = {{"name", kArtifactName}, {"version", kArtifactVersion}};
  doc["command"] = cfg.command;
  doc["config"] = config_echo(cfg);
  doc["report"] = report_body;

  const std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  write_text(dir / (cfg.command + ".json"), doc.dump(2) + "\n");
  write_text(dir / (cfg.command + ".csv"), csv);
}

MomentMode moment_mode(const RunConfig& cfg) {
  if (cfg.mode == "exact") return MomentMode::exact();
  if (cfg.mode == "mc") return MomentMode::montecarlo(cfg.seed, cfg.samples);
  throw domain_error("mode must be 'exact' or 'mc'; got '" + cfg.mode + "'");
}

std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<double> seeded_rays(std::uint64_t seed, int count) {
  std::vector<double> rays;
  std::uint64_t state = seed;
  for (int i = 0; i < count; ++i) {
    const double u =
        static_cast<double>(splitmix64_step(state) >> 11) * 0x1p-53;
    rays.push_back(2.0 * std::numbers::pi * u);
  }
  return rays;
}

int exit_for(const EstimateReport& rep) { return rep.holds ? 0 : 2; }

// ---- per-command drivers --------------------------------------------------

int run_gauge_report(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  const auto reg = check_regularity(g, dyadic_grid(0, cfg.m_max));
  const auto dich = classify_dichotomy(g);

  ordered_json body;
  body["gauge"] = g.dsl();
  auto& conditions = body["regularity"]["conditions"] = ordered_json::array();
  for (const auto& c : reg.conditions) {
    ordered_json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    if (!c.pass) {
      row["first_violation"] = {{"x_lo", c.x_lo},
                                {"x_hi", c.x_hi},
                                {"value_lo", c.value_lo},
                                {"value_hi", c.value_hi}};
    }
    conditions.push_back(std::move(row));
  }
  body["regularity"]["all_pass"] = reg.all_pass;
  body["dichotomy"] = {
      {"kind", dich.kind == Dichotomy::Convergent ? "Convergent" : "Divergent"},
      {"limit", dich.limit},
      {"reason", dich.reason}};

  std::vector<RatioPoint> rows;
  auto& integrals = body["integrals"] = ordered_json::array();
  for (int m = 1; m <= cfg.m_max; ++m) {
    const double x = std::ldexp(1.0, -m);
    const auto closed = quadratic_integral(g, x);
    const auto quad = quadratic_integral_quadrature(g, x);
    ordered_json row;
    row["x"] = x;
    row["I"] = closed.value_I;
    row["Phi"] = closed.value_Phi;
    row["I_quadrature"] = quad.value_I;
    row["quad_error_bound"] = quad.abs_error_bound;
    row["abs_difference"] = std::fabs(closed.value_I - quad.value_I);
    integrals.push_back(std::move(row));
    RatioPoint pt;
    pt.r = x;
    pt.lhs = closed.value_I;
    pt.rhs = quad.value_I;
    pt.ratio = quad.value_I == 0.0 ? 1.0 : closed.value_I / quad.value_I;
    rows.push_back(pt);
  }
  emit(cfg, body, ratio_points_csv(rows));
  return reg.all_pass ? 0 : 2;
}

int run_extremal_build(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  const double r_max = 1.0 - std::ldexp(1.0, -cfg.m_max);
  const int K = cfg.K >= 0 ? cfg.K
                           : default_truncation_order(
                                 g, r_max, ExponentRule::PowersOfTwo);
  const GapSeries s = build_extremal(g, K, ExponentRule::PowersOfTwo);

  ordered_json body;
  body["series"] = to_json(s);
  body["l2_membership"] = [&] {
    const auto l2 = l2_membership(s);
    ordered_json j;
    j["kind"] = l2.kind == L2Class::InL2 ? "InL2" : "NotInL2";
    j["sum"] = l2.sum;
    j["reason"] = l2.reason;
    return j;
  }();

  std::vector<RatioPoint> rows;
  for (int k = 0; k <= s.order(); ++k) {
    RatioPoint pt;  // columns: scale 2^-k, a_k as ratio, k and n_k as sides
    pt.r = std::ldexp(1.0, -k);
    pt.lhs = static_cast<double>(k);
    pt.rhs = static_cast<double>(s.exponent(k));
    pt.ratio = s.coeffs[static_cast<std::size_t>(k)];
    rows.push_back(pt);
  }
  emit(cfg, body, ratio_points_csv(rows));
  return 0;
}

int run_verify_lemma31(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  auto rep = verify_lemma31(g, cfg.m_max);
  emit(cfg, to_json(rep), to_csv(rep));
  return exit_for(rep);
}

int run_verify_reverse(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  auto rep = verify_reverse(g, cfg.p, cfg.m_max, cfg.K, moment_mode(cfg));
  emit(cfg, to_json(rep), to_csv(rep));
  return exit_for(rep);
}

int run_verify_phi_doubling(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  auto rep = verify_phi_doubling(g, uniform_open_grid(2.0 / 3.0, 1.0, 1000));
  emit(cfg, to_json(rep), to_csv(rep));
  return exit_for(rep);
}

GapSeries series_for(const RunConfig& cfg, const Gauge& g) {
  const double r_max = 1.0 - std::ldexp(1.0, -cfg.m_max);
  const int K = cfg.K >= 0 ? cfg.K
                           : default_truncation_order(
                                 g, r_max, ExponentRule::PowersOfTwo);
  return build_extremal(g, K, ExponentRule::PowersOfTwo);
}

int run_verify_direct(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  const RadialGrid grid(cfg.m_min, cfg.m_max, cfg.angles);
  auto rep = verify_direct(g, series_for(cfg, g), cfg.p, grid);
  emit(cfg, to_json(rep), to_csv(rep));
  return exit_for(rep);
}

int run_verify_hardy_bloch(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  const RadialGrid grid(cfg.m_min, cfg.m_max, cfg.angles);
  auto rep = verify_hardy_bloch(g, series_for(cfg, g), cfg.p, grid);
  emit(cfg, to_json(rep), to_csv(rep));
  return exit_for(rep);
}

int run_divergence_demo(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  std::vector<double> radii;
  for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
    radii.push_back(1.0 - std::ldexp(1.0, -m));
  }
  const auto rays = seeded_rays(cfg.seed, 8);
  const auto demo = divergence_demo(g, rays, radii);

  ordered_json body;
  body["l2_membership"] = {
      {"kind", demo.l2.kind == L2Class::InL2 ? "InL2" : "NotInL2"},
      {"sum", demo.l2.sum},
      {"reason", demo.l2.reason}};
  body["verdict"] = demo.l2.kind == L2Class::InL2
                        ? "coefficients in l2: radial limits a.e."
                        : "coefficients not in l2: no radial limits a.e.";
  body["series"] = to_json(demo.series);
  body["window_size"] = demo.window_size;
  body["radii"] = demo.radii;
  auto& ends = body["window_ends"] = ordered_json::array();
  for (int e : demo.window_ends) ends.push_back(e);
  body["osc_by_depth"] = demo.osc_by_depth;
  auto& rays_json = body["rays"] = ordered_json::array();
  std::vector<RatioPoint> rows;
  for (const auto& ray : demo.rays) {
    ordered_json rj;
    rj["theta"] = ray.theta;
    rj["osc"] = ray.osc;
    rj["osc_re"] = ray.osc_re;
    rj["osc_im"] = ray.osc_im;
    rays_json.push_back(std::move(rj));
    for (std::size_t wi = 0; wi < demo.window_ends.size(); ++wi) {
      RatioPoint pt;
      pt.r = demo.radii[static_cast<std::size_t>(demo.window_ends[wi])];
      pt.theta = ray.theta;
      pt.lhs = ray.osc_re[wi];
      pt.rhs = ray.osc_im[wi];
      pt.ratio = ray.osc[wi];
      rows.push_back(pt);
    }
  }
  emit(cfg, body, ratio_points_csv(rows));
  return 0;
}

int run_carleson(const RunConfig& cfg) {
  const Gauge g = Gauge::parse(cfg.gauge);
  if (cfg.measure.empty()) {
    throw domain_error("carleson requires --measure");
  }
  const RadialMeasure rho = RadialMeasure::parse(cfg.measure);
  const auto cls = carleson_classify(g, cfg.q, rho);

  const int witness = cfg.K >= 1 ? std::min(cfg.K, 12) : 10;
  const int probe_depth = std::min(cfg.m_max, 14);
  const auto probe = carleson_necessity_probe(g, cfg.q, rho, witness,
                                              probe_depth, cfg.angles);

  ordered_json body;
  body["measure"] = rho.dsl();
  body["classification"] = {{"finite", cls.finite},
                            {"value", cls.value},
                            {"error_bound", cls.error_bound},
                            {"reason", cls.reason}};
  auto& parts = body["classification"]["partials"] = ordered_json::array();
  for (auto [m, v] : cls.partials) {
    parts.push_back(ordered_json{{"m", m}, {"value", v}});
  }
  body["necessity_probe"] = {
      {"family_terms", probe.family_terms},
      {"final_partial", probe.final_partial},
      {"bounded_evidence", probe.bounded_evidence},
      {"ratio_to_classify", probe.ratio_to_classify}};
  auto& pparts = body["necessity_probe"]["partials"] = ordered_json::array();
  for (auto [m, v] : probe.partials) {
    pparts.push_back(ordered_json{{"m", m}, {"value", v}});
  }

  std::vector<RatioPoint> rows;
  for (auto [m, v] : cls.partials) {
    RatioPoint pt;
    pt.r = 1.0 - std::ldexp(1.0, -m);
    pt.lhs = v;
    pt.rhs = cls.value;
    pt.ratio = cls.finite && cls.value > 0.0 ? v / cls.value : v;
    rows.push_back(pt);
  }
  emit(cfg, body, ratio_points_csv(rows));
  return 0;
}

int run_hyperbolic_audit(const RunConfig& cfg) {
  if (cfg.map.empty()) throw domain_error("hyperbolic-audit requires --map");
  if (cfg.omega2.empty()) {
    throw domain_error("hyperbolic-audit requires --omega2 (the Omega gauge)");
  }
  const SelfMap phi_map = SelfMap::parse(cfg.map);
  const Gauge omega = Gauge::parse(cfg.gauge);
  const Gauge Omega = Gauge::parse(cfg.omega2);
  const RadialGrid grid(cfg.m_min, cfg.m_max, cfg.angles);
  const auto audit = cor43_audit(phi_map, omega, Omega, cfg.p, grid);

  ordered_json body;
  body["hypothesis"] = to_json(audit.hypothesis);
  body["hypothesis_holds"] = audit.hypothesis_holds;
  body["skipped_angle_samples"] = audit.skipped_angle_samples;
  if (audit.profile_computed) {
    body["phi_integral_sup"] = audit.phi_sup;
    auto& prof = body["phi_integral_profile"] = ordered_json::array();
    for (const auto& pt : audit.phi_profile) {
      prof.push_back(ordered_json{{"r", pt.r}, {"integral", pt.lhs}});
    }
  }
  emit(cfg, body, to_csv(audit.hypothesis));
  return audit.hypothesis_holds ? 0 : 2;
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    if (cfg.command == "gauge-report") return run_gauge_report(cfg);
    if (cfg.command == "extremal-build") return run_extremal_build(cfg);
    if (cfg.command == "verify-lemma31") return run_verify_lemma31(cfg);
    if (cfg.command == "verify-reverse") return run_verify_reverse(cfg);
    if (cfg.command == "verify-direct") return run_verify_direct(cfg);
    if (cfg.command == "verify-hardy-bloch") return run_verify_hardy_bloch(cfg);
    if (cfg.command == "verify-phi-doubling") {
      return run_verify_phi_doubling(cfg);
    }
    if (cfg.command == "divergence-demo") return run_divergence_demo(cfg);
    if (cfg.command == "carleson") return run_carleson(cfg);
    if (cfg.command == "hyperbolic-audit") return run_hyperbolic_audit(cfg);
    std::cerr << "unknown command: " << cfg.command << "\n";
    return 1;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const precondition_error& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 1;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 1;
  } catch (const numeric_error& e) {
    std::cerr << "numeric error: " << e.what()
              << " (partial value " << format_double(e.partial) << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace blochlab
