#include <CLI11.hpp>

#include "blochlab/cli.hpp"
#include "blochlab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for weighted Bloch spaces on the unit "
               "disk: extremal gap series, integral estimates, Carleson "
               "classification and self-map audits."};
  app.set_version_flag("--version", std::string(blochlab::kArtifactVersion));
  app.require_subcommand(1);

  blochlab::RunConfig cfg;
  const auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--gauge", cfg.gauge, "gauge DSL: const, pow:A, log:B");
    sub->add_option("--omega2", cfg.omega2, "second gauge (Omega) DSL");
    sub->add_option("--measure", cfg.measure,
                    "radial measure DSL: power:B, atom:R:M, mix:[...]");
    sub->add_option("--map", cfg.map,
                    "self-map DSL: scale:C, moebius:A, blaschke:[..], "
                    "atomic:C");
    sub->add_option("--p", cfg.p, "moment/mean exponent p");
    sub->add_option("--q", cfg.q, "Carleson exponent q");
    sub->add_option("--mmin", cfg.m_min, "smallest dyadic depth");
    sub->add_option("--mmax", cfg.m_max, "largest dyadic depth");
    sub->add_option("--angles", cfg.angles, "angles per circle (power of 2)");
    sub->add_option("--K", cfg.K, "series truncation order (-1: automatic)");
    sub->add_option("--seed", cfg.seed, "seed for randomized modes");
    sub->add_option("--mode", cfg.mode, "moment mode: exact | mc");
    sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    sub->add_option("--out", cfg.out, "report output directory");
  };

  for (const char* name :
       {"gauge-report", "extremal-build", "verify-lemma31", "verify-reverse",
        "verify-direct", "verify-hardy-bloch", "verify-phi-doubling",
        "divergence-demo", "carleson", "hyperbolic-audit"}) {
    add_common(app.add_subcommand(name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  return blochlab::run(cfg);
}
