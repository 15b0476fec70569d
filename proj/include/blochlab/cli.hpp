#pragma once

#include <cstdint>
#include <string>

namespace blochlab {

/// One batch run: a single named verification wired from DSL strings to the
/// corresponding operation, with JSON + CSV reports written under out_dir.
struct RunConfig {
  std::string command;
  std::string gauge = "const";
  std::string omega2;   // the second gauge (Omega) for hyperbolic-audit
  std::string measure;  // radial measure DSL
  std::string map;      // self-map DSL
  double p = 1.0;
  double q = 2.0;
  int m_min = 1;
  int m_max = 16;
  int angles = 256;
  int K = -1;  // series truncation order; -1 selects the default
  std::uint64_t seed = 20250811;
  std::string mode = "exact";  // exact | mc
  std::int64_t samples = 20000;
  std::string out = "reports";
};

// Exit status: 0 when the verified statement holds (or the command only
// builds/classifies), 2 when a verification is violated, 1 on usage,
// parse, precondition or numeric errors.
int run(const RunConfig& cfg);

}  // namespace blochlab
