#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace blochlab {

/// One grid point of a certified inequality: ratio = lhs/rhs.
struct RatioPoint {
  double r = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();  // NaN: radial row
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Auxiliary per-point check (proof-chain inequalities and the like).
struct AuxCheck {
  std::string name;
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

enum class Extremum { Min, Max };

/// Named, reproducible certification of one inequality over a grid.
struct EstimateReport {
  std::string name;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
  std::string grid;
  std::vector<RatioPoint> points;
  std::vector<AuxCheck> checks;
  Extremum sense = Extremum::Min;
  double extremal_constant = 0.0;
  bool holds = false;
  std::string verdict;

  // Computes extremal_constant from the ratios and sets verdict/holds.
  // bound semantics: Min sense holds when extremum > bound (default 0),
  // Max sense holds when extremum <= bound. Auxiliary check failures
  // override the verdict.
  void finalize(Extremum sense, double bound);
};

nlohmann::ordered_json to_json(const EstimateReport& rep);

// Fixed columns r,theta,ratio,lhs,rhs; theta left empty on radial rows.
std::string to_csv(const EstimateReport& rep);
std::string ratio_points_csv(const std::vector<RatioPoint>& points);

}  // namespace blochlab
