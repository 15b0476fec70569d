#include "blochlab/report.hpp"

#include <cmath>

#include "blochlab/numfmt.hpp"

namespace blochlab {

void EstimateReport::finalize(Extremum s, double bound) {
  sense = s;
  double extremum = sense == Extremum::Min
                        ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
  const RatioPoint* at = nullptr;
  for (const auto& pt : points) {
    const bool better = sense == Extremum::Min ? pt.ratio < extremum
                                               : pt.ratio > extremum;
    if (better) {
      extremum = pt.ratio;
      at = &pt;
    }
  }
  extremal_constant = extremum;

  bool ok = sense == Extremum::Min ? extremum > bound : extremum <= bound;
  const AuxCheck* failed_check = nullptr;
  for (const auto& c : checks) {
    if (!c.pass) {
      failed_check = &c;
      break;
    }
  }
  if (failed_check) ok = false;

  holds = ok;
  if (holds) {
    verdict = "holds-with-constant " + format_double(extremal_constant);
  } else if (failed_check) {
    verdict = "violated-at r=" + format_double(failed_check->r) + " (" +
              failed_check->name + ")";
  } else {
    verdict = "violated-at r=" + format_double(at ? at->r : 0.0);
  }
}

nlohmann::ordered_json to_json(const EstimateReport& rep) {
  nlohmann::ordered_json j;
  j["name"] = rep.name;
  j["config"] = rep.config;
  j["provenance"] = rep.provenance;
  j["grid"] = rep.grid;

  auto& ratios = j["ratios"] = nlohmann::ordered_json::array();
  for (const auto& pt : rep.points) {
    nlohmann::ordered_json row;
    row["r"] = pt.r;
    if (!std::isnan(pt.theta)) row["theta"] = pt.theta;
    row["ratio"] = pt.ratio;
    row["lhs"] = pt.lhs;
    row["rhs"] = pt.rhs;
    ratios.push_back(std::move(row));
  }

  if (!rep.checks.empty()) {
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) {
      nlohmann::ordered_json row;
      row["name"] = c.name;
      row["r"] = c.r;
      row["lhs"] = c.lhs;
      row["rhs"] = c.rhs;
      row["pass"] = c.pass;
      checks.push_back(std::move(row));
    }
  }

  j["extremal_constant"] = rep.extremal_constant;
  j["sense"] = rep.sense == Extremum::Min ? "min" : "max";
  j["holds"] = rep.holds;
  j["verdict"] = rep.verdict;
  return j;
}

std::string ratio_points_csv(const std::vector<RatioPoint>& points) {
  std::string out = "r,theta,ratio,lhs,rhs\n";
  for (const auto& pt : points) {
    out += format_double(pt.r);
    out += ',';
    if (!std::isnan(pt.theta)) out += format_double(pt.theta);
    out += ',';
    out += format_double(pt.ratio);
    out += ',';
    out += format_double(pt.lhs);
    out += ',';
    out += format_double(pt.rhs);
    out += '\n';
  }
  return out;
}

std::string to_csv(const EstimateReport& rep) {
  return ratio_points_csv(rep.points);
}

}  // namespace blochlab
