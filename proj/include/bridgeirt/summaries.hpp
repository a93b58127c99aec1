#pragma once

#include <map>
#include <string>
#include <vector>

#include "bridgeirt/draws_io.hpp"

namespace bridgeirt {

// Posterior summaries computed from stored draws: covariate inclusion
// probabilities, bridging frequencies with equal-tailed intervals, odds
// ratios per covariate increment, and the median model.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct OddsRatioRow {
  std::string covariate;
  double increment = 1.0;      // in original covariate units (centering
                               // shifts but never rescales)
  double point = 1.0;          // posterior mean over all draws
  Interval ci;
  double incl_point = 1.0;     // conditional on inclusion
  Interval incl_ci;
  double pip = 0.0;
};

struct GroupBridging {
  std::string group;
  double mean = 0.0;
  Interval ci;
};

struct SummaryReport {
  std::vector<std::string> covariates;
  std::vector<double> pip;
  std::vector<int> pip_sign;  // sign of mean coefficient among inclusion draws
  std::vector<std::uint8_t> median_model;

  double bf_mean = 0.0;
  Interval bf_ci;
  std::vector<GroupBridging> groups;
  std::vector<OddsRatioRow> odds_ratios;

  long long n_draws = 0;
  int n_chains = 0;
  int I = 0, J = 0, p = 0;
};

// Equal-tailed empirical quantile with linear interpolation between order
// statistics.
double quantile(std::vector<double> values, double prob);

std::vector<double> compute_pip(const std::vector<DrawMap>& per_chain);

struct BridgingResult {
  double mean = 0.0;
  Interval ci;
  std::vector<GroupBridging> groups;
};

// groups maps legislator index -> group label; empty means no grouping.
BridgingResult bridging_frequency(const std::vector<DrawMap>& per_chain,
                                  const std::vector<std::string>& groups);

OddsRatioRow odds_ratio(const std::vector<DrawMap>& per_chain, int covariate,
                        const std::string& name, double increment);

SummaryReport build_report(const std::vector<DrawMap>& per_chain,
                           const std::vector<std::string>& covariate_names,
                           const std::vector<std::string>& groups,
                           const std::map<std::string, double>& odds_increments);

// Writes summary.json, pips.csv, bridging.csv, odds_ratios.csv, and the
// plot-ready per-legislator table legislators.csv into out_dir.
void export_report(const SummaryReport& report, const std::vector<DrawMap>& per_chain,
                   const std::vector<std::string>& legislator_ids,
                   const std::vector<std::string>& groups, const std::string& out_dir);

}  // namespace bridgeirt
