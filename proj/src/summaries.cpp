#include "bridgeirt/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

namespace bridgeirt {

namespace {

const DrawArray& need(const DrawMap& m, const std::string& name) {
  const auto it = m.find(name);
  if (it == m.end()) throw DataError("quantity not stored in draws: " + name);
  return it->second;
}

Interval central_interval(std::vector<double> values) {
  Interval ci;
  ci.lo = quantile(values, 0.025);
  ci.hi = quantile(std::move(values), 0.975);
  return ci;
}

}  // namespace

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = prob * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<double> compute_pip(const std::vector<DrawMap>& per_chain) {
  const DrawArray& first = need(per_chain.at(0), "xi");
  const int p = static_cast<int>(first.width());
  std::vector<double> pip(p, 0.0);
  std::uint64_t total = 0;
  for (const auto& chain : per_chain) {
    const DrawArray& xi = need(chain, "xi");
    for (std::uint64_t s = 0; s < xi.rows(); ++s)
      for (int k = 0; k < p; ++k) pip[k] += xi.at(s, k);
    total += xi.rows();
  }
  for (double& v : pip) v /= static_cast<double>(total);
  return pip;
}

BridgingResult bridging_frequency(const std::vector<DrawMap>& per_chain,
                                  const std::vector<std::string>& groups) {
  BridgingResult out;
  std::vector<double> overall;
  std::map<std::string, std::vector<double>> by_group;
  std::map<std::string, int> group_size;
  if (!groups.empty())
    for (const auto& gr : groups) ++group_size[gr];

  for (const auto& chain : per_chain) {
    const DrawArray& zeta = need(chain, "zeta");
    const int I = static_cast<int>(zeta.width());
    if (!groups.empty() && static_cast<int>(groups.size()) != I)
      throw DataError("group labels do not cover all legislators");
    for (std::uint64_t s = 0; s < zeta.rows(); ++s) {
      double total = 0.0;
      std::map<std::string, double> gtotal;
      for (int i = 0; i < I; ++i) {
        const double z = zeta.at(s, i);
        total += z;
        if (!groups.empty()) gtotal[groups[i]] += z;
      }
      overall.push_back(total / I);
      for (auto& [gr, v] : gtotal) by_group[gr].push_back(v / group_size[gr]);
    }
  }

  double sum = 0.0;
  for (double v : overall) sum += v;
  out.mean = sum / static_cast<double>(overall.size());
  out.ci = central_interval(overall);
  for (auto& [gr, series] : by_group) {
    GroupBridging g;
    g.group = gr;
    double gsum = 0.0;
    for (double v : series) gsum += v;
    g.mean = gsum / static_cast<double>(series.size());
    g.ci = central_interval(std::move(series));
    out.groups.push_back(std::move(g));
  }
  return out;
}

OddsRatioRow odds_ratio(const std::vector<DrawMap>& per_chain, int covariate,
                        const std::string& name, double increment) {
  OddsRatioRow row;
  row.covariate = name;
  row.increment = increment;

  std::vector<double> all, incl;
  for (const auto& chain : per_chain) {
    const DrawArray& eta = need(chain, "eta");
    const DrawArray& xi = need(chain, "xi");
    if (covariate < 0 || covariate >= static_cast<int>(eta.width()))
      throw DataError("unknown covariate index for odds ratio");
    for (std::uint64_t s = 0; s < eta.rows(); ++s) {
      const double orr = std::exp(increment * eta.at(s, covariate));
      all.push_back(orr);
      if (xi.at(s, covariate) > 0.0) incl.push_back(orr);
    }
  }
  double sum = 0.0;
  for (double v : all) sum += v;
  row.point = sum / static_cast<double>(all.size());
  row.ci = central_interval(all);
  row.pip = static_cast<double>(incl.size()) / static_cast<double>(all.size());
  if (!incl.empty()) {
    double isum = 0.0;
    for (double v : incl) isum += v;
    row.incl_point = isum / static_cast<double>(incl.size());
    row.incl_ci = central_interval(std::move(incl));
  } else {
    row.incl_point = 1.0;
    row.incl_ci = {1.0, 1.0};
  }
  return row;
}

SummaryReport build_report(const std::vector<DrawMap>& per_chain,
                           const std::vector<std::string>& covariate_names,
                           const std::vector<std::string>& groups,
                           const std::map<std::string, double>& odds_increments) {
  if (per_chain.empty()) throw DataError("no draws supplied");
  SummaryReport rep;
  rep.n_chains = static_cast<int>(per_chain.size());
  const DrawArray& zeta = need(per_chain[0], "zeta");
  const DrawArray& xi = need(per_chain[0], "xi");
  rep.I = static_cast<int>(zeta.width());
  rep.p = static_cast<int>(xi.width());
  if (per_chain[0].count("mu")) rep.J = static_cast<int>(need(per_chain[0], "mu").width());
  for (const auto& chain : per_chain) rep.n_draws += need(chain, "zeta").rows();

  if (static_cast<int>(covariate_names.size()) != rep.p)
    throw DataError("covariate name count does not match stored draws");
  rep.covariates = covariate_names;
  rep.pip = compute_pip(per_chain);
  rep.median_model.resize(rep.p);
  rep.pip_sign.assign(rep.p, 0);
  for (int k = 0; k < rep.p; ++k) {
    rep.median_model[k] = rep.pip[k] > 0.5;
    double sum = 0.0;
    std::uint64_t n_incl = 0;
    for (const auto& chain : per_chain) {
      const DrawArray& eta = need(chain, "eta");
      const DrawArray& xik = need(chain, "xi");
      for (std::uint64_t s = 0; s < eta.rows(); ++s) {
        if (xik.at(s, k) == 0.0) continue;
        sum += eta.at(s, k);
        ++n_incl;
      }
    }
    if (n_incl > 0) rep.pip_sign[k] = sum > 0.0 ? 1 : (sum < 0.0 ? -1 : 0);
  }

  const BridgingResult bf = bridging_frequency(per_chain, groups);
  rep.bf_mean = bf.mean;
  rep.bf_ci = bf.ci;
  rep.groups = bf.groups;

  for (int k = 0; k < rep.p; ++k) {
    double increment = 1.0;
    const auto it = odds_increments.find(covariate_names[k]);
    if (it != odds_increments.end()) increment = it->second;
    rep.odds_ratios.push_back(odds_ratio(per_chain, k, covariate_names[k], increment));
  }
  for (const auto& [name, inc] : odds_increments)
    if (std::find(covariate_names.begin(), covariate_names.end(), name) ==
        covariate_names.end())
      throw DataError("odds increment for unknown covariate: " + name);
  return rep;
}

void export_report(const SummaryReport& rep, const std::vector<DrawMap>& per_chain,
                   const std::vector<std::string>& legislator_ids,
                   const std::vector<std::string>& groups, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const char* f) { return (fs::path(out_dir) / f).string(); };

  nlohmann::json j;
  j["n_draws"] = rep.n_draws;
  j["n_chains"] = rep.n_chains;
  j["I"] = rep.I;
  j["J"] = rep.J;
  j["p"] = rep.p;
  j["covariates"] = rep.covariates;
  j["pip"] = rep.pip;
  j["pip_sign"] = rep.pip_sign;
  j["median_model"] = nlohmann::json::array();
  for (int k = 0; k < rep.p; ++k)
    if (rep.median_model[k]) j["median_model"].push_back(rep.covariates[k]);
  j["bridging"] = {{"mean", rep.bf_mean}, {"lo", rep.bf_ci.lo}, {"hi", rep.bf_ci.hi}};
  j["bridging_by_group"] = nlohmann::json::array();
  for (const auto& g : rep.groups)
    j["bridging_by_group"].push_back(
        {{"group", g.group}, {"mean", g.mean}, {"lo", g.ci.lo}, {"hi", g.ci.hi}});
  j["odds_ratios"] = nlohmann::json::array();
  for (const auto& o : rep.odds_ratios)
    j["odds_ratios"].push_back({{"covariate", o.covariate},
                                {"increment", o.increment},
                                {"mean", o.point},
                                {"lo", o.ci.lo},
                                {"hi", o.ci.hi},
                                {"inclusion_mean", o.incl_point},
                                {"inclusion_lo", o.incl_ci.lo},
                                {"inclusion_hi", o.incl_ci.hi},
                                {"pip", o.pip}});
  {
    std::ofstream out(path("summary.json"));
    if (!out) throw DataError("cannot write summary.json");
    out << j.dump(2) << '\n';
  }

  {
    std::ofstream out(path("pips.csv"));
    out.precision(17);
    out << "covariate,pip,pip_sign,in_median_model\n";
    for (int k = 0; k < rep.p; ++k)
      out << rep.covariates[k] << ',' << rep.pip[k] << ',' << rep.pip_sign[k] << ','
          << int(rep.median_model[k]) << '\n';
  }

  {
    std::ofstream out(path("bridging.csv"));
    out.precision(17);
    out << "group,mean,lo,hi\n";
    out << "all," << rep.bf_mean << ',' << rep.bf_ci.lo << ',' << rep.bf_ci.hi << '\n';
    for (const auto& g : rep.groups)
      out << g.group << ',' << g.mean << ',' << g.ci.lo << ',' << g.ci.hi << '\n';
  }

  {
    std::ofstream out(path("odds_ratios.csv"));
    out.precision(17);
    out << "covariate,increment,mean,lo,hi,inclusion_mean,inclusion_lo,inclusion_hi,pip\n";
    for (const auto& o : rep.odds_ratios)
      out << o.covariate << ',' << o.increment << ',' << o.point << ',' << o.ci.lo << ','
          << o.ci.hi << ',' << o.incl_point << ',' << o.incl_ci.lo << ',' << o.incl_ci.hi
          << ',' << o.pip << '\n';
  }

  // Per-legislator table: posterior bridge probability and mean positions
  // when stored, one row per legislator.
  {
    const bool have_beta = per_chain[0].count("beta0") > 0;
    std::vector<double> zbar(rep.I, 0.0), b0(rep.I, 0.0), b1(rep.I, 0.0);
    std::uint64_t total = 0;
    for (const auto& chain : per_chain) {
      const DrawArray& zeta = need(chain, "zeta");
      for (std::uint64_t s = 0; s < zeta.rows(); ++s)
        for (int i = 0; i < rep.I; ++i) zbar[i] += zeta.at(s, i);
      if (have_beta) {
        const DrawArray& beta0 = need(chain, "beta0");
        const DrawArray& beta1 = need(chain, "beta1");
        for (std::uint64_t s = 0; s < beta0.rows(); ++s)
          for (int i = 0; i < rep.I; ++i) {
            b0[i] += beta0.at(s, i);
            b1[i] += beta1.at(s, i);
          }
      }
      total += zeta.rows();
    }
    std::ofstream out(path("legislators.csv"));
    out.precision(17);
    out << "legislator_id,group,bridge_probability,mean_beta0,mean_beta1\n";
    for (int i = 0; i < rep.I; ++i) {
      const std::string id =
          i < static_cast<int>(legislator_ids.size()) ? legislator_ids[i] : std::to_string(i);
      const std::string gr = groups.empty() ? "" : groups[i];
      out << id << ',' << gr << ',' << zbar[i] / double(total) << ',';
      if (have_beta)
        out << b0[i] / double(total) << ',' << b1[i] / double(total) << '\n';
      else
        out << ",\n";
    }
  }
}

}  // namespace bridgeirt
