#include "bridgeirt/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "bridgeirt/chain.hpp"
#include "bridgeirt/data.hpp"
#include "bridgeirt/draws_io.hpp"
#include "bridgeirt/summaries.hpp"
#include "bridgeirt/synthetic.hpp"

namespace fs = std::filesystem;

namespace bridgeirt {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in " + path + ": " + e.what());
  }
}

// ---------------------------------------------------------------- simulate

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc = scenario_preset(j.value("preset", std::string("custom")));
  auto get_int = [&](const char* k, int& f) {
    if (j.contains(k)) f = j.at(k).get<int>();
  };
  auto get_dbl = [&](const char* k, double& f) {
    if (j.contains(k)) f = j.at(k).get<double>();
  };
  get_int("legislators", sc.I);
  get_int("bills", sc.J);
  get_int("covariates", sc.p);
  get_dbl("missing_frac", sc.missing_frac);
  get_dbl("final_frac", sc.final_frac);
  get_dbl("rho_mu", sc.rho_mu);
  get_dbl("kappa2_mu", sc.kappa2_mu);
  get_dbl("omega_alpha", sc.omega_alpha);
  get_dbl("kappa2_alpha", sc.kappa2_alpha);
  get_dbl("rho_beta", sc.rho_beta);
  get_dbl("sigma2_beta", sc.sigma2_beta);
  get_dbl("eta0", sc.eta0);
  if (j.contains("active")) {
    sc.fix_model = true;
    sc.active = j.at("active").get<std::vector<int>>();
    sc.effects = j.at("effects").get<std::vector<double>>();
  }
  return sc;
}

void write_truth(const std::string& path, const SyntheticTruth& truth) {
  nlohmann::json j;
  j["scenario"] = truth.scenario.name;
  j["I"] = truth.votes.I;
  j["J"] = truth.votes.J;
  j["p"] = truth.X.p();
  j["mu"] = truth.mu;
  j["alpha"] = truth.alpha;
  j["beta0"] = truth.beta0;
  j["beta1"] = truth.beta1;
  j["zeta"] = truth.zeta;
  j["eta0"] = truth.eta0;
  j["eta"] = truth.eta;
  j["xi"] = truth.xi;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << j.dump(2) << '\n';
}

int cmd_simulate(const std::string& scenario_name, const std::string& config_path,
                 std::uint64_t seed, const std::string& out_dir) {
  Scenario sc = config_path.empty() ? scenario_preset(scenario_name)
                                    : scenario_from_json(parse_json_file(config_path));
  Rng rng(seed, 0);
  const SyntheticTruth truth = generate(sc, rng);

  fs::create_directories(out_dir);
  const auto path = [&](const char* f) { return (fs::path(out_dir) / f).string(); };
  write_votes(path("votes.csv"), path("vote_types.csv"), truth.votes, truth.types);
  write_covariates(path("covariates.csv"), truth.X, truth.votes.legislator_ids,
                   /*uncenter=*/true);
  write_anchors(path("anchors.json"), truth.anchors, truth.votes.legislator_ids);
  write_truth(path("truth.json"), truth);

  int observed = 0;
  for (int i = 0; i < truth.votes.I; ++i)
    for (int j = 0; j < truth.votes.J; ++j) observed += truth.votes.observed(i, j);
  std::cout << "simulated " << truth.votes.I << " legislators x " << truth.votes.J
            << " bills (" << observed << " observed votes), " << truth.X.p()
            << " covariates -> " << out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------------- fit

struct LoadedData {
  VoteMatrix votes;
  VoteTypeVector types;
  DesignMatrix X;
  AnchorSpec anchors;
};

LoadedData load_inputs(const std::string& votes_path, const std::string& types_path,
                       const std::string& cov_path, const std::string& anchors_path) {
  LoadedData d;
  auto [votes, types] = load_votes(votes_path, types_path);
  d.votes = std::move(votes);
  d.types = std::move(types);
  d.X = load_covariates(cov_path, d.votes.legislator_ids);
  d.anchors = load_anchors(anchors_path, d.votes.legislator_ids);
  validate_anchors(d.anchors, d.votes);
  return d;
}

nlohmann::json stats_to_json(const ChainStats& st, int chain_index,
                             const std::string& file) {
  nlohmann::json j;
  j["chain"] = chain_index;
  j["file"] = file;
  j["sweeps"] = st.sweeps;
  j["runtime_sec"] = st.runtime_sec;
  j["eta0_accept_rate"] = st.eta0_accept_rate();
  j["model_accept_rate"] = st.model_accept_rate();
  j["min_bridge_violations"] = st.identify.min_bridge_violations;
  j["reflections_applied"] = st.identify.reflections_applied;
  j["degenerate_transforms"] = st.identify.degenerate_transforms;
  j["max_linpred_dev"] = st.identify.max_linpred_dev;
  j["max_anchor_dev"] = st.identify.max_anchor_dev;
  return j;
}

void write_manifest(const std::string& run_dir, const RunConfig& config,
                    const LoadedData& data, const std::vector<ChainResult>& results) {
  nlohmann::json j;
  j["format"] = "bridgeirt-run-1";
  j["config"] = nlohmann::json::parse(config_to_json(config));
  nlohmann::json jd;
  jd["I"] = data.votes.I;
  jd["J"] = data.votes.J;
  jd["p"] = data.X.p();
  jd["legislator_ids"] = data.votes.legislator_ids;
  jd["bill_ids"] = data.votes.bill_ids;
  jd["covariates"] = data.X.column_names;
  jd["covariate_offsets"] = data.X.offsets;
  jd["anchors"] = {{"anchor_low", data.votes.legislator_ids[data.anchors.anchor_low]},
                   {"anchor_high", data.votes.legislator_ids[data.anchors.anchor_high]},
                   {"anchor_values", data.anchors.anchor_values},
                   {"sign_legislator",
                    data.anchors.sign_legislator >= 0
                        ? nlohmann::json(data.votes.legislator_ids[data.anchors.sign_legislator])
                        : nlohmann::json(nullptr)}};
  j["data"] = jd;
  j["chains"] = nlohmann::json::array();
  for (std::size_t k = 0; k < results.size(); ++k)
    j["chains"].push_back(stats_to_json(results[k].stats, static_cast<int>(k),
                                        "chain_" + std::to_string(k) + ".draws"));
  std::ofstream out(fs::path(run_dir) / "manifest.json");
  if (!out) throw DataError("cannot write manifest.json in " + run_dir);
  out << j.dump(2) << '\n';
}

int cmd_fit(const std::string& votes_path, const std::string& types_path,
            const std::string& cov_path, const std::string& anchors_path,
            const std::string& run_dir, RunConfig config,
            const std::vector<std::string>& export_names) {
  config.validate();
  const LoadedData data = load_inputs(votes_path, types_path, cov_path, anchors_path);
  config.anchors = data.anchors;

  std::cout << "fitting " << data.votes.I << " x " << data.votes.J << " votes, "
            << data.X.p() << " covariates: " << config.n_chains << " chains x "
            << config.total_sweeps() << " sweeps\n";

  const std::vector<ChainResult> results = run_chains(data.votes, data.types, data.X, config);

  fs::create_directories(run_dir);
  std::vector<DrawMap> per_chain;
  per_chain.reserve(results.size());
  for (std::size_t k = 0; k < results.size(); ++k) {
    DrawMap m = to_draw_map(results[k].draws);
    write_draws((fs::path(run_dir) / ("chain_" + std::to_string(k) + ".draws")).string(), m);
    per_chain.push_back(std::move(m));
  }
  write_manifest(run_dir, config, data, results);
  for (const std::string& name : export_names) {
    if (!per_chain[0].count(name)) throw DataError("unknown draw quantity: " + name);
    export_draws_csv((fs::path(run_dir) / ("draws_" + name + ".csv")).string(), name,
                     per_chain);
  }

  for (std::size_t k = 0; k < results.size(); ++k) {
    const ChainStats& st = results[k].stats;
    std::printf(
        "chain %zu: %.1fs, eta0 accept %.2f, model accept %.2f, "
        "bridge-floor rejections %lld\n",
        k, st.runtime_sec, st.eta0_accept_rate(), st.model_accept_rate(),
        st.identify.min_bridge_violations);
  }
  std::cout << "wrote " << results.size() << " draw files + manifest.json -> " << run_dir
            << "\n";
  return 0;
}

// ---------------------------------------------------------------- diagnose

struct RunBundle {
  nlohmann::json manifest;
  std::vector<DrawMap> per_chain;
};

RunBundle load_run(const std::string& run_dir) {
  RunBundle b;
  const fs::path dir(run_dir);
  if (!fs::exists(dir / "manifest.json"))
    throw DataError("no manifest.json in " + run_dir + " (not a fit output directory?)");
  b.manifest = parse_json_file((dir / "manifest.json").string());
  if (!b.manifest.contains("chains") || b.manifest["chains"].empty())
    throw DataError("manifest lists no chains");
  for (const auto& c : b.manifest["chains"]) {
    const std::string file = c.at("file").get<std::string>();
    b.per_chain.push_back(read_draws((dir / file).string()));
  }
  return b;
}

// Scalar series monitored for convergence, reconstructed from a stored
// draw file: matches the in-memory monitor list.
std::map<std::string, std::vector<double>> monitored_from_map(const DrawMap& m) {
  std::map<std::string, std::vector<double>> out;
  static const char* kScalars[] = {"log_joint",   "zeta_total",  "model_size",
                                   "eta0",        "rho_mu",      "kappa2_mu",
                                   "omega_alpha", "kappa2_alpha", "rho_beta",
                                   "sigma2_beta"};
  for (const char* name : kScalars) {
    const auto it = m.find(name);
    if (it == m.end()) throw DataError(std::string("draw file missing quantity: ") + name);
    out[name] = it->second.real;
  }
  const auto it = m.find("linpred");
  if (it == m.end()) throw DataError("draw file missing quantity: linpred");
  const DrawArray& lp = it->second;
  for (std::uint64_t i = 0; i < lp.width(); ++i) {
    std::vector<double> series(lp.rows());
    for (std::uint64_t s = 0; s < lp.rows(); ++s) series[s] = lp.at(s, i);
    out["linpred[" + std::to_string(i) + "]"] = std::move(series);
  }
  return out;
}

int cmd_diagnose(const std::string& run_dir, double rhat_max) {
  const RunBundle bundle = load_run(run_dir);
  if (bundle.per_chain.size() < 2)
    throw DataError("diagnosis needs >= 2 chains; this run has " +
                    std::to_string(bundle.per_chain.size()));

  std::vector<std::map<std::string, std::vector<double>>> mon;
  mon.reserve(bundle.per_chain.size());
  for (const auto& m : bundle.per_chain) mon.push_back(monitored_from_map(m));

  bool flat = false;
  std::vector<std::pair<std::string, double>> rhats;
  for (const auto& [name, first] : mon[0]) {
    std::vector<std::vector<double>> chains;
    chains.push_back(first);
    for (std::size_t k = 1; k < mon.size(); ++k) chains.push_back(mon[k].at(name));
    try {
      rhats.emplace_back(name, gelman_rubin(chains));
    } catch (const DegenerateVarianceError&) {
      std::cout << name << ": flat chain (zero within-chain variance)\n";
      flat = true;
    }
  }

  double worst = 0.0;
  std::string worst_name;
  int failures = 0;
  for (const auto& [name, r] : rhats) {
    const bool vector_quantity = name.rfind("linpred[", 0) == 0;
    if (!vector_quantity) std::printf("%-14s R-hat %.4f%s\n", name.c_str(), r,
                                      r > rhat_max ? "  <-- exceeds threshold" : "");
    if (r > worst) {
      worst = r;
      worst_name = name;
    }
    if (r > rhat_max) {
      ++failures;
      if (vector_quantity)
        std::printf("%-14s R-hat %.4f  <-- exceeds threshold\n", name.c_str(), r);
    }
  }
  std::printf("worst R-hat %.4f (%s) over %zu monitored series; threshold %.3f\n", worst,
              worst_name.c_str(), rhats.size(), rhat_max);

  for (const auto& c : bundle.manifest["chains"])
    std::printf(
        "chain %d: eta0 accept %.2f, model accept %.2f, bridge-floor rejections %lld, "
        "max linpred drift %.2e\n",
        c.at("chain").get<int>(), c.at("eta0_accept_rate").get<double>(),
        c.at("model_accept_rate").get<double>(),
        c.at("min_bridge_violations").get<long long>(),
        c.at("max_linpred_dev").get<double>());

  if (flat) {
    std::cout << "DIAGNOSIS: FAIL (degenerate chain)\n";
    return 1;
  }
  if (failures > 0) {
    std::cout << "DIAGNOSIS: FAIL (" << failures << " series exceed R-hat " << rhat_max
              << ")\n";
    return 1;
  }
  std::cout << "DIAGNOSIS: PASS (all monitored R-hat <= " << rhat_max << ")\n";
  return 0;
}

// --------------------------------------------------------------- summarize

std::vector<std::string> load_groups(const std::string& path,
                                     const std::vector<std::string>& ids) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read groups file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty groups file: " + path);
  std::map<std::string, std::string> by_id;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError("groups file row needs legislator_id,group: " + line);
    by_id[line.substr(0, comma)] = line.substr(comma + 1);
  }
  std::vector<std::string> groups;
  groups.reserve(ids.size());
  for (const auto& id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError("groups file missing legislator: " + id);
    groups.push_back(it->second);
  }
  return groups;
}

std::map<std::string, double> parse_increments(const std::vector<std::string>& specs) {
  std::map<std::string, double> out;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DataError("odds increment must be name=value: " + s);
    try {
      std::size_t used = 0;
      const double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument("trailing text");
      out[s.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw DataError("bad odds increment value: " + s);
    }
  }
  return out;
}

int cmd_summarize(const std::string& run_dir, const std::string& out_dir,
                  const std::string& groups_path,
                  const std::vector<std::string>& increment_specs) {
  const RunBundle bundle = load_run(run_dir);
  const auto& jd = bundle.manifest.at("data");
  const auto covariates = jd.at("covariates").get<std::vector<std::string>>();
  const auto ids = jd.at("legislator_ids").get<std::vector<std::string>>();

  std::vector<std::string> groups;
  if (!groups_path.empty()) groups = load_groups(groups_path, ids);
  const std::map<std::string, double> increments = parse_increments(increment_specs);

  const SummaryReport rep =
      build_report(bundle.per_chain, covariates, groups, increments);
  const std::string dest = out_dir.empty() ? (fs::path(run_dir) / "summary").string() : out_dir;
  export_report(rep, bundle.per_chain, ids, groups, dest);

  std::printf("%lld draws x %d chains (I=%d, J=%d, p=%d)\n", rep.n_draws, rep.n_chains,
              rep.I, rep.J, rep.p);
  std::printf("bridging frequency %.3f [%.3f, %.3f]\n", rep.bf_mean, rep.bf_ci.lo,
              rep.bf_ci.hi);
  for (const auto& g : rep.groups)
    std::printf("  %-12s %.3f [%.3f, %.3f]\n", g.group.c_str(), g.mean, g.ci.lo, g.ci.hi);
  std::cout << "median model:";
  bool any = false;
  for (int k = 0; k < rep.p; ++k)
    if (rep.median_model[k]) {
      std::cout << ' ' << rep.covariates[k];
      any = true;
    }
  if (!any) std::cout << " (empty)";
  std::cout << '\n';
  for (int k = 0; k < rep.p; ++k)
    std::printf("  %-16s PIP %.3f  OR(+%g) %.3f [%.3f, %.3f]\n", rep.covariates[k].c_str(),
                rep.pip[k], rep.odds_ratios[k].increment, rep.odds_ratios[k].point,
                rep.odds_ratios[k].ci.lo, rep.odds_ratios[k].ci.hi);
  std::cout << "wrote summary files -> " << dest << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Two-domain Bayesian spatial voting model with bridge detection"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  std::string sim_scenario = "smoke";
  std::string sim_config;
  std::uint64_t sim_seed = 1729;
  std::string sim_out;
  sim->add_option("--scenario", sim_scenario,
                  "Preset: smoke, recovery, recovery-null, paperlike");
  sim->add_option("--config", sim_config, "Scenario JSON overriding the preset");
  sim->add_option("--seed", sim_seed, "Generator seed");
  sim->add_option("--out", sim_out, "Output directory")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "Run the posterior sampler");
  std::string fit_votes, fit_types, fit_cov, fit_anchors, fit_out, fit_config;
  fit->add_option("--votes", fit_votes, "votes.csv (wide or long)")->required();
  fit->add_option("--types", fit_types, "vote_types.csv")->required();
  fit->add_option("--covariates", fit_cov, "covariates.csv")->required();
  fit->add_option("--anchors", fit_anchors, "anchors.json")->required();
  fit->add_option("--out", fit_out, "Run output directory")->required();
  fit->add_option("--config", fit_config, "Run configuration JSON");
  long long fit_chains = -1, fit_burnin = -1, fit_kept = -1, fit_thin = -1;
  long long fit_threads = -1;
  std::int64_t fit_seed = -1;
  fit->add_option("--chains", fit_chains, "Number of chains");
  fit->add_option("--burnin", fit_burnin, "Burn-in sweeps per chain");
  fit->add_option("--kept", fit_kept, "Kept draws per chain");
  fit->add_option("--thin", fit_thin, "Sweeps per kept draw");
  fit->add_option("--seed", fit_seed, "Sampler seed");
  fit->add_option("--threads", fit_threads, "Worker threads (0 = per chain)");
  std::vector<std::string> fit_export;
  fit->add_option("--export-draws", fit_export,
                  "Also export this stored quantity as CSV (repeatable)");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "Convergence diagnostics for a run");
  std::string diag_run;
  double diag_rhat = 1.1;
  diag->add_option("--run", diag_run, "Run directory from fit")->required();
  diag->add_option("--rhat-max", diag_rhat, "Failure threshold for R-hat");

  // summarize
  auto* summ = app.add_subcommand("summarize", "Posterior summaries for a run");
  std::string summ_run, summ_out, summ_groups;
  std::vector<std::string> summ_incr;
  summ->add_option("--run", summ_run, "Run directory from fit")->required();
  summ->add_option("--out", summ_out, "Summary output directory (default <run>/summary)");
  summ->add_option("--groups", summ_groups, "CSV of legislator_id,group");
  summ->add_option("--odds-increment", summ_incr,
                   "Covariate increment as name=value (repeatable)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_scenario, sim_config, sim_seed, sim_out);
    if (fit->parsed()) {
      RunConfig config;
      if (!fit_config.empty()) config = config_from_json(slurp(fit_config));
      if (fit_chains >= 0) config.n_chains = static_cast<int>(fit_chains);
      if (fit_burnin >= 0) config.n_burnin = fit_burnin;
      if (fit_kept >= 0) config.n_kept = fit_kept;
      if (fit_thin >= 0) config.thin = fit_thin;
      if (fit_seed >= 0) config.seed = static_cast<std::uint64_t>(fit_seed);
      if (fit_threads >= 0) config.threads = static_cast<int>(fit_threads);
      return cmd_fit(fit_votes, fit_types, fit_cov, fit_anchors, fit_out, config,
                     fit_export);
    }
    if (diag->parsed()) return cmd_diagnose(diag_run, diag_rhat);
    if (summ->parsed()) return cmd_summarize(summ_run, summ_out, summ_groups, summ_incr);
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace bridgeirt
