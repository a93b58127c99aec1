#include "bridgeirt/chain.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "bridgeirt/bridge.hpp"
#include "bridgeirt/ideal_points.hpp"
#include "json.hpp"

namespace bridgeirt {

void RunConfig::validate() const {
  if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
  if (n_burnin < 0) throw std::invalid_argument("n_burnin must be >= 0");
  if (n_kept < 1) throw std::invalid_argument("n_kept must be >= 1");
  if (thin < 1) throw std::invalid_argument("thin must be >= 1");
}

ChainState initialize_chain(const VoteMatrix& votes, const VoteTypeVector& types,
                            const DesignMatrix& X, const RunConfig& config, Rng& rng) {
  const int I = votes.I;
  const int J = votes.J;
  const int p = X.p();

  ChainState state;
  state.bills.mu.resize(J);
  state.bills.alpha.resize(J);
  state.bills.alpha_active.assign(J, 1);
  for (int j = 0; j < J; ++j) {
    int yea = 0, seen = 0;
    for (int i = 0; i < I; ++i) {
      if (!votes.observed(i, j)) continue;
      ++seen;
      yea += votes(i, j);
    }
    const double prop = std::clamp(double(yea) / seen, 0.05, 0.95);
    state.bills.mu[j] = std::log(prop / (1.0 - prop));
    state.bills.alpha[j] = rng.rnorm();
  }

  // Fully pooled start: every legislator begins as a bridge with one shared
  // position per domain pair. Starting from independent random positions can
  // lock the final-passage space into a reflected orientation that
  // coordinate-wise updates cannot collectively undo; from the pooled state
  // the sampler only splits positions where the data demand it.
  state.ideal.beta0.resize(I);
  state.ideal.beta1.resize(I);
  state.ideal.zeta.assign(I, 1);
  for (int i = 0; i < I; ++i) {
    state.ideal.beta0[i] = rng.rnorm(0.0, 2.0);
    state.ideal.beta1[i] = state.ideal.beta0[i];
  }

  const HyperPriors& pr = config.priors;
  auto ig_mean = [](double shape, double rate) { return shape > 1.0 ? rate / (shape - 1.0) : 1.0; };
  state.hyper.rho_mu = pr.rho_mu_mean;
  state.hyper.kappa2_mu = ig_mean(pr.kappa2_mu_shape, pr.kappa2_mu_rate);
  state.hyper.omega_alpha = pr.omega_alpha_a / (pr.omega_alpha_a + pr.omega_alpha_b);
  state.hyper.kappa2_alpha = ig_mean(pr.kappa2_alpha_shape, pr.kappa2_alpha_rate);
  state.hyper.rho_beta = pr.rho_beta_mean;
  state.hyper.sigma2_beta = ig_mean(pr.sigma2_beta_shape, pr.sigma2_beta_rate);

  state.aug.y_imputed.assign(static_cast<std::size_t>(I) * J, 0);
  state.aug.nu.assign(static_cast<std::size_t>(I) * J, 0.25);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      if (votes.observed(i, j))
        state.aug.y_imputed[static_cast<std::size_t>(i) * J + j] = votes(i, j);
  impute_missing(state, votes, types, rng);

  state.bridge.eta0 = 0.0;
  state.bridge.eta.assign(p, 0.0);
  state.bridge.xi.resize(p);
  for (int k = 0; k < p; ++k) state.bridge.xi[k] = rng.rbernoulli(0.5);
  state.bridge.nu_bridge.assign(I, 0.25);
  state.bridge.g = double(I);
  return state;
}

namespace {

void check_finite(const ChainState& state, long long sweep_no) {
  auto all_finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  const char* field = nullptr;
  if (!all_finite(state.bills.mu)) field = "mu";
  else if (!all_finite(state.bills.alpha)) field = "alpha";
  else if (!all_finite(state.ideal.beta0)) field = "beta0";
  else if (!all_finite(state.ideal.beta1)) field = "beta1";
  else if (!all_finite(state.bridge.eta)) field = "eta";
  else if (!std::isfinite(state.bridge.eta0)) field = "eta0";
  else if (!std::isfinite(state.hyper.rho_mu) || !std::isfinite(state.hyper.kappa2_mu) ||
           !std::isfinite(state.hyper.omega_alpha) || !std::isfinite(state.hyper.kappa2_alpha) ||
           !std::isfinite(state.hyper.rho_beta) || !std::isfinite(state.hyper.sigma2_beta))
    field = "hyperparameters";
  if (field)
    throw NumericError("non-finite " + std::string(field) + " at sweep " +
                       std::to_string(sweep_no));
}

}  // namespace

void sweep(ChainState& state, const VoteMatrix& votes, const VoteTypeVector& types,
           const DesignMatrix& X, const SweepOptions& opts, Rng& rng, ChainStats* stats) {
  impute_missing(state, votes, types, rng);
  draw_policy_pg(state, types, rng);
  update_mu(state, types, rng);
  update_alpha(state, types, rng);

  const std::vector<double> theta = bridge_linear_predictors(state.bridge, X);
  const std::vector<std::uint8_t> zeta_before = state.ideal.zeta;
  update_zeta(state, types, theta, rng);
  if (opts.identify && !check_min_bridges(state.ideal)) {
    // Fewer than 2 bridges cannot pin the common scale; reject the zeta
    // sweep as a block, keeping the previous zeta/beta pair. Gated with the
    // other identification devices so the raw Gibbs kernel stays available
    // to stationarity tests.
    state.ideal.zeta = zeta_before;
    if (stats) ++stats->identify.min_bridge_violations;
  } else {
    update_beta(state, types, rng, opts.sign_legislator);
  }

  update_policy_hyper(state, opts.priors, rng);

  draw_bridge_pg(state, X, rng);
  const MhResult eta0_res = update_eta0(state, X, rng);
  MhResult model_res;
  if (X.p() > 0) model_res = update_model(state, X, rng);
  if (stats) {
    stats->eta0_accepts += eta0_res.accepted;
    stats->model_accepts += model_res.accepted;
    ++stats->sweeps;
  }

  if (opts.identify) {
    align_signs(state, opts.anchors, stats ? &stats->identify : nullptr);
    anchor_transform(state, opts.anchors, types, stats ? &stats->identify : nullptr,
                     opts.audit);
  }
}

ChainResult run_chain(const VoteMatrix& votes, const VoteTypeVector& types,
                      const DesignMatrix& X, const RunConfig& config, int chain_index) {
  config.validate();
  validate_anchors(config.anchors, votes);
  const auto t0 = std::chrono::steady_clock::now();

  Rng rng(config.seed, static_cast<std::uint64_t>(chain_index) + 1);
  ChainState state = initialize_chain(votes, types, X, config, rng);

  SweepOptions opts;
  opts.identify = true;
  opts.audit = config.audit_identify;
  opts.anchors = config.anchors;
  opts.sign_legislator = config.anchors.sign_legislator;
  opts.priors = config.priors;

  ChainResult result;
  ChainDraws& d = result.draws;
  d.chain_index = chain_index;
  d.n_kept = config.n_kept;
  d.I = votes.I;
  d.J = votes.J;
  d.p = X.p();
  const auto reserve = [&](std::vector<double>& v, long long width) {
    v.reserve(static_cast<std::size_t>(config.n_kept) * width);
  };
  reserve(d.log_joint, 1);
  reserve(d.zeta_total, 1);
  reserve(d.model_size, 1);
  reserve(d.eta0, 1);
  reserve(d.rho_mu, 1);
  reserve(d.kappa2_mu, 1);
  reserve(d.omega_alpha, 1);
  reserve(d.kappa2_alpha, 1);
  reserve(d.rho_beta, 1);
  reserve(d.sigma2_beta, 1);
  reserve(d.linpred, d.I);
  if (config.store.beta) {
    reserve(d.beta0, d.I);
    reserve(d.beta1, d.I);
  }
  if (config.store.mu) reserve(d.mu, d.J);
  if (config.store.alpha) reserve(d.alpha, d.J);
  reserve(d.eta, d.p);
  d.zeta.reserve(static_cast<std::size_t>(config.n_kept) * d.I);
  d.xi.reserve(static_cast<std::size_t>(config.n_kept) * d.p);

  const long long total = config.total_sweeps();
  for (long long s = 1; s <= total; ++s) {
    bridgeirt::sweep(state, votes, types, X, opts, rng, &result.stats);
    check_finite(state, s);
    if (s <= config.n_burnin || (s - config.n_burnin) % config.thin != 0) continue;

    d.log_joint.push_back(log_joint(state, votes, types, X, config.priors));
    double zt = 0.0;
    for (auto z : state.ideal.zeta) zt += z;
    d.zeta_total.push_back(zt);
    double ms = 0.0;
    for (auto x : state.bridge.xi) ms += x;
    d.model_size.push_back(ms);
    d.eta0.push_back(state.bridge.eta0);
    d.rho_mu.push_back(state.hyper.rho_mu);
    d.kappa2_mu.push_back(state.hyper.kappa2_mu);
    d.omega_alpha.push_back(state.hyper.omega_alpha);
    d.kappa2_alpha.push_back(state.hyper.kappa2_alpha);
    d.rho_beta.push_back(state.hyper.rho_beta);
    d.sigma2_beta.push_back(state.hyper.sigma2_beta);

    const std::vector<double> psi = bridge_linear_predictors(state.bridge, X);
    d.linpred.insert(d.linpred.end(), psi.begin(), psi.end());
    d.zeta.insert(d.zeta.end(), state.ideal.zeta.begin(), state.ideal.zeta.end());
    if (config.store.beta) {
      d.beta0.insert(d.beta0.end(), state.ideal.beta0.begin(), state.ideal.beta0.end());
      d.beta1.insert(d.beta1.end(), state.ideal.beta1.begin(), state.ideal.beta1.end());
    }
    if (config.store.mu) d.mu.insert(d.mu.end(), state.bills.mu.begin(), state.bills.mu.end());
    if (config.store.alpha)
      d.alpha.insert(d.alpha.end(), state.bills.alpha.begin(), state.bills.alpha.end());
    d.xi.insert(d.xi.end(), state.bridge.xi.begin(), state.bridge.xi.end());
    d.eta.insert(d.eta.end(), state.bridge.eta.begin(), state.bridge.eta.end());

    // transform params recorded per kept draw, aligned with the arrays above
    result.stats.identify.transform_shift.push_back(result.stats.identify.last_shift);
    result.stats.identify.transform_scale.push_back(result.stats.identify.last_scale);
  }

  result.stats.runtime_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::vector<ChainResult> run_chains(const VoteMatrix& votes, const VoteTypeVector& types,
                                    const DesignMatrix& X, const RunConfig& config) {
  config.validate();
  std::vector<ChainResult> results(config.n_chains);
  std::vector<std::exception_ptr> errors(config.n_chains);

  int workers = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, config.n_chains));

  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const int k = next.fetch_add(1);
        if (k >= config.n_chains) return;
        try {
          results[k] = run_chain(votes, types, X, config, k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  for (int k = 0; k < config.n_chains; ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& e) {
      throw NumericError("chain " + std::to_string(k) + " failed: " + e.what());
    }
  }
  return results;
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const int m = static_cast<int>(chains.size());
  if (m < 2) throw std::invalid_argument("gelman_rubin needs >= 2 chains");
  const std::size_t n = chains[0].size();
  if (n < 10) throw std::invalid_argument("gelman_rubin needs chain length >= 10");
  for (const auto& c : chains)
    if (c.size() != n) throw std::invalid_argument("gelman_rubin needs equal chain lengths");

  std::vector<double> means(m);
  double w = 0.0;
  for (int k = 0; k < m; ++k) {
    double s = 0.0;
    for (double v : chains[k]) s += v;
    means[k] = s / n;
    double ss = 0.0;
    for (double v : chains[k]) {
      const double c = v - means[k];
      ss += c * c;
    }
    w += ss / (n - 1);
  }
  w /= m;
  if (w <= 0.0) throw DegenerateVarianceError();

  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= m;
  double b_over_n = 0.0;
  for (double v : means) {
    const double c = v - grand;
    b_over_n += c * c;
  }
  b_over_n /= (m - 1);

  const double var_plus = (double(n) - 1.0) / n * w + b_over_n;
  return std::sqrt(var_plus / w);
}

std::map<std::string, std::vector<double>> monitored_scalars(const ChainDraws& draws) {
  std::map<std::string, std::vector<double>> out;
  out["log_joint"] = draws.log_joint;
  out["zeta_total"] = draws.zeta_total;
  out["model_size"] = draws.model_size;
  out["eta0"] = draws.eta0;
  out["rho_mu"] = draws.rho_mu;
  out["kappa2_mu"] = draws.kappa2_mu;
  out["omega_alpha"] = draws.omega_alpha;
  out["kappa2_alpha"] = draws.kappa2_alpha;
  out["rho_beta"] = draws.rho_beta;
  out["sigma2_beta"] = draws.sigma2_beta;
  for (int i = 0; i < draws.I; ++i) {
    std::vector<double> series(draws.n_kept);
    for (long long s = 0; s < draws.n_kept; ++s)
      series[s] = draws.linpred[static_cast<std::size_t>(s) * draws.I + i];
    out["linpred[" + std::to_string(i) + "]"] = std::move(series);
  }
  return out;
}

namespace {

void hyper_from_json(const nlohmann::json& j, HyperPriors& h) {
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("rho_mu_mean", h.rho_mu_mean);
  get("rho_mu_var", h.rho_mu_var);
  get("kappa2_mu_shape", h.kappa2_mu_shape);
  get("kappa2_mu_rate", h.kappa2_mu_rate);
  get("omega_alpha_a", h.omega_alpha_a);
  get("omega_alpha_b", h.omega_alpha_b);
  get("kappa2_alpha_shape", h.kappa2_alpha_shape);
  get("kappa2_alpha_rate", h.kappa2_alpha_rate);
  get("rho_beta_mean", h.rho_beta_mean);
  get("rho_beta_var", h.rho_beta_var);
  get("sigma2_beta_shape", h.sigma2_beta_shape);
  get("sigma2_beta_rate", h.sigma2_beta_rate);
}

}  // namespace

RunConfig config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw DataError(std::string("bad run config json: ") + e.what());
  }
  RunConfig c;
  if (j.contains("chains")) c.n_chains = j.at("chains").get<int>();
  if (j.contains("burnin")) c.n_burnin = j.at("burnin").get<long long>();
  if (j.contains("kept")) c.n_kept = j.at("kept").get<long long>();
  if (j.contains("thin")) c.thin = j.at("thin").get<long long>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j.at("threads").get<int>();
  if (j.contains("audit_identify")) c.audit_identify = j.at("audit_identify").get<bool>();
  if (j.contains("hyper")) hyper_from_json(j.at("hyper"), c.priors);
  if (j.contains("anchors")) {
    const auto& a = j.at("anchors");
    if (a.contains("anchor_low")) c.anchors.anchor_low = a.at("anchor_low").get<int>();
    if (a.contains("anchor_high")) c.anchors.anchor_high = a.at("anchor_high").get<int>();
    if (a.contains("anchor_values")) {
      const auto vals = a.at("anchor_values").get<std::vector<double>>();
      if (vals.size() != 2) throw DataError("anchor_values must have 2 entries");
      c.anchors.anchor_values = {vals[0], vals[1]};
    }
    if (a.contains("sign_legislator"))
      c.anchors.sign_legislator = a.at("sign_legislator").get<int>();
  }
  if (j.contains("store")) {
    const auto& s = j.at("store");
    if (s.contains("mu")) c.store.mu = s.at("mu").get<bool>();
    if (s.contains("alpha")) c.store.alpha = s.at("alpha").get<bool>();
    if (s.contains("beta")) c.store.beta = s.at("beta").get<bool>();
  }
  c.validate();
  return c;
}

std::string config_to_json(const RunConfig& config) {
  nlohmann::json j;
  j["chains"] = config.n_chains;
  j["burnin"] = config.n_burnin;
  j["kept"] = config.n_kept;
  j["thin"] = config.thin;
  j["seed"] = config.seed;
  j["threads"] = config.threads;
  j["audit_identify"] = config.audit_identify;
  j["hyper"] = {{"rho_mu_mean", config.priors.rho_mu_mean},
                {"rho_mu_var", config.priors.rho_mu_var},
                {"kappa2_mu_shape", config.priors.kappa2_mu_shape},
                {"kappa2_mu_rate", config.priors.kappa2_mu_rate},
                {"omega_alpha_a", config.priors.omega_alpha_a},
                {"omega_alpha_b", config.priors.omega_alpha_b},
                {"kappa2_alpha_shape", config.priors.kappa2_alpha_shape},
                {"kappa2_alpha_rate", config.priors.kappa2_alpha_rate},
                {"rho_beta_mean", config.priors.rho_beta_mean},
                {"rho_beta_var", config.priors.rho_beta_var},
                {"sigma2_beta_shape", config.priors.sigma2_beta_shape},
                {"sigma2_beta_rate", config.priors.sigma2_beta_rate}};
  j["anchors"] = {
      {"anchor_low", config.anchors.anchor_low},
      {"anchor_high", config.anchors.anchor_high},
      {"anchor_values",
       {config.anchors.anchor_values[0], config.anchors.anchor_values[1]}},
      {"sign_legislator", config.anchors.sign_legislator}};
  j["store"] = {{"mu", config.store.mu},
                {"alpha", config.store.alpha},
                {"beta", config.store.beta}};
  return j.dump(2);
}

}  // namespace bridgeirt
