#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bridgeirt/data.hpp"
#include "bridgeirt/identify.hpp"
#include "bridgeirt/model.hpp"
#include "bridgeirt/rng.hpp"

namespace bridgeirt {

struct StoreToggles {
  bool mu = true;
  bool alpha = true;
  bool beta = true;
};

struct RunConfig {
  int n_chains = 4;
  long long n_burnin = 20000;
  long long n_kept = 15000;
  long long thin = 20;
  std::uint64_t seed = 1729;
  int threads = 0;  // 0 = one per chain up to hardware cores
  bool audit_identify = true;
  HyperPriors priors;
  AnchorSpec anchors;
  StoreToggles store;

  long long total_sweeps() const { return n_burnin + n_kept * thin; }
  void validate() const;
};

// Kept draws for one chain. Vector quantities are flattened draw-major.
struct ChainDraws {
  int chain_index = 0;
  long long n_kept = 0;
  int I = 0, J = 0, p = 0;

  std::vector<double> log_joint, zeta_total, model_size, eta0;
  std::vector<double> rho_mu, kappa2_mu, omega_alpha, kappa2_alpha, rho_beta, sigma2_beta;
  std::vector<double> beta0, beta1;        // n_kept x I
  std::vector<std::uint8_t> zeta;          // n_kept x I
  std::vector<double> linpred;             // n_kept x I
  std::vector<double> mu, alpha;           // n_kept x J
  std::vector<std::uint8_t> xi;            // n_kept x p
  std::vector<double> eta;                 // n_kept x p
};

struct ChainStats {
  IdentifyReport identify;
  long long eta0_accepts = 0;
  long long model_accepts = 0;
  long long sweeps = 0;
  double runtime_sec = 0.0;

  double eta0_accept_rate() const { return sweeps ? double(eta0_accepts) / sweeps : 0.0; }
  double model_accept_rate() const { return sweeps ? double(model_accepts) / sweeps : 0.0; }
};

struct SweepOptions {
  bool identify = true;
  bool audit = false;
  int sign_legislator = -1;
  AnchorSpec anchors;
  HyperPriors priors;
};

ChainState initialize_chain(const VoteMatrix& votes, const VoteTypeVector& types,
                            const DesignMatrix& X, const RunConfig& config, Rng& rng);

// One full Gibbs sweep in the documented order: imputation, vote-level
// augmentation, bill parameters, bridge indicators (block-rejected if the
// bridge count would fall below 2), ideal points, policy hyperparameters,
// bridge-regression block, identifiability transforms.
void sweep(ChainState& state, const VoteMatrix& votes, const VoteTypeVector& types,
           const DesignMatrix& X, const SweepOptions& opts, Rng& rng,
           ChainStats* stats = nullptr);

struct ChainResult {
  ChainDraws draws;
  ChainStats stats;
};

ChainResult run_chain(const VoteMatrix& votes, const VoteTypeVector& types,
                      const DesignMatrix& X, const RunConfig& config, int chain_index);

std::vector<ChainResult> run_chains(const VoteMatrix& votes, const VoteTypeVector& types,
                                    const DesignMatrix& X, const RunConfig& config);

struct DegenerateVarianceError : std::runtime_error {
  DegenerateVarianceError() : std::runtime_error("zero within-chain variance") {}
};

// Classical potential-scale-reduction factor. Requires >= 2 chains of equal
// length >= 10; throws DegenerateVarianceError on zero within-chain variance.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

// Named scalar series for convergence monitoring: the stored scalars plus
// each legislator's bridge-regression linear predictor.
std::map<std::string, std::vector<double>> monitored_scalars(const ChainDraws& draws);

RunConfig config_from_json(const std::string& json_text);
std::string config_to_json(const RunConfig& config);

}  // namespace bridgeirt
