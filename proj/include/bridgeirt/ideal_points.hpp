#pragma once

#include "bridgeirt/data.hpp"
#include "bridgeirt/model.hpp"
#include "bridgeirt/rng.hpp"

namespace bridgeirt {

// Gibbs updates for the policy space: missing-vote imputation, the
// vote-level augmentation draws, bill parameters (mu, spike-and-slab alpha),
// bridge indicators zeta, ideal points beta, and the policy hyperparameters.
// All conditionals are derived under the augmented logistic likelihood
//   y_{i,j} ~ Bern(logistic(mu_j + alpha_j * beta_{i, gamma_j})).

double vote_probability(double mu_j, double alpha_j, double beta);

struct NormalParams {
  double mean = 0.0;
  double var = 1.0;
};

// Spike-and-slab conditional for one alpha_j: slab moments plus the
// probability of the exact-zero spike.
struct SpikeSlabParams {
  double mean = 0.0;
  double var = 1.0;
  double spike_prob = 0.0;
};

void impute_missing(ChainState& state, const VoteMatrix& votes, const VoteTypeVector& types,
                    Rng& rng);

void draw_policy_pg(ChainState& state, const VoteTypeVector& types, Rng& rng);

NormalParams mu_conditional(const ChainState& state, const VoteTypeVector& types, int j);
void update_mu(ChainState& state, const VoteTypeVector& types, Rng& rng);

SpikeSlabParams alpha_conditional(const ChainState& state, const VoteTypeVector& types, int j);
void update_alpha(ChainState& state, const VoteTypeVector& types, Rng& rng);

// Log odds of zeta_i = 1 given everything else; theta_log_odds is the
// bridge-regression linear predictor eta0 + x_i' eta.
double zeta_log_odds(const ChainState& state, const VoteTypeVector& types, int i,
                     double theta_log_odds);
void update_zeta(ChainState& state, const VoteTypeVector& types,
                 const std::vector<double>& theta_log_odds, Rng& rng);

// Conditional for beta_{i, domain}; domain -1 means the shared (bridge) case
// pooling both domains.
NormalParams beta_conditional(const ChainState& state, const VoteTypeVector& types, int i,
                              int domain);

// sign_legislator >= 0 pins that legislator's two ideal points to a common
// sign by drawing the final-passage point from its truncated conditional.
void update_beta(ChainState& state, const VoteTypeVector& types, Rng& rng,
                 int sign_legislator = -1);

void update_policy_hyper(ChainState& state, const HyperPriors& priors, Rng& rng);

// Log of the unnormalized joint density: observed-cell likelihood, policy
// priors and hyperpriors, bridge-membership regression, coefficient g-prior,
// beta-binomial model prior, logistic prior on the intercept. Augmentation
// latents are marginal quantities and excluded.
double log_joint(const ChainState& state, const VoteMatrix& votes, const VoteTypeVector& types,
                 const DesignMatrix& X, const HyperPriors& priors);

}  // namespace bridgeirt
