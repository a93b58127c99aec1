#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bridgeirt/data.hpp"
#include "bridgeirt/model.hpp"
#include "bridgeirt/rng.hpp"

namespace bridgeirt {

// Covariate model for bridge membership: logistic regression with a g-prior
// spike-and-slab over the coefficients, a logistic-prior intercept updated
// by independence Metropolis-Hastings, and a model-space MH move driven by
// a closed-form conditional Bayes factor.
//
// The same no-data convention as the policy block applies: a legislator
// with nu_bridge[i] == 0 contributes nothing to any conditional.

double bridge_probability(double eta0, const std::vector<double>& eta,
                          const Eigen::RowVectorXd& x);

// eta0 + x_i' eta for every legislator.
std::vector<double> bridge_linear_predictors(const BridgeState& state, const DesignMatrix& X);

void draw_bridge_pg(ChainState& state, const DesignMatrix& X, Rng& rng);

struct MhResult {
  bool accepted = false;
};

MhResult update_eta0(ChainState& state, const DesignMatrix& X, Rng& rng);

double log_beta_binomial_prior(const std::vector<std::uint8_t>& xi);

struct ModelProposal {
  std::vector<std::uint8_t> xi;
  double proposal_log_ratio = 0.0;  // log q(xi | xi*) - log q(xi* | xi)
};

ModelProposal propose_model(const std::vector<std::uint8_t>& xi, Rng& rng);

// log q(to | from) under the proposal kernel; exposed for kernel tests.
double log_proposal_prob(const std::vector<std::uint8_t>& from,
                         const std::vector<std::uint8_t>& to);

// log BF of model xi against the null model, conditional on (zeta, eta0) and
// the augmentation nu. Marginalizes the selected coefficients over the
// g-prior under the Gaussianized likelihood; two Cholesky factorizations,
// no explicit inverses.
double log_bayes_factor(const std::vector<std::uint8_t>& xi, const std::vector<double>& nu,
                        const std::vector<std::uint8_t>& zeta, double eta0,
                        const DesignMatrix& X);

MhResult update_model(ChainState& state, const DesignMatrix& X, Rng& rng);

struct EtaConditional {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Gaussian full conditional of the selected coefficients; exposed for tests.
EtaConditional eta_conditional(const std::vector<std::uint8_t>& xi,
                               const std::vector<double>& nu,
                               const std::vector<std::uint8_t>& zeta, double eta0,
                               const DesignMatrix& X, double g);

void update_eta_given_model(ChainState& state, const DesignMatrix& X, Rng& rng);

}  // namespace bridgeirt
