#include "bridgeirt/ideal_points.hpp"

#include <cmath>

#include "bridgeirt/polya_gamma.hpp"

// Conventions used by every conditional in this file:
//  - The augmented likelihood for cell (i,j) is Gaussian in the linear
//    predictor with precision nu_{i,j} and pseudo-observation
//    z_{i,j} = (y_{i,j} - 1/2)/nu_{i,j}.  z is never formed directly:
//    sums only ever need nu*z = y - 1/2, which stays finite as nu -> 0.
//  - A cell with nu == 0 contributes nothing to any conditional (the
//    no-data limit); live sweeps always produce nu > 0.

namespace bridgeirt {

namespace {

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * std::log(2.0 * M_PI * var) - 0.5 * d * d / var;
}

double log_invgamma_pdf(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - rate / x;
}

double log_beta_pdf(double x, double a, double b) {
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
         (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

}  // namespace

double vote_probability(double mu_j, double alpha_j, double beta) {
  return logistic(mu_j + alpha_j * beta);
}

void impute_missing(ChainState& state, const VoteMatrix& votes, const VoteTypeVector& types,
                    Rng& rng) {
  for (int i = 0; i < votes.I; ++i) {
    for (int j = 0; j < votes.J; ++j) {
      if (votes.observed(i, j)) continue;
      const double beta =
          types.gamma[j] ? state.ideal.beta1[i] : state.ideal.beta0[i];
      const double p = vote_probability(state.bills.mu[j], state.bills.alpha[j], beta);
      state.aug.y_imputed[static_cast<std::size_t>(i) * votes.J + j] = rng.rbernoulli(p);
    }
  }
}

void draw_policy_pg(ChainState& state, const VoteTypeVector& types, Rng& rng) {
  const int I = static_cast<int>(state.ideal.beta0.size());
  const int J = static_cast<int>(state.bills.mu.size());
  for (int i = 0; i < I; ++i) {
    for (int j = 0; j < J; ++j) {
      const double beta = types.gamma[j] ? state.ideal.beta1[i] : state.ideal.beta0[i];
      const double psi = state.bills.mu[j] + state.bills.alpha[j] * beta;
      state.aug.nu[static_cast<std::size_t>(i) * J + j] = draw_pg1(psi, rng);
    }
  }
}

NormalParams mu_conditional(const ChainState& state, const VoteTypeVector& types, int j) {
  const int I = static_cast<int>(state.ideal.beta0.size());
  const int J = static_cast<int>(state.bills.mu.size());
  double prec = 1.0 / state.hyper.kappa2_mu;
  double score = state.hyper.rho_mu / state.hyper.kappa2_mu;
  for (int i = 0; i < I; ++i) {
    const double nu = state.aug.nu[static_cast<std::size_t>(i) * J + j];
    if (nu == 0.0) continue;
    const double beta = types.gamma[j] ? state.ideal.beta1[i] : state.ideal.beta0[i];
    const double y = state.aug.y_imputed[static_cast<std::size_t>(i) * J + j];
    prec += nu;
    score += (y - 0.5) - nu * state.bills.alpha[j] * beta;
  }
  NormalParams out;
  out.var = 1.0 / prec;
  out.mean = out.var * score;
  return out;
}

void update_mu(ChainState& state, const VoteTypeVector& types, Rng& rng) {
  const int J = static_cast<int>(state.bills.mu.size());
  for (int j = 0; j < J; ++j) {
    const NormalParams c = mu_conditional(state, types, j);
    state.bills.mu[j] = rng.rnorm(c.mean, std::sqrt(c.var));
  }
}

SpikeSlabParams alpha_conditional(const ChainState& state, const VoteTypeVector& types, int j) {
  const int I = static_cast<int>(state.ideal.beta0.size());
  const int J = static_cast<int>(state.bills.mu.size());
  double prec = 1.0 / state.hyper.kappa2_alpha;
  double score = 0.0;
  for (int i = 0; i < I; ++i) {
    const double nu = state.aug.nu[static_cast<std::size_t>(i) * J + j];
    if (nu == 0.0) continue;
    const double beta = types.gamma[j] ? state.ideal.beta1[i] : state.ideal.beta0[i];
    const double y = state.aug.y_imputed[static_cast<std::size_t>(i) * J + j];
    prec += nu * beta * beta;
    score += ((y - 0.5) - nu * state.bills.mu[j]) * beta;
  }
  SpikeSlabParams out;
  out.var = 1.0 / prec;
  out.mean = out.var * score;

  const double omega = state.hyper.omega_alpha;
  if (omega <= 0.0) {
    out.spike_prob = 0.0;
  } else if (omega >= 1.0) {
    out.spike_prob = 1.0;
  } else {
    // Posterior spike odds: prior odds times the marginal-likelihood ratio
    // of the exact zero against the slab, sqrt(kappa2/var) exp(-mean^2/2var).
    const double log_odds = std::log(omega) - std::log1p(-omega) +
                            0.5 * (std::log(state.hyper.kappa2_alpha) - std::log(out.var)) -
                            0.5 * out.mean * out.mean / out.var;
    out.spike_prob = logistic(log_odds);
  }
  return out;
}

void update_alpha(ChainState& state, const VoteTypeVector& types, Rng& rng) {
  const int J = static_cast<int>(state.bills.mu.size());
  for (int j = 0; j < J; ++j) {
    const SpikeSlabParams c = alpha_conditional(state, types, j);
    if (rng.rbernoulli(c.spike_prob)) {
      state.bills.alpha[j] = 0.0;
      state.bills.alpha_active[j] = 0;
    } else {
      state.bills.alpha[j] = rng.rnorm(c.mean, std::sqrt(c.var));
      state.bills.alpha_active[j] = 1;
    }
  }
}

double zeta_log_odds(const ChainState& state, const VoteTypeVector& types, int i,
                     double theta_log_odds) {
  const int J = static_cast<int>(state.bills.mu.size());
  // Per-domain sufficient statistics of the Gaussianized likelihood for
  // beta_i, with the prior mean rho_beta absorbed into the score so both
  // marginal likelihoods share one quadratic form.
  double a[2] = {0.0, 0.0};  // sum nu alpha^2
  double s[2] = {0.0, 0.0};  // sum nu (z - mu - rho_beta alpha) alpha
  for (int j = 0; j < J; ++j) {
    const double nu = state.aug.nu[static_cast<std::size_t>(i) * J + j];
    if (nu == 0.0) continue;
    const double alpha = state.bills.alpha[j];
    if (alpha == 0.0) continue;
    const double y = state.aug.y_imputed[static_cast<std::size_t>(i) * J + j];
    const int d = types.gamma[j];
    a[d] += nu * alpha * alpha;
    s[d] += ((y - 0.5) - nu * (state.bills.mu[j] + state.hyper.rho_beta * alpha)) * alpha;
  }
  const double prior_prec = 1.0 / state.hyper.sigma2_beta;
  const double var_shared = 1.0 / (prior_prec + a[0] + a[1]);
  const double var0 = 1.0 / (prior_prec + a[0]);
  const double var1 = 1.0 / (prior_prec + a[1]);
  const double s_shared = s[0] + s[1];
  return theta_log_odds +
         0.5 * (std::log(state.hyper.sigma2_beta) + std::log(var_shared) - std::log(var0) -
                std::log(var1)) +
         0.5 * (var_shared * s_shared * s_shared - var0 * s[0] * s[0] - var1 * s[1] * s[1]);
}

void update_zeta(ChainState& state, const VoteTypeVector& types,
                 const std::vector<double>& theta_log_odds, Rng& rng) {
  const int I = static_cast<int>(state.ideal.beta0.size());
  for (int i = 0; i < I; ++i) {
    const double lo = zeta_log_odds(state, types, i, theta_log_odds[i]);
    state.ideal.zeta[i] = rng.rbernoulli(logistic(lo));
  }
}

NormalParams beta_conditional(const ChainState& state, const VoteTypeVector& types, int i,
                              int domain) {
  const int J = static_cast<int>(state.bills.mu.size());
  double prec = 1.0 / state.hyper.sigma2_beta;
  double score = state.hyper.rho_beta / state.hyper.sigma2_beta;
  for (int j = 0; j < J; ++j) {
    if (domain >= 0 && types.gamma[j] != domain) continue;
    const double nu = state.aug.nu[static_cast<std::size_t>(i) * J + j];
    if (nu == 0.0) continue;
    const double alpha = state.bills.alpha[j];
    if (alpha == 0.0) continue;
    const double y = state.aug.y_imputed[static_cast<std::size_t>(i) * J + j];
    prec += nu * alpha * alpha;
    score += ((y - 0.5) - nu * state.bills.mu[j]) * alpha;
  }
  NormalParams out;
  out.var = 1.0 / prec;
  out.mean = out.var * score;
  return out;
}

void update_beta(ChainState& state, const VoteTypeVector& types, Rng& rng,
                 int sign_legislator) {
  const int I = static_cast<int>(state.ideal.beta0.size());
  for (int i = 0; i < I; ++i) {
    if (state.ideal.zeta[i]) {
      const NormalParams c = beta_conditional(state, types, i, -1);
      const double b = rng.rnorm(c.mean, std::sqrt(c.var));
      state.ideal.beta0[i] = b;
      state.ideal.beta1[i] = b;
    } else {
      const NormalParams c0 = beta_conditional(state, types, i, 0);
      state.ideal.beta0[i] = rng.rnorm(c0.mean, std::sqrt(c0.var));
      const NormalParams c1 = beta_conditional(state, types, i, 1);
      if (i == sign_legislator) {
        // The two scales stay mutually oriented by pinning this legislator's
        // final-passage point to the sign of the procedural one.
        state.ideal.beta1[i] =
            rng.rtruncnorm_sign(c1.mean, std::sqrt(c1.var), state.ideal.beta0[i] >= 0.0);
      } else {
        state.ideal.beta1[i] = rng.rnorm(c1.mean, std::sqrt(c1.var));
      }
    }
  }
}

void update_policy_hyper(ChainState& state, const HyperPriors& priors, Rng& rng) {
  const int J = static_cast<int>(state.bills.mu.size());
  const int I = static_cast<int>(state.ideal.beta0.size());

  double sum_mu = 0.0;
  for (double m : state.bills.mu) sum_mu += m;
  {
    const double v =
        1.0 / (1.0 / priors.rho_mu_var + J / state.hyper.kappa2_mu);
    const double m = v * (priors.rho_mu_mean / priors.rho_mu_var + sum_mu / state.hyper.kappa2_mu);
    state.hyper.rho_mu = rng.rnorm(m, std::sqrt(v));
  }
  {
    double ss = 0.0;
    for (double m : state.bills.mu) {
      const double d = m - state.hyper.rho_mu;
      ss += d * d;
    }
    state.hyper.kappa2_mu =
        rng.rinvgamma(priors.kappa2_mu_shape + 0.5 * J, priors.kappa2_mu_rate + 0.5 * ss);
  }

  int n_active = 0;
  double ss_alpha = 0.0;
  for (int j = 0; j < J; ++j) {
    if (state.bills.alpha_active[j]) {
      ++n_active;
      ss_alpha += state.bills.alpha[j] * state.bills.alpha[j];
    }
  }
  state.hyper.kappa2_alpha = rng.rinvgamma(priors.kappa2_alpha_shape + 0.5 * n_active,
                                           priors.kappa2_alpha_rate + 0.5 * ss_alpha);
  state.hyper.omega_alpha =
      rng.rbeta(priors.omega_alpha_a + (J - n_active), priors.omega_alpha_b + n_active);

  // A bridge holds one ideal point, a non-bridge two; the beta-level prior
  // sees exactly the distinct values.
  int n_points = 0;
  double sum_beta = 0.0;
  for (int i = 0; i < I; ++i) {
    sum_beta += state.ideal.beta0[i];
    ++n_points;
    if (!state.ideal.zeta[i]) {
      sum_beta += state.ideal.beta1[i];
      ++n_points;
    }
  }
  {
    const double v =
        1.0 / (1.0 / priors.rho_beta_var + n_points / state.hyper.sigma2_beta);
    const double m =
        v * (priors.rho_beta_mean / priors.rho_beta_var + sum_beta / state.hyper.sigma2_beta);
    state.hyper.rho_beta = rng.rnorm(m, std::sqrt(v));
  }
  {
    double ss = 0.0;
    for (int i = 0; i < I; ++i) {
      const double d0 = state.ideal.beta0[i] - state.hyper.rho_beta;
      ss += d0 * d0;
      if (!state.ideal.zeta[i]) {
        const double d1 = state.ideal.beta1[i] - state.hyper.rho_beta;
        ss += d1 * d1;
      }
    }
    state.hyper.sigma2_beta = rng.rinvgamma(priors.sigma2_beta_shape + 0.5 * n_points,
                                            priors.sigma2_beta_rate + 0.5 * ss);
  }
}

double log_joint(const ChainState& state, const VoteMatrix& votes, const VoteTypeVector& types,
                 const DesignMatrix& X, const HyperPriors& priors) {
  double lp = 0.0;
  for (int i = 0; i < votes.I; ++i) {
    for (int j = 0; j < votes.J; ++j) {
      const std::int8_t y = votes(i, j);
      if (y < 0) continue;
      const double beta = types.gamma[j] ? state.ideal.beta1[i] : state.ideal.beta0[i];
      const double psi = state.bills.mu[j] + state.bills.alpha[j] * beta;
      lp += y * psi - log1p_exp(psi);
    }
  }

  for (int j = 0; j < votes.J; ++j) {
    lp += log_normal_pdf(state.bills.mu[j], state.hyper.rho_mu, state.hyper.kappa2_mu);
    if (state.bills.alpha_active[j])
      lp += std::log1p(-state.hyper.omega_alpha) +
            log_normal_pdf(state.bills.alpha[j], 0.0, state.hyper.kappa2_alpha);
    else
      lp += std::log(state.hyper.omega_alpha);
  }

  for (int i = 0; i < votes.I; ++i) {
    lp += log_normal_pdf(state.ideal.beta0[i], state.hyper.rho_beta, state.hyper.sigma2_beta);
    if (!state.ideal.zeta[i])
      lp += log_normal_pdf(state.ideal.beta1[i], state.hyper.rho_beta, state.hyper.sigma2_beta);
    double psi = state.bridge.eta0;
    for (int k = 0; k < X.p(); ++k) psi += X.X(i, k) * state.bridge.eta[k];
    lp += state.ideal.zeta[i] * psi - log1p_exp(psi);
  }

  lp += log_normal_pdf(state.hyper.rho_mu, priors.rho_mu_mean, priors.rho_mu_var);
  lp += log_invgamma_pdf(state.hyper.kappa2_mu, priors.kappa2_mu_shape, priors.kappa2_mu_rate);
  lp += log_beta_pdf(state.hyper.omega_alpha, priors.omega_alpha_a, priors.omega_alpha_b);
  lp += log_invgamma_pdf(state.hyper.kappa2_alpha, priors.kappa2_alpha_shape,
                         priors.kappa2_alpha_rate);
  lp += log_normal_pdf(state.hyper.rho_beta, priors.rho_beta_mean, priors.rho_beta_var);
  lp += log_invgamma_pdf(state.hyper.sigma2_beta, priors.sigma2_beta_shape,
                         priors.sigma2_beta_rate);

  // Intercept carries a standard logistic prior.
  lp += state.bridge.eta0 - 2.0 * log1p_exp(state.bridge.eta0);

  // Coefficient g-prior on the selected columns and the beta-binomial model
  // prior over the selection itself.
  const int p = X.p();
  if (p > 0) {
    int pstar = 0;
    for (int k = 0; k < p; ++k) pstar += state.bridge.xi[k];
    lp += std::lgamma(pstar + 1.0) + std::lgamma(p - pstar + 1.0) - std::lgamma(p + 2.0);
    if (pstar > 0) {
      Eigen::MatrixXd Xs(X.X.rows(), pstar);
      Eigen::VectorXd es(pstar);
      int c = 0;
      for (int k = 0; k < p; ++k) {
        if (!state.bridge.xi[k]) continue;
        Xs.col(c) = X.X.col(k);
        es[c] = state.bridge.eta[k];
        ++c;
      }
      const Eigen::MatrixXd A = Xs.transpose() * Xs;
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() != Eigen::Success)
        throw NumericError("singular design in coefficient prior");
      double logdet_a = 0.0;
      for (int k = 0; k < pstar; ++k) logdet_a += std::log(llt.matrixL()(k, k));
      logdet_a *= 2.0;
      const double quad = es.dot(A * es) / (4.0 * state.bridge.g);
      lp += -0.5 * pstar * std::log(2.0 * M_PI) -
            0.5 * (pstar * std::log(4.0 * state.bridge.g) - logdet_a) - 0.5 * quad;
    }
  }
  return lp;
}

}  // namespace bridgeirt
