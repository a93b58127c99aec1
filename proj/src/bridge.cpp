#include "bridgeirt/bridge.hpp"

#include <cmath>

#include "bridgeirt/polya_gamma.hpp"

namespace bridgeirt {

namespace {

// Flip-size weights for the model move; sizes past p collapse onto p.
constexpr double kFlipWeights[4] = {0.6, 0.2, 0.15, 0.05};
constexpr double kFlipMoveProb = 0.9;

int count_active(const std::vector<std::uint8_t>& xi) {
  int n = 0;
  for (auto b : xi) n += b;
  return n;
}

double flip_size_prob(int k, int p) {
  // P(flip size = k) after capping the drawn size at p.
  if (k < 1 || k > std::min(4, p)) return 0.0;
  if (k < p || p >= 4) return kFlipWeights[k - 1];
  double tail = 0.0;
  for (int m = k; m <= 4; ++m) tail += kFlipWeights[m - 1];
  return tail;
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Selected columns of X as a dense matrix.
Eigen::MatrixXd selected_columns(const std::vector<std::uint8_t>& xi, const DesignMatrix& X,
                                 int pstar) {
  Eigen::MatrixXd Xs(X.X.rows(), pstar);
  int c = 0;
  for (int k = 0; k < X.p(); ++k)
    if (xi[k]) Xs.col(c++) = X.X.col(k);
  return Xs;
}

// Entries of V(z - eta0): (zeta - 1/2) - nu * eta0, zero for masked cells.
Eigen::VectorXd weighted_residual(const std::vector<double>& nu,
                                  const std::vector<std::uint8_t>& zeta, double eta0) {
  const int n = static_cast<int>(nu.size());
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i)
    w[i] = nu[i] == 0.0 ? 0.0 : (zeta[i] - 0.5) - nu[i] * eta0;
  return w;
}

double log_student_t4(double x, double center, double scale) {
  const double u = (x - center) / scale;
  return -std::log(scale) - 2.5 * std::log1p(0.25 * u * u);
}

struct BfDecomposition {
  Eigen::LLT<Eigen::MatrixXd> llt_m;  // M = Xs' V Xs + Xs' Xs / (4g)
  Eigen::VectorXd u;                  // Xs' V (z - eta0)
  double log_bf = 0.0;
};

BfDecomposition bf_decomposition(const std::vector<std::uint8_t>& xi,
                                 const std::vector<double>& nu,
                                 const std::vector<std::uint8_t>& zeta, double eta0,
                                 const DesignMatrix& X, double g) {
  const int pstar = count_active(xi);
  BfDecomposition out;
  if (pstar == 0) return out;

  const Eigen::MatrixXd Xs = selected_columns(xi, X, pstar);
  const Eigen::MatrixXd A = Xs.transpose() * Xs;
  Eigen::LLT<Eigen::MatrixXd> llt_a(A);
  if (llt_a.info() != Eigen::Success)
    throw NumericError("collinear selected covariate columns");

  Eigen::VectorXd nu_vec(Xs.rows());
  for (int i = 0; i < nu_vec.size(); ++i) nu_vec[i] = nu[i];
  const Eigen::MatrixXd M =
      Xs.transpose() * nu_vec.asDiagonal() * Xs + A / (4.0 * g);
  out.llt_m.compute(M);
  if (out.llt_m.info() != Eigen::Success)
    throw NumericError("singular posterior precision for selected coefficients");

  out.u = Xs.transpose() * weighted_residual(nu, zeta, eta0);

  double logdet_a = 0.0, logdet_m = 0.0;
  for (int k = 0; k < pstar; ++k) {
    logdet_a += std::log(llt_a.matrixL()(k, k));
    logdet_m += std::log(out.llt_m.matrixL()(k, k));
  }
  logdet_a *= 2.0;
  logdet_m *= 2.0;

  const double quad = out.u.dot(out.llt_m.solve(out.u));
  out.log_bf = -0.5 * (pstar * std::log(4.0 * g) + logdet_m - logdet_a) + 0.5 * quad;
  return out;
}

}  // namespace

double bridge_probability(double eta0, const std::vector<double>& eta,
                          const Eigen::RowVectorXd& x) {
  double psi = eta0;
  for (int k = 0; k < x.size(); ++k) psi += x[k] * eta[k];
  return logistic(psi);
}

std::vector<double> bridge_linear_predictors(const BridgeState& state, const DesignMatrix& X) {
  const int n = static_cast<int>(X.X.rows());
  std::vector<double> psi(n, state.eta0);
  for (int k = 0; k < X.p(); ++k) {
    const double e = state.eta[k];
    if (e == 0.0) continue;
    for (int i = 0; i < n; ++i) psi[i] += X.X(i, k) * e;
  }
  return psi;
}

void draw_bridge_pg(ChainState& state, const DesignMatrix& X, Rng& rng) {
  const std::vector<double> psi = bridge_linear_predictors(state.bridge, X);
  for (std::size_t i = 0; i < psi.size(); ++i)
    state.bridge.nu_bridge[i] = draw_pg1(psi[i], rng);
}

MhResult update_eta0(ChainState& state, const DesignMatrix& X, Rng& rng) {
  const int n = static_cast<int>(X.X.rows());
  double t1 = 0.0, t2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double nu = state.bridge.nu_bridge[i];
    if (nu == 0.0) continue;
    double xe = 0.0;
    for (int k = 0; k < X.p(); ++k) xe += X.X(i, k) * state.bridge.eta[k];
    t1 += (state.ideal.zeta[i] - 0.5) - nu * xe;
    t2 += nu;
  }

  // Independence proposal: Student-t(4) centered on the Gaussian-likelihood
  // mode; with no data contribution, a wide fixed-scale fallback over the
  // logistic prior.
  const double center = t2 > 0.0 ? t1 / t2 : 0.0;
  const double scale = t2 > 0.0 ? std::sqrt(1.0 / t2) : 2.0;

  auto log_target = [&](double e0) {
    return t1 * e0 - 0.5 * t2 * e0 * e0 + e0 - 2.0 * log1p_exp(e0);
  };

  const double cur = state.bridge.eta0;
  const double prop = center + scale * rng.rstudent_t(4.0);
  const double delta = (log_target(prop) - log_target(cur)) -
                       (log_student_t4(prop, center, scale) -
                        log_student_t4(cur, center, scale));
  MhResult res;
  if (std::log(rng.runif()) < delta) {
    state.bridge.eta0 = prop;
    res.accepted = true;
  }
  return res;
}

double log_beta_binomial_prior(const std::vector<std::uint8_t>& xi) {
  const int p = static_cast<int>(xi.size());
  const int pstar = count_active(xi);
  return std::lgamma(pstar + 1.0) + std::lgamma(p - pstar + 1.0) - std::lgamma(p + 2.0);
}

ModelProposal propose_model(const std::vector<std::uint8_t>& xi, Rng& rng) {
  const int p = static_cast<int>(xi.size());
  if (p < 1) throw std::invalid_argument("propose_model: empty model space");
  const int pstar = count_active(xi);
  const bool boundary = pstar == 0 || pstar == p;

  ModelProposal prop;
  prop.xi = xi;
  const bool flip_move = boundary || rng.runif() < kFlipMoveProb;
  if (flip_move) {
    const double u = rng.runif();
    int k = 4;
    double acc = 0.0;
    for (int m = 1; m <= 4; ++m) {
      acc += kFlipWeights[m - 1];
      if (u < acc) {
        k = m;
        break;
      }
    }
    k = std::min(k, p);
    // partial Fisher-Yates for k distinct positions
    std::vector<int> idx(p);
    for (int m = 0; m < p; ++m) idx[m] = m;
    for (int m = 0; m < k; ++m) {
      const int r = m + static_cast<int>(rng.runif() * (p - m));
      std::swap(idx[m], idx[std::min(r, p - 1)]);
      prop.xi[idx[m]] ^= 1;
    }
  } else {
    const int pick_in = static_cast<int>(rng.runif() * pstar);
    const int pick_out = static_cast<int>(rng.runif() * (p - pstar));
    int seen_in = 0, seen_out = 0;
    for (int m = 0; m < p; ++m) {
      if (xi[m]) {
        if (seen_in++ == pick_in) prop.xi[m] = 0;
      } else {
        if (seen_out++ == pick_out) prop.xi[m] = 1;
      }
    }
  }
  prop.proposal_log_ratio = log_proposal_prob(prop.xi, xi) - log_proposal_prob(xi, prop.xi);
  return prop;
}

double log_proposal_prob(const std::vector<std::uint8_t>& from,
                         const std::vector<std::uint8_t>& to) {
  const int p = static_cast<int>(from.size());
  const int pstar_from = count_active(from);
  const int pstar_to = count_active(to);
  int hamming = 0;
  for (int k = 0; k < p; ++k) hamming += from[k] != to[k];

  const bool boundary = pstar_from == 0 || pstar_from == p;
  const double flip_move_prob = boundary ? 1.0 : kFlipMoveProb;

  double q = 0.0;
  const double size_prob = flip_size_prob(hamming, p);
  if (size_prob > 0.0)
    q += flip_move_prob * size_prob * std::exp(-log_choose(p, hamming));
  if (!boundary && hamming == 2 && pstar_from == pstar_to)
    q += (1.0 - kFlipMoveProb) / (static_cast<double>(pstar_from) * (p - pstar_from));
  return std::log(q);
}

double log_bayes_factor(const std::vector<std::uint8_t>& xi, const std::vector<double>& nu,
                        const std::vector<std::uint8_t>& zeta, double eta0,
                        const DesignMatrix& X) {
  const double g = static_cast<double>(X.X.rows());
  return bf_decomposition(xi, nu, zeta, eta0, X, g).log_bf;
}

MhResult update_model(ChainState& state, const DesignMatrix& X, Rng& rng) {
  MhResult res;
  if (X.p() == 0) return res;

  const ModelProposal prop = propose_model(state.bridge.xi, rng);
  const double lbf_cur = log_bayes_factor(state.bridge.xi, state.bridge.nu_bridge,
                                          state.ideal.zeta, state.bridge.eta0, X);
  const double lbf_prop = log_bayes_factor(prop.xi, state.bridge.nu_bridge, state.ideal.zeta,
                                           state.bridge.eta0, X);
  const int p = X.p();
  const double log_prior_ratio = log_choose(p, count_active(state.bridge.xi)) -
                                 log_choose(p, count_active(prop.xi));
  const double delta = lbf_prop - lbf_cur + log_prior_ratio + prop.proposal_log_ratio;
  if (std::log(rng.runif()) < delta) {
    state.bridge.xi = prop.xi;
    res.accepted = true;
  }
  // Coefficients are refreshed from their Gaussian full conditional whether
  // or not the model move was accepted.
  update_eta_given_model(state, X, rng);
  return res;
}

EtaConditional eta_conditional(const std::vector<std::uint8_t>& xi,
                               const std::vector<double>& nu,
                               const std::vector<std::uint8_t>& zeta, double eta0,
                               const DesignMatrix& X, double g) {
  const BfDecomposition d = bf_decomposition(xi, nu, zeta, eta0, X, g);
  EtaConditional out;
  const int pstar = count_active(xi);
  if (pstar == 0) return out;
  out.mean = d.llt_m.solve(d.u);
  out.cov = d.llt_m.solve(Eigen::MatrixXd::Identity(pstar, pstar));
  return out;
}

void update_eta_given_model(ChainState& state, const DesignMatrix& X, Rng& rng) {
  const int p = X.p();
  const int pstar = count_active(state.bridge.xi);
  std::fill(state.bridge.eta.begin(), state.bridge.eta.end(), 0.0);
  if (pstar == 0) return;

  const BfDecomposition d =
      bf_decomposition(state.bridge.xi, state.bridge.nu_bridge, state.ideal.zeta,
                       state.bridge.eta0, X, state.bridge.g);
  const Eigen::VectorXd mean = d.llt_m.solve(d.u);
  Eigen::VectorXd eps(pstar);
  for (int k = 0; k < pstar; ++k) eps[k] = rng.rnorm();
  // M = L L'; mean + L^{-T} eps has covariance M^{-1}.
  const Eigen::VectorXd draw =
      mean + d.llt_m.matrixU().solve(eps);

  int c = 0;
  for (int k = 0; k < p; ++k)
    if (state.bridge.xi[k]) state.bridge.eta[k] = draw[c++];
}

}  // namespace bridgeirt
