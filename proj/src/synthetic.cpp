#include "bridgeirt/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "bridgeirt/bridge.hpp"

namespace bridgeirt {

Scenario scenario_preset(const std::string& name) {
  Scenario s;
  s.name = name;
  if (name == "smoke") {
    s.I = 20;
    s.J = 40;
    s.p = 2;
    s.eta0 = 1.0;
    s.fix_model = true;  // null model; bridge pattern from the intercept only
  } else if (name == "recovery") {
    s.I = 100;
    s.J = 300;
    s.p = 5;
    s.missing_frac = 0.05;
    s.eta0 = 1.0;  // ~70% bridges before the covariate effect
    s.fix_model = true;
    s.active = {0};
    s.effects = {1.0};
  } else if (name == "recovery-null") {
    s = scenario_preset("recovery");
    s.name = name;
    s.active.clear();
    s.effects.clear();
  } else if (name == "paperlike") {
    s.I = 435;
    s.J = 1000;
    s.p = 21;
    s.missing_frac = 0.04;
  } else if (name == "custom") {
    // caller fills the fields
  } else {
    throw DataError("unknown scenario: " + name);
  }
  return s;
}

namespace {

// Re-observe cells until every bill has a vote and every legislator votes in
// both domains; keeps the masking fraction honest while preserving the
// loader's invariants.
void mask_missing(VoteMatrix& votes, const VoteTypeVector& types, double frac, Rng& rng) {
  if (frac <= 0.0) return;
  std::vector<std::int8_t> saved(votes.votes);
  for (int i = 0; i < votes.I; ++i)
    for (int j = 0; j < votes.J; ++j)
      if (rng.rbernoulli(frac)) votes(i, j) = -1;

  for (int j = 0; j < votes.J; ++j) {
    int seen = 0;
    for (int i = 0; i < votes.I; ++i) seen += votes.observed(i, j);
    if (seen == 0) {
      const int i = static_cast<int>(rng.runif() * votes.I);
      votes(i, j) = saved[static_cast<std::size_t>(i) * votes.J + j];
    }
  }
  for (int i = 0; i < votes.I; ++i) {
    for (int domain = 0; domain < 2; ++domain) {
      int seen = 0;
      for (int j = 0; j < votes.J; ++j)
        if (types.gamma[j] == domain) seen += votes.observed(i, j);
      if (seen > 0) continue;
      for (int j = 0; j < votes.J; ++j) {
        if (types.gamma[j] == domain) {
          votes(i, j) = saved[static_cast<std::size_t>(i) * votes.J + j];
          break;
        }
      }
    }
  }
}

}  // namespace

SyntheticTruth generate(const Scenario& sc, Rng& rng) {
  if (sc.I < 3 || sc.J < 2) throw DataError("scenario too small");
  if (sc.p < 0) throw DataError("scenario needs p >= 0");

  SyntheticTruth t;
  t.scenario = sc;

  t.types.gamma.resize(sc.J);
  for (int j = 0; j < sc.J; ++j) t.types.gamma[j] = rng.rbernoulli(sc.final_frac);
  t.types.gamma[0] = 0;
  t.types.gamma[1] = 1;

  t.X.X.resize(sc.I, sc.p);
  for (int i = 0; i < sc.I; ++i)
    for (int k = 0; k < sc.p; ++k) t.X.X(i, k) = rng.rnorm();
  for (int k = 0; k < sc.p; ++k) t.X.column_names.push_back("x" + std::to_string(k));
  center_columns(t.X);

  t.xi.assign(sc.p, 0);
  t.eta.assign(sc.p, 0.0);
  if (sc.fix_model) {
    for (std::size_t m = 0; m < sc.active.size(); ++m) {
      const int k = sc.active[m];
      if (k < 0 || k >= sc.p) throw DataError("scenario active index out of range");
      t.xi[k] = 1;
      t.eta[k] = sc.effects.at(m);
    }
  } else if (sc.p > 0) {
    // Beta-binomial(1,1): model size uniform on {0..p}, subset uniform given
    // the size.
    const int pstar = static_cast<int>(rng.runif() * (sc.p + 1));
    std::vector<int> idx(sc.p);
    for (int k = 0; k < sc.p; ++k) idx[k] = k;
    for (int m = 0; m < pstar; ++m) {
      const int r = m + static_cast<int>(rng.runif() * (sc.p - m));
      std::swap(idx[m], idx[std::min(r, sc.p - 1)]);
      t.xi[idx[m]] = 1;
    }
    if (pstar > 0) {
      Eigen::MatrixXd Xs(sc.I, pstar);
      int c = 0;
      for (int k = 0; k < sc.p; ++k)
        if (t.xi[k]) Xs.col(c++) = t.X.X.col(k);
      const Eigen::MatrixXd A = Xs.transpose() * Xs;
      Eigen::LLT<Eigen::MatrixXd> llt(A);
      if (llt.info() != Eigen::Success) throw NumericError("singular synthetic design");
      Eigen::VectorXd eps(pstar);
      for (int k = 0; k < pstar; ++k) eps[k] = rng.rnorm();
      // covariance 4 g (X'X)^{-1} with g = I
      const Eigen::VectorXd draw =
          std::sqrt(4.0 * sc.I) * llt.matrixU().solve(eps);
      c = 0;
      for (int k = 0; k < sc.p; ++k)
        if (t.xi[k]) t.eta[k] = draw[c++];
    }
  }
  t.eta0 = std::isnan(sc.eta0) ? rng.rlogistic() : sc.eta0;

  t.zeta.resize(sc.I);
  t.beta0.resize(sc.I);
  t.beta1.resize(sc.I);
  const double sd_beta = std::sqrt(sc.sigma2_beta);
  for (int i = 0; i < sc.I; ++i) {
    double psi = t.eta0;
    for (int k = 0; k < sc.p; ++k) psi += t.X.X(i, k) * t.eta[k];
    t.zeta[i] = rng.rbernoulli(logistic(psi));
    t.beta0[i] = rng.rnorm(sc.rho_beta, sd_beta);
    t.beta1[i] = t.zeta[i] ? t.beta0[i] : rng.rnorm(sc.rho_beta, sd_beta);
  }

  t.mu.resize(sc.J);
  t.alpha.resize(sc.J);
  const double sd_mu = std::sqrt(sc.kappa2_mu);
  const double sd_alpha = std::sqrt(sc.kappa2_alpha);
  for (int j = 0; j < sc.J; ++j) {
    t.mu[j] = rng.rnorm(sc.rho_mu, sd_mu);
    t.alpha[j] = rng.rbernoulli(sc.omega_alpha) ? 0.0 : rng.rnorm(0.0, sd_alpha);
  }

  t.votes.I = sc.I;
  t.votes.J = sc.J;
  t.votes.votes.resize(static_cast<std::size_t>(sc.I) * sc.J);
  for (int i = 0; i < sc.I; ++i) {
    t.votes.legislator_ids.push_back("L" + std::to_string(i));
    for (int j = 0; j < sc.J; ++j) {
      const double beta = t.types.gamma[j] ? t.beta1[i] : t.beta0[i];
      const double pr = logistic(t.mu[j] + t.alpha[j] * beta);
      t.votes(i, j) = rng.rbernoulli(pr);
    }
  }
  for (int j = 0; j < sc.J; ++j) t.votes.bill_ids.push_back("B" + std::to_string(j));
  mask_missing(t.votes, t.types, sc.missing_frac, rng);

  // Anchors: the extreme procedural positions; the high anchor doubles as
  // the sign legislator.
  int lo = 0, hi = 0;
  for (int i = 1; i < sc.I; ++i) {
    if (t.beta0[i] < t.beta0[lo]) lo = i;
    if (t.beta0[i] > t.beta0[hi]) hi = i;
  }
  t.anchors.anchor_low = lo;
  t.anchors.anchor_high = hi;
  t.anchors.anchor_values = {-1.0, 1.0};
  t.anchors.sign_legislator = hi;
  return t;
}

std::vector<double> exact_model_posterior(const std::vector<double>& nu,
                                          const std::vector<std::uint8_t>& zeta, double eta0,
                                          const DesignMatrix& X) {
  const int p = X.p();
  if (p > 12) throw DataError("exact enumeration limited to p <= 12");
  const std::size_t n_models = std::size_t(1) << p;

  std::vector<double> log_w(n_models);
  for (std::size_t mask = 0; mask < n_models; ++mask) {
    std::vector<std::uint8_t> xi(p);
    for (int k = 0; k < p; ++k) xi[k] = (mask >> k) & 1;
    log_w[mask] = log_bayes_factor(xi, nu, zeta, eta0, X) + log_beta_binomial_prior(xi);
  }
  const double mx = *std::max_element(log_w.begin(), log_w.end());
  double z = 0.0;
  for (double& w : log_w) {
    w = std::exp(w - mx);
    z += w;
  }
  for (double& w : log_w) w /= z;
  return log_w;
}

QuadratureResult quadrature_moments(const std::function<double(double)>& density, double lo,
                                    double hi, int n) {
  if (n % 2 == 1) ++n;
  const double h = (hi - lo) / n;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = lo + k * h;
    const double f = density(x);
    if (!std::isfinite(f)) throw NumericError("non-finite integrand in quadrature");
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    s0 += w * f;
    s1 += w * f * x;
    s2 += w * f * x * x;
  }
  QuadratureResult out;
  out.norm = s0 * h / 3.0;
  out.mean = s1 / s0;
  out.var = s2 / s0 - out.mean * out.mean;
  return out;
}

double integrate_2d(const std::function<double(double, double)>& f, double lox, double hix,
                    double loy, double hiy, int nx, int ny) {
  if (nx % 2 == 1) ++nx;
  if (ny % 2 == 1) ++ny;
  const double hx = (hix - lox) / nx;
  const double hy = (hiy - loy) / ny;
  double total = 0.0;
  for (int a = 0; a <= nx; ++a) {
    const double wx = (a == 0 || a == nx) ? 1.0 : (a % 2 == 1 ? 4.0 : 2.0);
    const double x = lox + a * hx;
    double row = 0.0;
    for (int b = 0; b <= ny; ++b) {
      const double wy = (b == 0 || b == ny) ? 1.0 : (b % 2 == 1 ? 4.0 : 2.0);
      const double v = f(x, loy + b * hy);
      if (!std::isfinite(v)) throw NumericError("non-finite integrand in quadrature");
      row += wy * v;
    }
    total += wx * row;
  }
  return total * hx * hy / 9.0;
}

}  // namespace bridgeirt
