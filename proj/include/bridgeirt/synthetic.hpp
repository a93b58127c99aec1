#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bridgeirt/data.hpp"
#include "bridgeirt/model.hpp"
#include "bridgeirt/rng.hpp"

namespace bridgeirt {

// Forward sampler for the full generative model plus the deliberately naive
// brute-force oracles used by tests. Oracles favor clarity over speed and
// never share code with the sampler's optimized paths.

struct Scenario {
  std::string name = "custom";
  int I = 20;
  int J = 40;
  int p = 2;
  double missing_frac = 0.0;
  double final_frac = 0.5;  // fraction of final-passage bills

  // Generative values for the policy block.
  double rho_mu = 0.0;
  double kappa2_mu = 1.0;
  double omega_alpha = 0.1;
  double kappa2_alpha = 4.0;
  double rho_beta = 0.0;
  double sigma2_beta = 2.0;

  // Bridge regression. NaN eta0 and empty active/effects mean "draw from
  // the prior"; a fixed active set pins xi and sets eta[active[k]] =
  // effects[k] with all other coefficients zero.
  double eta0 = std::numeric_limits<double>::quiet_NaN();
  bool fix_model = false;
  std::vector<int> active;
  std::vector<double> effects;
};

// Presets: "smoke" (I=20, J=40, p=2), "recovery" (I=100, J=300, p=5, 30%
// non-bridges, 5% missing, one active covariate), "paperlike" (I=435,
// J=1000, p=21, full-prior generation).
Scenario scenario_preset(const std::string& name);

struct SyntheticTruth {
  Scenario scenario;
  VoteMatrix votes;
  VoteTypeVector types;
  DesignMatrix X;
  AnchorSpec anchors;

  std::vector<double> mu, alpha;
  std::vector<double> beta0, beta1;
  std::vector<std::uint8_t> zeta;
  double eta0 = 0.0;
  std::vector<double> eta;
  std::vector<std::uint8_t> xi;
};

SyntheticTruth generate(const Scenario& scenario, Rng& rng);

// Exact posterior over all 2^p models given the augmentation, by direct
// enumeration of Bayes factors against the beta-binomial prior. p <= 12.
std::vector<double> exact_model_posterior(const std::vector<double>& nu,
                                          const std::vector<std::uint8_t>& zeta, double eta0,
                                          const DesignMatrix& X);

struct QuadratureResult {
  double norm = 0.0;
  double mean = 0.0;
  double var = 0.0;
};

// Composite Simpson moments of an unnormalized 1-d density on [lo, hi].
QuadratureResult quadrature_moments(const std::function<double(double)>& density, double lo,
                                    double hi, int n);

// Composite Simpson integral of a 2-d integrand on a rectangle.
double integrate_2d(const std::function<double(double, double)>& f, double lox, double hix,
                    double loy, double hiy, int nx, int ny);

}  // namespace bridgeirt
