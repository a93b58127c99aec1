#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bridgeirt/data.hpp"

namespace bridgeirt {

struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Fixed hyperprior constants. Defaults follow the hierarchical setup used
// throughout: unit normals on the prior means, IG(2,1) on the variances
// (mean 1, infinite variance), uniform on the spike weight.
struct HyperPriors {
  double rho_mu_mean = 0.0;
  double rho_mu_var = 1.0;
  double kappa2_mu_shape = 2.0;
  double kappa2_mu_rate = 1.0;
  double omega_alpha_a = 1.0;
  double omega_alpha_b = 1.0;
  double kappa2_alpha_shape = 2.0;
  double kappa2_alpha_rate = 1.0;
  double rho_beta_mean = 0.0;
  double rho_beta_var = 1.0;
  double sigma2_beta_shape = 2.0;
  double sigma2_beta_rate = 1.0;
};

struct BillParams {
  std::vector<double> mu;
  std::vector<double> alpha;
  std::vector<std::uint8_t> alpha_active;  // false means alpha exactly 0
};

struct IdealPoints {
  std::vector<double> beta0;  // procedural domain
  std::vector<double> beta1;  // final-passage domain
  std::vector<std::uint8_t> zeta;  // zeta[i] = 1 implies beta0[i] == beta1[i] bit-identical
};

struct PolicyHyper {
  double rho_mu = 0.0;
  double kappa2_mu = 1.0;
  double omega_alpha = 0.5;
  double kappa2_alpha = 1.0;
  double rho_beta = 0.0;
  double sigma2_beta = 1.0;
};

// Augmentation layer. y_imputed matches the vote matrix on observed cells;
// nu entries are nonnegative, and a zero removes its cell from every
// conditional. z values are never stored: every update consumes
// nu*z = y - 1/2, which stays finite as nu -> 0.
struct PolicyAugment {
  std::vector<std::uint8_t> y_imputed;  // row-major I*J
  std::vector<double> nu;               // row-major I*J
};

struct BridgeState {
  double eta0 = 0.0;
  std::vector<double> eta;             // eta[k] = 0 exactly whenever !xi[k]
  std::vector<std::uint8_t> xi;
  std::vector<double> nu_bridge;       // length I, nonnegative (0 masks)
  double g = 0.0;                      // fixed to I
};

struct ChainState {
  BillParams bills;
  IdealPoints ideal;
  PolicyHyper hyper;
  PolicyAugment aug;
  BridgeState bridge;
};

// Overflow-safe logistic; exact 0/1 at saturated arguments.
inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^x) without overflow.
inline double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace bridgeirt
