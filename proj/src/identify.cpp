#include "bridgeirt/identify.hpp"

#include <cmath>

namespace bridgeirt {

namespace {

std::vector<double> all_linear_predictors(const ChainState& state,
                                          const VoteTypeVector& types) {
  const int I = static_cast<int>(state.ideal.beta0.size());
  const int J = static_cast<int>(state.bills.mu.size());
  std::vector<double> psi(static_cast<std::size_t>(I) * J);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      const double beta = types.gamma[j] ? state.ideal.beta1[i] : state.ideal.beta0[i];
      psi[static_cast<std::size_t>(i) * J + j] =
          state.bills.mu[j] + state.bills.alpha[j] * beta;
    }
  return psi;
}

}  // namespace

bool check_min_bridges(const IdealPoints& ideal) {
  int n = 0;
  for (auto z : ideal.zeta) {
    n += z;
    if (n >= 2) return true;
  }
  return false;
}

bool align_signs(ChainState& state, const AnchorSpec& spec, IdentifyReport* report) {
  if (state.ideal.beta0[spec.anchor_high] >= state.ideal.beta0[spec.anchor_low]) return false;
  for (auto& b : state.ideal.beta0) b = -b;
  for (auto& b : state.ideal.beta1) b = -b;
  for (auto& a : state.bills.alpha) a = -a;
  if (report) ++report->reflections_applied;
  return true;
}

AffineMap anchor_map(const ChainState& state, const AnchorSpec& spec) {
  AffineMap map;
  const double b_lo = state.ideal.beta0[spec.anchor_low];
  const double b_hi = state.ideal.beta0[spec.anchor_high];
  const double v_lo = spec.anchor_values[0];
  const double v_hi = spec.anchor_values[1];
  if (b_lo == b_hi) {
    map.degenerate = true;
    return map;
  }
  // Solve beta = a + s v at both anchors: (beta - a)/s maps b_lo -> v_lo,
  // b_hi -> v_hi.
  map.scale = (b_hi - b_lo) / (v_hi - v_lo);
  map.shift = b_lo - map.scale * v_lo;
  return map;
}

void anchor_transform(ChainState& state, const AnchorSpec& spec, const VoteTypeVector& types,
                      IdentifyReport* report, bool audit) {
  const AffineMap map = anchor_map(state, spec);
  if (map.degenerate) {
    if (report) ++report->degenerate_transforms;
    return;
  }
  if (report) {
    report->last_shift = map.shift;
    report->last_scale = map.scale;
  }

  std::vector<double> psi_before;
  if (audit && report) psi_before = all_linear_predictors(state, types);

  for (auto& b : state.ideal.beta0) b = (b - map.shift) / map.scale;
  for (auto& b : state.ideal.beta1) b = (b - map.shift) / map.scale;
  const int J = static_cast<int>(state.bills.mu.size());
  for (int j = 0; j < J; ++j) {
    state.bills.mu[j] += map.shift * state.bills.alpha[j];
    state.bills.alpha[j] *= map.scale;
  }

  if (audit && report) {
    const std::vector<double> psi_after = all_linear_predictors(state, types);
    double dev = 0.0;
    for (std::size_t c = 0; c < psi_after.size(); ++c)
      dev = std::max(dev, std::fabs(psi_after[c] - psi_before[c]));
    report->max_linpred_dev = std::max(report->max_linpred_dev, dev);
    const double anchor_dev =
        std::max(std::fabs(state.ideal.beta0[spec.anchor_low] - spec.anchor_values[0]),
                 std::fabs(state.ideal.beta0[spec.anchor_high] - spec.anchor_values[1]));
    report->max_anchor_dev = std::max(report->max_anchor_dev, anchor_dev);
  }
}

}  // namespace bridgeirt
