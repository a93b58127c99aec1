#pragma once

// In-memory model fixtures for tests: a coherent (votes, types, design,
// state) bundle with every field filled so individual conditionals can be
// probed without running a chain.

#include <cstdint>
#include <vector>

#include "bridgeirt/data.hpp"
#include "bridgeirt/model.hpp"
#include "bridgeirt/rng.hpp"

namespace testsupport {

struct Fixture {
  bridgeirt::VoteMatrix votes;
  bridgeirt::VoteTypeVector types;
  bridgeirt::DesignMatrix X;
  bridgeirt::ChainState state;
};

// Builds a fully observed random instance with alternating bill domains.
// nu_fill == 0 produces the masked (no-data) configuration used by
// prior-reduction tests.
inline Fixture make_fixture(int I, int J, int p, std::uint64_t seed, double nu_fill = 0.25) {
  using namespace bridgeirt;
  Rng rng(seed, 0);
  Fixture f;

  f.votes.I = I;
  f.votes.J = J;
  f.votes.votes.resize(static_cast<std::size_t>(I) * J);
  for (auto& v : f.votes.votes) v = static_cast<std::int8_t>(rng.rbernoulli(0.5));
  for (int i = 0; i < I; ++i) f.votes.legislator_ids.push_back("L" + std::to_string(i));
  for (int j = 0; j < J; ++j) f.votes.bill_ids.push_back("B" + std::to_string(j));

  f.types.gamma.resize(J);
  for (int j = 0; j < J; ++j) f.types.gamma[j] = static_cast<std::uint8_t>(j % 2);

  f.X.X.resize(I, p);
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < p; ++k) f.X.X(i, k) = rng.rnorm();
  for (int k = 0; k < p; ++k) f.X.column_names.push_back("x" + std::to_string(k));
  if (p > 0) center_columns(f.X);

  ChainState& s = f.state;
  s.bills.mu.resize(J);
  s.bills.alpha.resize(J);
  s.bills.alpha_active.assign(J, 1);
  for (int j = 0; j < J; ++j) {
    s.bills.mu[j] = rng.rnorm();
    s.bills.alpha[j] = rng.rnorm();
  }
  s.ideal.beta0.resize(I);
  s.ideal.beta1.resize(I);
  s.ideal.zeta.resize(I);
  for (int i = 0; i < I; ++i) {
    s.ideal.zeta[i] = rng.rbernoulli(0.5);
    s.ideal.beta0[i] = rng.rnorm();
    s.ideal.beta1[i] = s.ideal.zeta[i] ? s.ideal.beta0[i] : rng.rnorm();
  }
  s.hyper = PolicyHyper{};
  s.aug.y_imputed.resize(static_cast<std::size_t>(I) * J);
  for (std::size_t c = 0; c < s.aug.y_imputed.size(); ++c)
    s.aug.y_imputed[c] = static_cast<std::uint8_t>(f.votes.votes[c]);
  s.aug.nu.assign(static_cast<std::size_t>(I) * J, nu_fill);
  s.bridge.eta0 = 0.0;
  s.bridge.eta.assign(p, 0.0);
  s.bridge.xi.assign(p, 0);
  s.bridge.nu_bridge.assign(I, nu_fill);
  s.bridge.g = static_cast<double>(I);
  return f;
}

}  // namespace testsupport
