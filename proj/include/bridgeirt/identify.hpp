#pragma once

#include <vector>

#include "bridgeirt/data.hpp"
#include "bridgeirt/model.hpp"

namespace bridgeirt {

// Post-sweep identifiability enforcement: the latent scale is fixed by an
// affine transform pinning two anchor legislators' procedural ideal points,
// orientation by a global reflection, and the bridge count kept at >= 2 by
// block-rejecting zeta sweeps that would drop below it. Every transform is
// compensated in the bill parameters so all linear predictors are unchanged.

struct IdentifyReport {
  long long min_bridge_violations = 0;
  long long reflections_applied = 0;
  long long degenerate_transforms = 0;  // coincident anchors; transform skipped
  std::vector<double> transform_shift;  // recorded at kept draws
  std::vector<double> transform_scale;
  double max_linpred_dev = 0.0;    // sup-norm change of mu_j + alpha_j beta
  double max_anchor_dev = 0.0;     // anchor landing error after transform
  double last_shift = 0.0;         // most recent applied map
  double last_scale = 1.0;
};

// True iff the state has at least 2 bridges (d + 1 for d = 1).
bool check_min_bridges(const IdealPoints& ideal);

// Global reflection: if the high anchor sits left of the low anchor, negate
// every beta and alpha. Leaves every linear predictor unchanged.
// Returns whether a reflection was applied.
bool align_signs(ChainState& state, const AnchorSpec& spec, IdentifyReport* report = nullptr);

struct AffineMap {
  double shift = 0.0;  // a
  double scale = 1.0;  // s; beta' = (beta - a)/s
  bool degenerate = false;
};

// The unique affine map sending the two anchors' procedural points to their
// configured target values.
AffineMap anchor_map(const ChainState& state, const AnchorSpec& spec);

// Applies the map to all ideal points with compensation alpha' = s alpha,
// mu' = mu + a alpha. Degenerate (coincident anchors) skips and flags.
// When audit is true, records the worst linear-predictor deviation and
// anchor landing error into the report (an O(I J) scan).
void anchor_transform(ChainState& state, const AnchorSpec& spec, const VoteTypeVector& types,
                      IdentifyReport* report = nullptr, bool audit = false);

}  // namespace bridgeirt
