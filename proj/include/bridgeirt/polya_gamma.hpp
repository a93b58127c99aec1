#pragma once

#include "bridgeirt/rng.hpp"

namespace bridgeirt {

// Exact draw from the Polya-Gamma PG(1, c) distribution.
// Finite for any finite c; symmetric in the sign of c; E[X] = tanh(c/2)/(2c).
double draw_pg1(double c, Rng& rng);

}  // namespace bridgeirt
