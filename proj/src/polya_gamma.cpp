// Exact Polya-Gamma PG(1, c) sampler via the alternating-series rejection
// method of Polson, Scott & Windle (2013); follows Algorithm 6 of Windle's
// 2013 thesis.  A PG(1, c) variate is J*(1, c/2)/4 where J* has density
// proportional to cosh(c/2) exp(-x c^2 / 8) f_J(x) and f_J is the Jacobi
// theta density; the series a_n(x) below alternates around that density,
// which yields an exact accept/reject decision after finitely many terms.

#include "bridgeirt/polya_gamma.hpp"

#include <cmath>

namespace bridgeirt {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kHalfPi = 1.57079632679489661923132169163975144;
constexpr double kTwoOverPi = 0.63661977236758134307553505349005745;
constexpr double kPiSq = 9.86960440108935861883449099987615114;
constexpr double kLogPi = 1.14472988584940017414342735135305871;
constexpr double kLogTwoOverPi = -0.45158270528945486472619522989488214;
constexpr double kSqrtHalfPi = 1.25331413731550025120788264240552263;

// log Phi(x); erfc underflow gives -inf, which the caller absorbs via exp().
double log_norm_cdf(double x) {
  return std::log(0.5 * std::erfc(-x * 0.70710678118654752440));
}

// Piecewise coefficients a_n(x) of the alternating series for the J*(1, .)
// density, with the crossover at t = 2/pi.
double aterm(int n, double x, double t) {
  const double h = n + 0.5;
  double logf;
  if (x <= t)
    logf = kLogPi + std::log(h) + 1.5 * (kLogTwoOverPi - std::log(x)) - 2.0 * h * h / x;
  else
    logf = kLogPi + std::log(h) - 0.5 * kPiSq * x * h * h;
  return std::exp(logf);
}

// Probability of proposing from the truncated-exponential piece rather than
// the truncated-inverse-Gaussian piece, for tilt z = |c|/2.
double exp_piece_prob(double z) {
  const double t = kTwoOverPi;
  const double big_k = 0.5 * z * z + 0.125 * kPiSq;
  const double log_a = std::log(4.0) - kLogPi - z;
  const double log_k = std::log(big_k);
  const double kt = big_k * t;
  const double w = std::sqrt(kHalfPi);

  const double logf1 = log_a + log_norm_cdf(w * (t * z - 1.0)) + log_k + kt;
  const double logf2 = log_a + 2.0 * z + log_norm_cdf(-w * (t * z + 1.0)) + log_k + kt;
  const double p_over_q = std::exp(logf1) + std::exp(logf2);
  return 1.0 / (1.0 + p_over_q);
}

// Inverse-Gaussian(mu, lambda=1) variate (Michael, Schucany & Haas).
double rand_invgauss(double mu, Rng& rng) {
  const double u = rng.rnorm();
  const double v = u * u;
  double out = mu + 0.5 * mu * (mu * v - std::sqrt(4.0 * mu * v + mu * mu * v * v));
  if (rng.runif() > mu / (mu + out)) out = mu * mu / out;
  return out;
}

// Gamma(1/2, rate 1/2)-type tail draw on (pi/2, inf), used through its
// reciprocal to get an inverse-Gaussian restricted to (0, 2/pi) when the
// mean sits far right of the truncation point (Chung 1998).
double trunc_gamma_tail(Rng& rng) {
  for (;;) {
    const double x = 2.0 * rng.rexp() + kHalfPi;
    const double g = kSqrtHalfPi / std::sqrt(x);
    if (rng.runif() <= g) return x;
  }
}

// Inverse-Gaussian(1/z, 1) truncated to (0, t).
double trunc_invgauss(double z, double t, Rng& rng) {
  if (z < 1.0 / t) {
    for (;;) {
      const double x = 1.0 / trunc_gamma_tail(rng);
      if (std::log(rng.runif()) < -0.5 * z * z * x) return x;
    }
  }
  const double mu = 1.0 / z;
  for (;;) {
    const double x = rand_invgauss(mu, rng);
    if (x < t) return x;
  }
}

}  // namespace

double draw_pg1(double c, Rng& rng) {
  const double z = 0.5 * std::fabs(c);
  const double t = kTwoOverPi;
  const double r = exp_piece_prob(z);
  const double big_k = 0.5 * z * z + 0.125 * kPiSq;

  for (;;) {
    double x;
    if (rng.runif() < r)
      x = t + rng.rexp() / big_k;
    else
      x = trunc_invgauss(z, t, rng);

    // Partial sums S_n of the alternating series bracket the target density;
    // stop at the first odd n with U <= S_n (accept) or even n with U > S_n
    // (reject and repropose).
    double s = aterm(0, x, t);
    const double u = rng.runif() * s;
    int n = 0;
    for (;;) {
      ++n;
      if (n & 1) {
        s -= aterm(n, x, t);
        if (u <= s) return 0.25 * x;
      } else {
        s += aterm(n, x, t);
        if (u > s) break;
      }
    }
  }
}

}  // namespace bridgeirt
