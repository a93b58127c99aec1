#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>

namespace bridgeirt {

// Counter-based random stream (Philox-4x32-10).  Streams are splittable:
// split(k) yields an independent stream fully determined by (root, k), so
// per-chain and per-worker streams reproduce regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    root_ = mix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
    key0_ = static_cast<std::uint32_t>(mix64(root_));
    key1_ = static_cast<std::uint32_t>(mix64(root_) >> 32);
    ctr0_ = ctr1_ = 0;
    buf_pos_ = 4;
  }

  // Independent child stream; deterministic in (this stream's root, k).
  Rng split(std::uint64_t k) const { return Rng(root_, k); }

  std::uint32_t next_u32() {
    if (buf_pos_ == 4) refill();
    return buf_[buf_pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double runif() {
    const std::uint64_t r = next_u64() >> 12;  // 52 bits
    return (static_cast<double>(r) + 0.5) * (1.0 / 4503599627370496.0);
  }

  double runif(double lo, double hi) { return lo + (hi - lo) * runif(); }

  bool rbernoulli(double p) { return runif() < p; }

  double rexp() { return -std::log(runif()); }

  // Standard normal via the polar method.
  double rnorm() {
    double u, v, s;
    do {
      u = 2.0 * runif() - 1.0;
      v = 2.0 * runif() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s <= 0.0);
    return u * std::sqrt(-2.0 * std::log(s) / s);
  }

  double rnorm(double mean, double sd) { return mean + sd * rnorm(); }

  // Gamma with given shape and scale (mean = shape * scale), Marsaglia-Tsang.
  double rgamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::invalid_argument("rgamma: shape and scale must be positive");
    if (shape < 1.0) {
      const double u = runif();
      return rgamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = rnorm();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = runif();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

  // Inverse gamma with density b^a/Gamma(a) x^{-a-1} exp(-b/x).
  double rinvgamma(double shape, double rate) { return 1.0 / rgamma(shape, 1.0 / rate); }

  double rbeta(double a, double b) {
    const double x = rgamma(a, 1.0);
    const double y = rgamma(b, 1.0);
    return x / (x + y);
  }

  // Standard logistic.
  double rlogistic() {
    const double u = runif();
    return std::log(u / (1.0 - u));
  }

  double rstudent_t(double df) {
    const double z = rnorm();
    const double chi2 = rgamma(0.5 * df, 2.0);
    return z / std::sqrt(chi2 / df);
  }

  // N(mean, sd^2) truncated to {x : sign(x) == sign > 0 ? x > 0 : x < 0}.
  // Plain rejection near the mode, Robert's exponential method in the tail.
  double rtruncnorm_sign(double mean, double sd, bool positive) {
    // standardized truncation bound for X > 0 (mirror for X < 0)
    const double a = positive ? -mean / sd : mean / sd;
    double x;
    if (a < 0.45) {
      do {
        x = rnorm();
      } while (x <= a);
    } else {
      const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
      for (;;) {
        x = a + rexp() / alpha;
        const double d = x - alpha;
        if (std::log(runif()) <= -0.5 * d * d) break;
      }
    }
    return positive ? mean + sd * x : mean - sd * x;
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void refill() {
    std::uint32_t c0 = static_cast<std::uint32_t>(ctr0_);
    std::uint32_t c1 = static_cast<std::uint32_t>(ctr0_ >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(ctr1_);
    std::uint32_t c3 = static_cast<std::uint32_t>(ctr1_ >> 32);
    std::uint32_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, c0, hi0, lo0);
      mulhilo(0xCD9E8D57u, c2, hi1, lo1);
      const std::uint32_t n0 = hi1 ^ c1 ^ k0;
      const std::uint32_t n1 = lo1;
      const std::uint32_t n2 = hi0 ^ c3 ^ k1;
      const std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = c0; buf_[1] = c1; buf_[2] = c2; buf_[3] = c3;
    buf_pos_ = 0;
    if (++ctr0_ == 0) ++ctr1_;
  }

  std::uint64_t root_;
  std::uint32_t key0_, key1_;
  std::uint64_t ctr0_, ctr1_;
  std::uint32_t buf_[4];
  int buf_pos_;
};

}  // namespace bridgeirt
