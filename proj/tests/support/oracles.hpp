#pragma once

// Independent reference implementations used only by tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace oracle {

using Bits = std::vector<std::uint8_t>;

inline Bits FromString(const std::string& s) {
  Bits b;
  for (char c : s) b.push_back(c == '1' ? 1 : 0);
  return b;
}

// True if x[i, i+len) also starts at some p < i (overlap allowed).
inline bool Reproducible(const Bits& x, std::size_t i, std::size_t len) {
  for (std::size_t p = 0; p < i; ++p) {
    bool same = true;
    for (std::size_t k = 0; k < len && same; ++k) same = x[p + k] == x[i + k];
    if (same) return true;
  }
  return false;
}

// Lempel-Ziv 1976 parse by exhaustive substring search. Returns component
// lengths.
inline std::vector<std::size_t> NaiveLz76(const Bits& x) {
  std::vector<std::size_t> parts;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t len = 1;
    while (i + len <= x.size() && Reproducible(x, i, len)) ++len;
    len = std::min(len, x.size() - i);
    parts.push_back(len);
    i += len;
  }
  return parts;
}

inline std::size_t NaiveLzCount(const Bits& x) { return NaiveLz76(x).size(); }

inline double BinaryEntropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
inline double KsStatistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

// Asymptotic Kolmogorov p-value with Stephens' small-sample correction.
inline double KsPValue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Maps a lattice interval k >= 1 (in bins) of a Bernoulli process with
// per-bin rate a = -ln(1 - p) to k - 1 + V, V drawn from Exp(a) truncated to
// [0, 1) by inverse CDF from u in [0, 1). When k is geometric the result is
// exactly Exponential(a).
inline double DitherInterval(double k, double a, double u) {
  return k - 1.0 - std::log1p(-u * -std::expm1(-a)) / a;
}

// Central difference (f(x + h) - f(x - h)) / 2h, restoring x.
inline double CentralDifference(double& x, double h, const std::function<double()>& f) {
  const double x0 = x;
  x = x0 + h;
  const double up = f();
  x = x0 - h;
  const double down = f();
  x = x0;
  return (up - down) / (2 * h);
}

// SplitMix64 draws of SeedSpec{0, 0}, computed with an independent Python
// implementation of the documented mixer.
inline constexpr std::uint64_t kGoldenKey00 = 0x48218226ff3cd4bfULL;
inline constexpr std::uint64_t kGoldenDraws00[5] = {
    0x568a9b0b1a2c05ecULL, 0x44e5b8b147ef718bULL, 0x458563ab55521133ULL,
    0x7aec644539b6c0f9ULL, 0x98da2142fd100586ULL};

}  // namespace oracle
