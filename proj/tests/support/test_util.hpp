#pragma once

#include <functional>
#include <optional>

#include "snnlz/core.hpp"
#include "snnlz/error.hpp"

namespace testutil {

// Code of the snnlz::Error thrown by `fn`, or nullopt if none was thrown.
inline std::optional<snnlz::ErrorCode> ThrownCode(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const snnlz::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline snnlz::Bits RandomBits(snnlz::Rng& rng, std::size_t n, double p = 0.5) {
  snnlz::Bits b(n);
  for (auto& x : b) x = rng.Bernoulli(p) ? 1 : 0;
  return b;
}

}  // namespace testutil

#define CHECK_ERROR_CODE(expr, code) \
  CHECK(testutil::ThrownCode([&] { (void)(expr); }) == std::optional(code))
