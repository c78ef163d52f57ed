#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "snnlz/lzc.hpp"
#include "test_util.hpp"

using namespace snnlz;

namespace {

oracle::Bits FromInt(std::uint32_t v, std::size_t n) {
  oracle::Bits b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (v >> i) & 1u;
  return b;
}

}  // namespace

TEST_CASE("hand-checked parses") {
  CHECK(Lz76Parse(oracle::FromString("1")).component_count == 1);

  const auto r = Lz76Parse(oracle::FromString("0001101001000101"));
  CHECK(r.component_count == 6);
  std::vector<std::size_t> lengths;
  for (const auto& c : r.components) lengths.push_back(c.length);
  CHECK(lengths == std::vector<std::size_t>{1, 3, 2, 3, 4, 3});
  CHECK(lengths == oracle::NaiveLz76(oracle::FromString("0001101001000101")));

  const auto z = Lz76Parse(oracle::FromString("0000"));
  CHECK(z.component_count == 2);
  CHECK(z.normalized == 1.0);
  CHECK(LzcNormalized(oracle::FromString("01")) == 1.0);
}

TEST_CASE("constant sequences parse into two components") {
  for (std::size_t n : {2, 3, 17, 1024}) {
    CHECK(Lz76Parse(oracle::Bits(n, 0)).component_count == 2);
    CHECK(Lz76Parse(oracle::Bits(n, 1)).component_count == 2);
  }
  CHECK(LzcNormalized(oracle::Bits(1024, 0)) == doctest::Approx(2.0 / 1024 * 10));
}

TEST_CASE("errors") {
  CHECK_ERROR_CODE(Lz76Parse(oracle::Bits{}), ErrorCode::kEmptySequence);
  CHECK_ERROR_CODE(LzcNormalized(oracle::Bits{}), ErrorCode::kEmptySequence);
  CHECK_ERROR_CODE(LzcNormalized(oracle::Bits{1}), ErrorCode::kSequenceTooShort);
}

TEST_CASE("agrees with the brute-force parser on all short sequences") {
  std::size_t mismatches = 0;
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      const auto x = FromInt(v, n);
      const auto r = Lz76Parse(x);
      std::vector<std::size_t> lengths;
      for (const auto& c : r.components) lengths.push_back(c.length);
      mismatches += lengths != oracle::NaiveLz76(x);
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("components tile the sequence and counts are bounded") {
  Rng rng(SeedSpec{1, 0});
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = testutil::RandomBits(rng, 1 + rng.Below(300), rng.Uniform());
    const auto r = Lz76Parse(x);
    std::size_t pos = 0;
    for (const auto& c : r.components) {
      CHECK(c.start == pos);
      CHECK(c.length >= 1);
      pos += c.length;
    }
    CHECK(pos == x.size());
    CHECK(r.component_count == r.components.size());
    CHECK(r.component_count >= 1);
    CHECK(r.component_count <= x.size());
    if (x.size() >= 2) CHECK(r.component_count >= 2);
    CHECK(Lz76Parse(x, false).component_count == r.component_count);
    CHECK(Lz76Parse(x).component_count == r.component_count);
  }
}

TEST_CASE("complement symmetry on all sequences up to length 12") {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::uint32_t v = 0; v < (1u << n); ++v) {
      const auto x = FromInt(v, n);
      const auto y = FromInt(~v, n);
      CHECK(Lz76Parse(x, false).component_count == Lz76Parse(y, false).component_count);
    }
  }
}

TEST_CASE("concatenation is subadditive for short sequences") {
  std::size_t violations = 0;
  for (std::size_t nu = 1; nu <= 6; ++nu) {
    for (std::size_t nv = 1; nv <= 6; ++nv) {
      for (std::uint32_t u = 0; u < (1u << nu); ++u) {
        for (std::uint32_t v = 0; v < (1u << nv); ++v) {
          auto a = FromInt(u, nu);
          const auto b = FromInt(v, nv);
          const auto cu = Lz76Parse(a, false).component_count;
          const auto cv = Lz76Parse(b, false).component_count;
          a.insert(a.end(), b.begin(), b.end());
          violations += Lz76Parse(a, false).component_count > cu + cv;
        }
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("entropy-rate estimate of a biased coin") {
  Rng rng(SeedSpec{2, 0});
  double sum = 0;
  for (int rep = 0; rep < 10; ++rep) sum += EntropyRateEstimate(testutil::RandomBits(rng, 100000, 0.25));
  CHECK(std::fabs(sum / 10 - oracle::BinaryEntropy(0.25)) < 0.10);
  CHECK(EntropyRateEstimate(oracle::Bits(100000, 1)) < 0.001);
}
