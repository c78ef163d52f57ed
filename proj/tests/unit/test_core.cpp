#include <doctest.h>

#include <bit>

#include "oracles.hpp"
#include "snnlz/core.hpp"
#include "snnlz/numfmt.hpp"
#include "snnlz/spike_io.hpp"
#include "test_util.hpp"

using namespace snnlz;

namespace {

SpikeTrain Train(const std::string& s, double dt = 1.0) {
  return SpikeTrain(TimeGrid{dt, s.size()}, oracle::FromString(s));
}

}  // namespace

TEST_CASE("time grid validation and duration") {
  CHECK(TimeGrid{0.5, 1024}.duration_ms() == 512.0);
  CHECK(TimeGrid{1.0, 8}.TimeOf(3) == 3.0);
  CHECK_ERROR_CODE(TimeGrid({0.0, 4}).Validate(), ErrorCode::kInvalidConfig);
  CHECK_ERROR_CODE(TimeGrid({1.0, 0}).Validate(), ErrorCode::kInvalidConfig);
}

TEST_CASE("spike train construction checks length and values") {
  CHECK_ERROR_CODE(SpikeTrain(TimeGrid{1, 3}, Bits{0, 1}), ErrorCode::kDimensionMismatch);
  CHECK_ERROR_CODE(SpikeTrain(TimeGrid{1, 2}, Bits{0, 2}), ErrorCode::kParse);
}

TEST_CASE("spike count") {
  CHECK(SpikeCount(SpikeTrain::Silent(TimeGrid{1, 1024})) == 0);
  CHECK(SpikeCount(Train("11111111")) == 8);
  CHECK(SpikeCount(Train("01011")) == 3);

  Rng rng(SeedSpec{5, 5});
  for (int rep = 0; rep < 50; ++rep) {
    const auto bits = testutil::RandomBits(rng, 1 + rng.Below(200));
    std::size_t pop = 0;
    for (std::size_t i = 0; i < bits.size(); i += 64) {
      std::uint64_t word = 0;
      for (std::size_t k = i; k < std::min(bits.size(), i + 64); ++k) {
        word |= std::uint64_t{bits[k]} << (k - i);
      }
      pop += static_cast<std::size_t>(std::popcount(word));
    }
    CHECK(SpikeCount(bits) == pop);
  }
}

TEST_CASE("inter-spike intervals") {
  CHECK(InterSpikeIntervals(Train("000100010")) == std::vector<double>{4.0});
  CHECK(InterSpikeIntervals(Train("111")) == std::vector<double>{1.0, 1.0});
  CHECK(InterSpikeIntervals(Train("1010", 0.5)) == std::vector<double>{1.0});
  CHECK_ERROR_CODE(InterSpikeIntervals(Train("0100")), ErrorCode::kFewerThanTwoSpikes);
  CHECK_ERROR_CODE(InterSpikeIntervals(Train("0000")), ErrorCode::kFewerThanTwoSpikes);
}

TEST_CASE("count equals interval count plus one") {
  Rng rng(SeedSpec{9, 1});
  for (int rep = 0; rep < 200; ++rep) {
    const auto bits = testutil::RandomBits(rng, 64, 0.2);
    const SpikeTrain t(TimeGrid{1, 64}, bits);
    if (SpikeCount(t) >= 2) CHECK(SpikeCount(t) == InterSpikeIntervals(t).size() + 1);
  }
}

TEST_CASE("seeded streams are deterministic and separated") {
  Rng a(SeedSpec{42, 0}), b(SeedSpec{42, 0}), c(SeedSpec{42, 1});
  int differ = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    CHECK(x == b());
    differ += x != c();
  }
  CHECK(differ >= 1);
}

TEST_CASE("golden vector of stream (0, 0)") {
  CHECK(SeedSpec{0, 0}.Key() == oracle::kGoldenKey00);
  Rng rng(SeedSpec{0, 0});
  for (auto expected : oracle::kGoldenDraws00) CHECK(rng() == expected);
}

TEST_CASE("child seeds depend only on parent key and id") {
  const SeedSpec parent{7, 3};
  CHECK(parent.Child(4) == SeedSpec{parent.Key(), 4});
  CHECK(parent.Child(4).Key() != parent.Child(5).Key());
}

TEST_CASE("bounded draws stay in range and shuffle permutes") {
  Rng rng(SeedSpec{1, 2});
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) ++hits[rng.Below(7)];
  for (int h : hits) CHECK(h > 800);
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Shuffle(v, rng);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.Uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("shortest double formatting round-trips") {
  Rng rng(SeedSpec{3, 3});
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.Uniform() - 0.5) * std::pow(10.0, rng.Uniform(-20, 20));
    CHECK(ParseDouble(FormatDouble(x)) == x);
  }
  CHECK(FormatDouble(0.1) == "0.1");
  CHECK(FormatPercent(0.865) == "86.50%");
  CHECK_ERROR_CODE(ParseDouble("1.5x"), ErrorCode::kParse);
  CHECK_ERROR_CODE(ParseInt(""), ErrorCode::kParse);
}

TEST_CASE("spike-train file format") {
  SpikeTrainFile f;
  f.grid = {1, 4};
  f.records.push_back({Train("0110"), 1});
  f.records.push_back({Train("0000"), std::nullopt});
  const auto text = SerializeSpikeTrains(f);
  CHECK(text == "SPIKETRAIN v1 dt_ms=1 n_bins=4\n0110\t1\n0000\n");
  const auto back = ParseSpikeTrains(text);
  CHECK(back.grid == f.grid);
  CHECK(back.records == f.records);
  CHECK(SerializeSpikeTrains(back) == text);

  CHECK_ERROR_CODE(ParseSpikeTrains("SPIKETRAIN v2 dt_ms=1 n_bins=4\n"), ErrorCode::kParse);
  CHECK_ERROR_CODE(ParseSpikeTrains("SPIKETRAIN v1 dt_ms=1 n_bins=4\n011\n"), ErrorCode::kParse);
  CHECK_ERROR_CODE(ParseSpikeTrains("SPIKETRAIN v1 dt_ms=1 n_bins=2\n02\n"), ErrorCode::kParse);
}

TEST_CASE("spike-train files round-trip on random instances") {
  Rng rng(SeedSpec{11, 0});
  for (int rep = 0; rep < 50; ++rep) {
    SpikeTrainFile f;
    f.grid = {rng.Uniform(0.1, 5.0), 1 + rng.Below(300)};
    const auto count = rng.Below(6);
    for (std::uint64_t r = 0; r < count; ++r) {
      std::optional<int> label;
      if (rng.Bernoulli(0.5)) label = static_cast<int>(rng.Below(5));
      f.records.push_back({SpikeTrain(f.grid, testutil::RandomBits(rng, f.grid.n_bins)), label});
    }
    const auto text = SerializeSpikeTrains(f);
    CHECK(SerializeSpikeTrains(ParseSpikeTrains(text)) == text);
  }
}
