#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "doctest.h"
#include "pomcpe/exact.hpp"
#include "pomcpe/hallway.hpp"
#include "pomcpe/particle_filter.hpp"
#include "pomcpe/tiger.hpp"

using namespace pomcpe;

TEST_CASE("entropy base cases") {
  ParticleFilter f;
  CHECK(f.entropy() == 0.0);
  f.add(3);
  CHECK(f.size() == 1);
  CHECK(std::abs(f.entropy()) <= 1e-12);

  ParticleFilter dup = f;
  dup.add(3);
  CHECK(std::abs(dup.entropy()) <= 1e-12);

  ParticleFilter two = f;
  two.add(4);
  CHECK(std::abs(two.entropy() - std::log(2.0)) <= 1e-12);
}

TEST_CASE("incremental formula against direct evaluation") {
  // {a:2, b:1} -> add b -> {a:2, b:2}: ln 2
  const double h3 = -(2.0 / 3 * std::log(2.0 / 3) + 1.0 / 3 * std::log(1.0 / 3));
  CHECK(incremental_entropy(h3, 3, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  // {a:2, b:2} -> add c -> {2,2,1}
  const double h5 = -(2 * 0.4 * std::log(0.4) + 0.2 * std::log(0.2));
  CHECK(incremental_entropy(std::log(2.0), 4, 0) == doctest::Approx(h5).epsilon(1e-12));
}

TEST_CASE("full entropy") {
  ParticleFilter f;
  CHECK_THROWS_AS(f.full_entropy(), EmptyFilter);
  for (StateId s : {0, 1, 2, 3}) f.add(s);
  CHECK(f.full_entropy() == doctest::Approx(std::log(4.0)));
  ParticleFilter g;
  for (int i = 0; i < 5; ++i) g.add(9);
  CHECK(g.full_entropy() == 0.0);
  ParticleFilter h;
  for (int i = 0; i < 4; ++i) h.add(0);
  h.add(1);
  CHECK(std::abs(h.full_entropy() - 0.500402) <= 1e-6);
}

TEST_CASE("incremental entropy tracks full recomputation over 1e5 insertions") {
  std::mt19937_64 rng(2024);
  for (int skew = 0; skew < 2; ++skew) {
    ParticleFilter f;
    std::uniform_int_distribution<StateId> uniform(0, 99);
    std::geometric_distribution<StateId> geometric(0.1);
    double worst = 0.0;
    for (int i = 0; i < 100'000; ++i) {
      f.add(skew == 0 ? uniform(rng) : std::min<StateId>(geometric(rng), 99));
      worst = std::max(worst, std::abs(f.entropy() - f.full_entropy()));
      if (worst > 1e-6) break;
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("entropy bounds") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<StateId> pick(0, 9);
  ParticleFilter f;
  for (int i = 0; i < 2000; ++i) {
    f.add(pick(rng));
    CHECK(f.entropy() >= -1e-12);
    CHECK(f.entropy() <= std::log(static_cast<double>(f.distinct())) + 1e-9);
  }
  std::uint64_t total = 0;
  for (const auto& [s, c] : f.counts()) total += c;
  CHECK(total == f.size());
}

TEST_CASE("cache refresh interval") {
  ParticleFilter f;
  f.add(0);
  f.corrupt_entropy_for_testing(5.0);
  CHECK(f.entropy() == 5.0);
  for (std::uint64_t i = 1; i < ParticleFilter::kRefreshInterval; ++i) f.add(static_cast<StateId>(i % 2));
  CHECK(std::abs(f.entropy() - f.full_entropy()) < 1e-9);
}

TEST_CASE("sampling") {
  Rng rng(5);
  ParticleFilter empty;
  CHECK_THROWS_AS(empty.sample(rng), EmptyFilter);

  ParticleFilter one;
  one.add(7);
  for (int i = 0; i < 100; ++i) CHECK(one.sample(rng) == 7);

  ParticleFilter half;
  half.add(0);
  half.add(1);
  int zeros = 0;
  for (int i = 0; i < 10'000; ++i) zeros += half.sample(rng) == 0;
  CHECK(std::abs(zeros / 1e4 - 0.5) <= 0.02);

  ParticleFilter three;
  for (StateId s : {0, 0, 0, 1}) three.add(s);
  zeros = 0;
  for (int i = 0; i < 10'000; ++i) zeros += three.sample(rng) == 0;
  CHECK(std::abs(zeros / 1e4 - 0.75) <= 0.02);
}

TEST_CASE("add is constant time in filter size") {
  auto median_ns = [](std::uint64_t n) {
    ParticleFilter f;
    for (std::uint64_t i = 0; i < n; ++i) f.add(static_cast<StateId>(i % 1000));
    std::vector<double> samples;
    for (int rep = 0; rep < 21; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < 2000; ++i) f.add(static_cast<StateId>(i % 1000));
      const auto t1 = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() / 2000);
    }
    std::nth_element(samples.begin(), samples.begin() + 10, samples.end());
    return samples[10];
  };
  const double small = median_ns(100);
  const double large = median_ns(1'000'000);
  MESSAGE("median ns per add: n=1e2 " << small << ", n=1e6 " << large);
  CHECK(large <= 2.0 * small + 5.0);
}

TEST_CASE("reinvigoration") {
  const auto m = tiger::tiger_model();
  Rng rng(99);

  SUBCASE("empty parent falls back to the initial distribution") {
    ParticleFilter f;
    reinvigorate(f, ParticleFilter{}, m, tiger::kListen, tiger::kHearLeft, 100, rng);
    CHECK(f.size() == 100);
    CHECK(f.count(tiger::kTigerLeft) > 0);
    CHECK(f.count(tiger::kTigerRight) > 0);
    CHECK(f.entropy() == doctest::Approx(f.full_entropy()).epsilon(1e-12));
  }
  SUBCASE("target equal to size is a no-op") {
    ParticleFilter f;
    f.add(0);
    f.add(1);
    const auto before = f.particles();
    reinvigorate(f, ParticleFilter{}, m, tiger::kListen, tiger::kHearLeft, 2, rng);
    CHECK(f.particles() == before);
  }
  SUBCASE("propagated particles approximate the exact posterior") {
    ParticleFilter parent = filter_from_probabilities({0.5, 0.5}, 10'000);
    ParticleFilter f;
    reinvigorate(f, parent, m, tiger::kListen, tiger::kHearLeft, 10'000, rng);
    const auto exact = exact_belief_update(DenseBelief{{0.5, 0.5}}, tiger::kListen, tiger::kHearLeft, m);
    const double tv = std::abs(f.count(0) / 1e4 - exact[0]);
    CHECK(tv <= 0.05);
  }
  SUBCASE("uniform fallback after rejection fails") {
    const auto sure = tiger::tiger_model({.listen_accuracy = 1.0});
    ParticleFilter parent;
    parent.add(tiger::kTigerLeft);
    ParticleFilter f;
    // Rejection fails, the uniform fallback still finds tiger-right.
    reinvigorate(f, parent, sure, tiger::kListen, tiger::kHearRight, 10, rng, 2);
    CHECK(f.count(tiger::kTigerRight) == 10);
  }
  SUBCASE("observation no state can emit") {
    const auto hw = hallway::make_long_hallway(1, 1);
    const ObsId boxed = hallway::encode_observation({true, true, true, true, hallway::Signal::left});
    ParticleFilter f;
    CHECK_THROWS_AS(reinvigorate(f, ParticleFilter{}, hw.model, hallway::kWait, boxed, 10, rng),
                    InconsistentObservation);
  }
  SUBCASE("deterministic hallway keeps only consistent states") {
    const auto hw = hallway::make_long_hallway(1, 1);
    const auto& layout = hw.layout;
    ParticleFilter parent;
    for (int h = 0; h < 2; ++h) parent.add(layout.state({layout.find(h, "e"), hallway::kWest}));
    const ObsId z = layout.observe({layout.find(0, "f"), hallway::kWest});
    ParticleFilter f;
    reinvigorate(f, parent, hw.model, hallway::kBackward, z, 50, rng);
    CHECK(f.size() == 50);
    CHECK(f.distinct() == 1);
    CHECK(f.count(layout.state({layout.find(0, "f"), hallway::kWest})) == 50);
  }
}

TEST_CASE("filter from probabilities") {
  const auto f = filter_from_probabilities({0.5, 0.25, 0.25, 0.0}, 7);
  CHECK(f.size() == 7);
  CHECK(f.count(0) == 4);
  CHECK(f.count(1) + f.count(2) == 3);
  CHECK(f.count(3) == 0);
}
