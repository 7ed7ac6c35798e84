#include <cmath>
#include <random>

#include "doctest.h"
#include "pomcpe/exact.hpp"
#include "pomcpe/tiger.hpp"

using namespace pomcpe;
using namespace pomcpe::tiger;

namespace {

DenseBelief belief(double left) { return DenseBelief{{left, 1.0 - left}}; }

// Hand-rolled Tiger value recursion, independent of the oracle's weight
// bookkeeping: doors end the episode, listen recurses on both hearings.
double tiger_v(double pl, int h, const TigerParams& p);
double tiger_q(double pl, int a, int h, const TigerParams& p) {
  if (a == kOpenLeft) return pl * p.tiger_penalty + (1 - pl) * p.gold_reward;
  if (a == kOpenRight) return pl * p.gold_reward + (1 - pl) * p.tiger_penalty;
  double q = p.listen_reward;
  if (h <= 1) return q;
  const double acc = p.listen_accuracy;
  const double z_left = pl * acc + (1 - pl) * (1 - acc);
  const double post_left = pl * acc / z_left;
  const double post_right = pl * (1 - acc) / (1 - z_left);
  q += p.discount * (z_left * tiger_v(post_left, h - 1, p) +
                     (1 - z_left) * tiger_v(post_right, h - 1, p));
  return q;
}
double tiger_v(double pl, int h, const TigerParams& p) {
  double best = -1e300;
  for (int a = 0; a < 3; ++a) best = std::max(best, tiger_q(pl, a, h, p));
  return best;
}

}  // namespace

TEST_CASE("belief update on Tiger") {
  const auto m = tiger_model();
  SUBCASE("uniform, hear-left gives 0.8") {
    const auto b = exact_belief_update(belief(0.5), kListen, kHearLeft, m);
    CHECK(b[0] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(b[1] == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("0.8, hear-right returns to uniform") {
    const auto b = exact_belief_update(belief(0.8), kListen, kHearRight, m);
    CHECK(std::abs(b[0] - 0.5) < 1e-12);
    CHECK(std::abs(b[1] - 0.5) < 1e-12);
  }
  SUBCASE("0.8, hear-left gives 0.64 / 0.68") {
    const auto b = exact_belief_update(belief(0.8), kListen, kHearLeft, m);
    CHECK(b[0] == doctest::Approx(0.64 / 0.68).epsilon(1e-12));
    CHECK(b[0] == doctest::Approx(0.9412).epsilon(1e-4));
  }
  SUBCASE("impossible observation throws") {
    const auto sure = tiger_model({.listen_accuracy = 1.0});
    CHECK_THROWS_AS(exact_belief_update(belief(1.0), kListen, kHearRight, sure),
                    ImpossibleObservation);
  }
}

TEST_CASE("belief update conserves mass and obeys total probability") {
  const auto m = tiger_model({.listen_accuracy = 0.7});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const DenseBelief b = belief(u(rng));
    for (ActionId a = 0; a < m.num_actions(); ++a) {
      const DenseBelief predicted = predict(b, a, m);
      std::vector<double> mixture(m.num_states(), 0.0);
      for (ObsId z = 0; z < m.num_observations(); ++z) {
        const double pz = observation_probability(b, a, z, m);
        if (pz <= 0.0) continue;
        const DenseBelief post = exact_belief_update(b, a, z, m);
        double sum = 0.0;
        for (double x : post.probs) {
          CHECK(x >= 0.0);
          sum += x;
        }
        CHECK(std::abs(sum - 1.0) < 1e-9);
        for (int s = 0; s < m.num_states(); ++s) mixture[s] += pz * post[s];
      }
      for (int s = 0; s < m.num_states(); ++s) CHECK(std::abs(mixture[s] - predicted[s]) < 1e-9);
    }
  }
}

TEST_CASE("expected reward on Tiger") {
  const auto m = tiger_model();
  CHECK(expected_reward(belief(0.5), kOpenLeft, m) == -45.0);
  CHECK(expected_reward(belief(0.5), kOpenRight, m) == -45.0);
  CHECK(expected_reward(belief(0.8), kOpenLeft, m) == doctest::Approx(-78.0).epsilon(1e-12));
  CHECK(expected_reward(belief(0.8), kOpenRight, m) == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(expected_reward(belief(0.96), kOpenLeft, m) == doctest::Approx(-95.6).epsilon(1e-12));
  CHECK(expected_reward(belief(0.96), kOpenRight, m) == doctest::Approx(5.6).epsilon(1e-12));
  CHECK(expected_reward(belief(0.3), kListen, m) == -1.0);
}

TEST_CASE("discounted return") {
  CHECK(discounted_return({}, 0.95) == 0.0);
  std::vector<double> k1(12, -1.0);
  k1.push_back(100.0);
  CHECK(discounted_return(k1, 0.95) == doctest::Approx(44.84).epsilon(0.01 / 44.84));
  std::vector<double> k2(14, -1.0);
  k2.push_back(100.0);
  CHECK(discounted_return(k2, 0.95) == doctest::Approx(38.52).epsilon(0.01 / 38.52));
  const std::vector<double> three{1.0, 2.0, 3.0};
  CHECK(discounted_return(three, 0.5) == doctest::Approx(1.0 + 1.0 + 0.75));
}

TEST_CASE("exact entropy") {
  CHECK(exact_entropy(belief(0.5)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(exact_entropy(belief(1.0)) == 0.0);
  CHECK(exact_entropy(belief(0.0)) == 0.0);
  CHECK(exact_entropy(belief(0.8)) == doctest::Approx(0.5004).epsilon(1e-4));
  CHECK(exact_entropy(DenseBelief::uniform(7)) == doctest::Approx(std::log(7.0)));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> p(7);
    double sum = 0.0;
    for (double& x : p) sum += (x = u(rng));
    for (double& x : p) x /= sum;
    CHECK(exact_entropy(DenseBelief{p}) <= std::log(7.0) + 1e-12);
  }
}

TEST_CASE("expectimax oracle on Tiger") {
  const auto m = tiger_model();
  const TigerParams p;
  ExpectimaxOracle oracle(m);

  SUBCASE("horizon 0 and 1 are the immediate reward") {
    CHECK(oracle.q_value(belief(0.5), kOpenLeft, 1) == -45.0);
    for (ActionId a = 0; a < 3; ++a) {
      CHECK(oracle.q_value(belief(0.5), a, 0) == expected_reward(belief(0.5), a, m));
    }
  }
  SUBCASE("agrees with the hand recursion") {
    for (double pl : {0.5, 0.8, 0.96, 0.1, 1.0}) {
      for (int h = 1; h <= 5; ++h) {
        for (ActionId a = 0; a < 3; ++a) {
          CHECK(oracle.q_value(belief(pl), a, h) == doctest::Approx(tiger_q(pl, a, h, p)).epsilon(1e-12));
        }
      }
    }
  }
  SUBCASE("horizon 3 listen at uniform") {
    // By hand:
    // Q2(0.8, listen) = -1 + 0.95 (0.68 * 3.5294 + 0.32 * -1) = -1 + 0.95 * 2.08 = 0.976
    // Q3(0.5, listen) = -1 + 0.95 * 0.976 = -0.0728
    const double q3 = oracle.q_value(belief(0.5), kListen, 3);
    CHECK(q3 == doctest::Approx(-0.0728).epsilon(1e-9));
    CHECK(q3 > oracle.q_value(belief(0.5), kOpenLeft, 3));
    CHECK(q3 > oracle.q_value(belief(0.5), kOpenRight, 3));
  }
  SUBCASE("greedy actions") {
    CHECK(oracle.greedy_action(belief(0.5), 3) == kListen);
    CHECK(oracle.greedy_action(belief(1.0), 1) == kOpenRight);
    CHECK(oracle.greedy_action(belief(0.0), 1) == kOpenLeft);
    CHECK(oracle.greedy_action(belief(0.5), 1) == kListen);
  }
  SUBCASE("value of information") {
    CHECK(oracle.value_of_information(belief(0.5), kListen, 3) > 0.0);
    CHECK(oracle.value_of_information(belief(1.0), kListen, 1) < 0.0);
    CHECK(oracle.value_of_information(belief(1.0), kListen, 1) == doctest::Approx(-11.0));
  }
  SUBCASE("voi is zero when every Q ties") {
    PomdpModel flat(1, 2, 1, 0.9);
    flat.set_transition(0, 0, {{0, 1.0}});
    flat.set_transition(0, 1, {{0, 1.0}});
    flat.set_observation(0, 0, {{0, 1.0}});
    flat.set_observation(0, 1, {{0, 1.0}});
    flat.set_initial({{0, 1.0}});
    flat.finalize();
    ExpectimaxOracle o(flat);
    CHECK(o.value_of_information(DenseBelief{{1.0}}, 0, 3) == 0.0);
  }
  SUBCASE("node cap") {
    ExpectimaxOracle tiny(m, 10);
    CHECK_THROWS_AS(tiny.q_value(belief(0.5), kListen, 8), BudgetExceeded);
  }
}

TEST_CASE("expectimax horizon increments are bounded") {
  const auto m = tiger_model();
  ExpectimaxOracle oracle(m);
  const double max_abs_r = 100.0;
  for (double pl : {0.5, 0.7, 0.9}) {
    for (int h = 2; h <= 6; ++h) {
      const double diff = oracle.value(belief(pl), h) - oracle.value(belief(pl), h - 1);
      CHECK(std::abs(diff) <= std::pow(0.95, h - 1) * max_abs_r + 1e-9);
    }
  }
}

namespace {

PomdpModel random_model(std::uint64_t seed, double scale, double shift) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_real_distribution<double> r(-10.0, 10.0);
  constexpr int S = 3, A = 3, Z = 2;
  PomdpModel m(S, A, Z, 0.9);
  auto row = [&](int n) {
    std::vector<Weighted> w;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) w.push_back({i, u(rng)}), sum += w.back().prob;
    for (auto& x : w) x.prob /= sum;
    return w;
  };
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      m.set_transition(s, a, row(S));
      m.set_observation(s, a, row(Z));
      m.set_reward(s, a, scale * r(rng) + shift);
    }
  }
  m.set_initial(row(S));
  m.finalize();
  return m;
}

}  // namespace

TEST_CASE("greedy action is invariant under positive affine reward rescaling") {
  SUBCASE("scaling Tiger") {
    const auto base = tiger_model();
    ExpectimaxOracle a(base);
    for (double scale : {0.5, 2.0, 17.0}) {
      TigerParams p;
      p.tiger_penalty *= scale;
      p.gold_reward *= scale;
      p.listen_reward *= scale;
      const auto scaled = tiger_model(p);
      ExpectimaxOracle b(scaled);
      for (double pl : {0.5, 0.6, 0.8, 0.9, 0.96, 0.99}) {
        for (int h = 1; h <= 4; ++h) CHECK(a.greedy_action(belief(pl), h) == b.greedy_action(belief(pl), h));
      }
    }
  }
  SUBCASE("scale and shift on models without terminations") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto base = random_model(seed, 1.0, 0.0);
      const auto moved = random_model(seed, 3.0, 25.0);
      ExpectimaxOracle a(base), b(moved);
      const DenseBelief start = DenseBelief::from_initial(base);
      for (int h = 1; h <= 4; ++h) CHECK(a.greedy_action(start, h) == b.greedy_action(start, h));
    }
  }
}
