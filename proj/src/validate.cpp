#include "pomcpe/validate.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "pomcpe/exact.hpp"
#include "pomcpe/hallway.hpp"
#include "pomcpe/particle_filter.hpp"
#include "pomcpe/tiger.hpp"

namespace pomcpe {

bool ValidationReport::ok() const {
  for (const auto& c : checks) {
    if (!c.ok) return false;
  }
  return !checks.empty();
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.ok ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << '\n';
  }
  os << (ok() ? "all checks passed" : "validation FAILED") << '\n';
  return os.str();
}

namespace {

void run_check(ValidationReport& report, std::string name,
               const std::function<std::string()>& body) {
  ValidationCheck check{std::move(name), false, {}};
  try {
    check.detail = body();
    check.ok = true;
  } catch (const LayoutInvalid& ex) {
    check.detail = std::string("LayoutInvalid: ") + ex.what();
  } catch (const std::exception& ex) {
    check.detail = ex.what();
  }
  report.checks.push_back(std::move(check));
}

void expect_near(double actual, double expected, double tol, const std::string& what) {
  if (!(std::abs(actual - expected) <= tol)) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": got " << actual << ", expected " << expected << " +- " << tol;
    throw std::runtime_error(os.str());
  }
}

std::string entropy_base_cases() {
  ParticleFilter f;
  f.add(0);
  expect_near(f.entropy(), 0.0, 1e-12, "one particle");
  ParticleFilter dup = f;
  dup.add(0);
  expect_near(dup.entropy(), 0.0, 1e-12, "duplicate second particle");
  ParticleFilter distinct = f;
  distinct.add(1);
  expect_near(distinct.entropy(), std::log(2.0), 1e-12, "distinct second particle");
  return "H1 = 0, duplicate -> 0, distinct -> ln 2";
}

std::string entropy_random_walk(bool corrupt) {
  Rng rng(20240601);
  std::uniform_int_distribution<StateId> state(0, 99);
  ParticleFilter f;
  double worst = 0.0;
  constexpr int kSteps = 100'000;
  for (int i = 0; i < kSteps; ++i) {
    f.add(state(rng));
    if (corrupt && i == kSteps / 2) f.corrupt_entropy_for_testing(f.entropy() + 0.01);
    worst = std::max(worst, std::abs(f.entropy() - f.full_entropy()));
    if (worst > 1e-6) {
      throw std::runtime_error("cached entropy drifted by " + std::to_string(worst) +
                               " after " + std::to_string(i + 1) + " insertions");
    }
  }
  std::ostringstream os;
  os << "max |cached - full| = " << worst << " over " << kSteps << " insertions";
  return os.str();
}

std::string tiger_checks() {
  const PomdpModel m = tiger::tiger_model();
  const DenseBelief half{{0.5, 0.5}};
  const DenseBelief eighty{{0.8, 0.2}};
  const DenseBelief ninety_six{{0.96, 0.04}};
  expect_near(expected_reward(half, tiger::kOpenLeft, m), -45.0, 1e-12, "R(0.5, open-left)");
  expect_near(expected_reward(eighty, tiger::kOpenLeft, m), -78.0, 1e-12, "R(0.8, open-left)");
  expect_near(expected_reward(eighty, tiger::kOpenRight, m), -12.0, 1e-12, "R(0.8, open-right)");
  expect_near(expected_reward(ninety_six, tiger::kOpenLeft, m), -95.6, 1e-12, "R(0.96, open-left)");
  expect_near(expected_reward(ninety_six, tiger::kOpenRight, m), 5.6, 1e-12, "R(0.96, open-right)");
  const auto b1 = exact_belief_update(half, tiger::kListen, tiger::kHearLeft, m);
  expect_near(b1[0], 0.8, 1e-12, "posterior after hear-left");
  const auto b2 = exact_belief_update(b1, tiger::kListen, tiger::kHearRight, m);
  expect_near(b2[0], 0.5, 1e-12, "posterior after hear-left, hear-right");
  ExpectimaxOracle oracle(m);
  if (oracle.greedy_action(half, 3) != tiger::kListen) throw std::runtime_error("h=3 greedy is not listen");
  if (!(oracle.value_of_information(half, tiger::kListen, 3) > 0.0)) {
    throw std::runtime_error("voi(listen) at the uniform belief is not positive");
  }
  if (!(oracle.value_of_information(DenseBelief{{1.0, 0.0}}, tiger::kListen, 1) < 0.0)) {
    throw std::runtime_error("voi(listen) at a certain belief is not negative");
  }
  return "expected rewards, belief updates, greedy action and voi signs";
}

std::string layout_check(int k, bool delete_room) {
  auto layout = hallway::HallwayLayout::build(k, k);
  if (delete_room) layout.rooms.pop_back();
  const auto report = hallway::validate_layout(layout);
  std::ostringstream os;
  os << report.states << " states, " << report.observations << " observations, f->star "
     << report.signal_to_star[0] << " actions";
  return os.str();
}

}  // namespace

ValidationReport run_validation(const ValidationFaults& faults) {
  ValidationReport report;
  run_check(report, "entropy base cases", entropy_base_cases);
  run_check(report, "incremental entropy matches full recomputation",
            [&] { return entropy_random_walk(faults.corrupt_entropy); });
  run_check(report, "tiger oracle", tiger_checks);
  for (int k = 0; k <= 2; ++k) {
    run_check(report, "hallway layout k1=k2=" + std::to_string(k),
              [&] { return layout_check(k, faults.delete_room); });
  }
  return report;
}

}  // namespace pomcpe
