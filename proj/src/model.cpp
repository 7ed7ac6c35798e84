#include "pomcpe/model.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace pomcpe {

Rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index)};
  return Rng(seq);
}

std::int32_t sample_from(std::span<const Weighted> dist, Rng& rng) {
  if (dist.size() == 1) return dist.front().index;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  for (const auto& w : dist) {
    if (u < w.prob) return w.index;
    u -= w.prob;
  }
  // Rounding slack: fall back to the last entry with positive mass.
  for (auto it = dist.rbegin(); it != dist.rend(); ++it) {
    if (it->prob > 0.0) return it->index;
  }
  return dist.back().index;
}

PomdpModel::PomdpModel(int num_states, int num_actions, int num_observations, double discount)
    : num_states_(num_states),
      num_actions_(num_actions),
      num_observations_(num_observations),
      discount_(discount),
      transitions_(static_cast<std::size_t>(num_states) * num_actions),
      observations_(static_cast<std::size_t>(num_states) * num_actions),
      rewards_(static_cast<std::size_t>(num_states) * num_actions, 0.0),
      terminal_(num_states, 0),
      terminating_(static_cast<std::size_t>(num_states) * num_actions, 0),
      action_names_(num_actions),
      observation_names_(num_observations),
      state_names_(num_states) {
  if (num_states <= 0 || num_actions <= 0 || num_observations <= 0) {
    throw ModelError("model dimensions must be positive");
  }
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw ModelError("discount must lie in [0, 1)");
  }
  for (int a = 0; a < num_actions; ++a) action_names_[a] = "a" + std::to_string(a);
  for (int z = 0; z < num_observations; ++z) observation_names_[z] = "z" + std::to_string(z);
  for (int s = 0; s < num_states; ++s) state_names_[s] = "s" + std::to_string(s);
}

void PomdpModel::set_transition(StateId s, ActionId a, std::vector<Weighted> row_) {
  transitions_[row(s, a)] = std::move(row_);
}

void PomdpModel::set_observation(StateId s_next, ActionId a, std::vector<Weighted> row_) {
  observations_[row(s_next, a)] = std::move(row_);
}

void PomdpModel::set_reward(StateId s, ActionId a, double r) { rewards_[row(s, a)] = r; }

void PomdpModel::set_terminal(StateId s, bool terminal) { terminal_[s] = terminal ? 1 : 0; }

void PomdpModel::set_terminating(StateId s, ActionId a, bool terminating) {
  terminating_[row(s, a)] = terminating ? 1 : 0;
}

void PomdpModel::set_initial(std::vector<Weighted> dist) { initial_ = std::move(dist); }

void PomdpModel::set_action_name(ActionId a, std::string name) { action_names_[a] = std::move(name); }

void PomdpModel::set_observation_name(ObsId z, std::string name) {
  observation_names_[z] = std::move(name);
}

void PomdpModel::set_state_name(StateId s, std::string name) { state_names_[s] = std::move(name); }

namespace {

void check_distribution(std::span<const Weighted> dist, int bound, const std::string& what) {
  if (dist.empty()) throw ModelError(what + ": empty distribution");
  double total = 0.0;
  for (const auto& w : dist) {
    if (w.index < 0 || w.index >= bound) throw ModelError(what + ": index out of range");
    if (!(w.prob >= 0.0)) throw ModelError(what + ": negative probability");
    total += w.prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << what << ": probabilities sum to " << total;
    throw ModelError(os.str());
  }
}

}  // namespace

void PomdpModel::finalize() {
  for (StateId s = 0; s < num_states_; ++s) {
    for (ActionId a = 0; a < num_actions_; ++a) {
      const std::string tag = "(s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
      check_distribution(transitions_[row(s, a)], num_states_, "transition " + tag);
      check_distribution(observations_[row(s, a)], num_observations_, "observation " + tag);
    }
  }
  check_distribution(initial_, num_states_, "initial distribution");
}

double PomdpModel::transition_prob(StateId s, ActionId a, StateId s_next) const {
  double p = 0.0;
  for (const auto& w : transition(s, a)) {
    if (w.index == s_next) p += w.prob;
  }
  return p;
}

double PomdpModel::observation_prob(StateId s_next, ActionId a, ObsId z) const {
  double p = 0.0;
  for (const auto& w : observation(s_next, a)) {
    if (w.index == z) p += w.prob;
  }
  return p;
}

StateId PomdpModel::sample_initial(Rng& rng) const { return sample_from(initial_, rng); }

StepOutcome PomdpModel::step(StateId s, ActionId a, Rng& rng) const {
  StepOutcome out;
  out.next = sample_from(transition(s, a), rng);
  out.obs = sample_from(observation(out.next, a), rng);
  out.reward = reward(s, a);
  out.done = terminates(s, a) || is_terminal(out.next);
  return out;
}

}  // namespace pomcpe
