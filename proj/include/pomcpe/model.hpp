#pragma once

#include <span>
#include <string>
#include <vector>

#include "pomcpe/types.hpp"

namespace pomcpe {

/// One nonzero entry of a sparse categorical distribution.
struct Weighted {
  std::int32_t index;
  double prob;
};

/// Result of one draw from the generative model.
struct StepOutcome {
  StateId next;
  ObsId obs;
  double reward;
  /// True when the episode ends with this step: either the action terminates
  /// from the current state or the next state is terminal.
  bool done;
};

/// Finite POMDP (S, A, Z, T, O, R, gamma) with an initial distribution and a
/// set of terminal states, stored as sparse rows.
///
/// Built through the setters, then sealed with finalize(), which checks that
/// every row is a probability distribution. After that the model is read-only
/// and may be shared freely between threads.
///
/// Besides terminal states, an individual (s, a) pair can be marked as
/// terminating: the episode ends after that action regardless of the next
/// state. Tiger's door actions use this.
class PomdpModel {
 public:
  PomdpModel(int num_states, int num_actions, int num_observations, double discount);

  void set_transition(StateId s, ActionId a, std::vector<Weighted> row);
  void set_observation(StateId s_next, ActionId a, std::vector<Weighted> row);
  void set_reward(StateId s, ActionId a, double r);
  void set_terminal(StateId s, bool terminal = true);
  void set_terminating(StateId s, ActionId a, bool terminating = true);
  void set_initial(std::vector<Weighted> dist);
  void set_action_name(ActionId a, std::string name);
  void set_observation_name(ObsId z, std::string name);
  void set_state_name(StateId s, std::string name);

  /// Validates all rows (sums within 1e-9, indices in range, nonnegative).
  /// Throws ModelError on the first violation.
  void finalize();

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int num_observations() const { return num_observations_; }
  double discount() const { return discount_; }

  std::span<const Weighted> transition(StateId s, ActionId a) const {
    return transitions_[row(s, a)];
  }
  std::span<const Weighted> observation(StateId s_next, ActionId a) const {
    return observations_[row(s_next, a)];
  }
  double transition_prob(StateId s, ActionId a, StateId s_next) const;
  double observation_prob(StateId s_next, ActionId a, ObsId z) const;
  double reward(StateId s, ActionId a) const { return rewards_[row(s, a)]; }
  bool is_terminal(StateId s) const { return terminal_[s] != 0; }
  bool terminates(StateId s, ActionId a) const { return terminating_[row(s, a)] != 0; }
  std::span<const Weighted> initial_distribution() const { return initial_; }

  StateId sample_initial(Rng& rng) const;

  /// (s', z, r) ~ G(s, a). Rows with a single entry are pure lookups and do
  /// not consume randomness.
  StepOutcome step(StateId s, ActionId a, Rng& rng) const;

  const std::string& action_name(ActionId a) const { return action_names_[a]; }
  const std::string& observation_name(ObsId z) const { return observation_names_[z]; }
  const std::string& state_name(StateId s) const { return state_names_[s]; }

 private:
  std::size_t row(StateId s, ActionId a) const {
    return static_cast<std::size_t>(s) * num_actions_ + a;
  }

  int num_states_;
  int num_actions_;
  int num_observations_;
  double discount_;
  std::vector<std::vector<Weighted>> transitions_;
  std::vector<std::vector<Weighted>> observations_;
  std::vector<double> rewards_;
  std::vector<char> terminal_;
  std::vector<char> terminating_;
  std::vector<Weighted> initial_;
  std::vector<std::string> action_names_;
  std::vector<std::string> observation_names_;
  std::vector<std::string> state_names_;
};

/// Draws an index from a sparse distribution; single-entry rows return
/// without touching the engine.
std::int32_t sample_from(std::span<const Weighted> dist, Rng& rng);

}  // namespace pomcpe
