#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pomcpe/model.hpp"

namespace pomcpe {

/// Exact probability vector over states.
struct DenseBelief {
  std::vector<double> probs;

  static DenseBelief uniform(int num_states);
  static DenseBelief from_initial(const PomdpModel& m);

  /// Entries nonnegative and summing to 1 within 1e-9.
  bool valid() const;
  std::size_t size() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }
};

/// Sum_s T(s, a, .) b(s). Terminal and terminating mass is kept, so the
/// result sums to 1.
DenseBelief predict(const DenseBelief& b, ActionId a, const PomdpModel& m);

/// Pr(z | b, a).
double observation_probability(const DenseBelief& b, ActionId a, ObsId z, const PomdpModel& m);

/// Bayes filter: b'(s') = eta O(z | s', a) sum_s T(s' | s, a) b(s).
/// Throws ImpossibleObservation when Pr(z | b, a) = 0.
DenseBelief exact_belief_update(const DenseBelief& b, ActionId a, ObsId z, const PomdpModel& m);

/// Sum_s b(s) R(s, a).
double expected_reward(const DenseBelief& b, ActionId a, const PomdpModel& m);

/// Sum_t gamma^t r_t.
double discounted_return(std::span<const double> rewards, double gamma);

/// Shannon entropy in nats, with 0 log 0 = 0.
double exact_entropy(const DenseBelief& b);

/// Finite-horizon expectimax over the belief tree. Only meant as an oracle on
/// small models: the number of enumerated belief nodes per query is capped
/// and BudgetExceeded is thrown past the cap.
///
/// Terminal states and terminating (s, a) pairs are absorbing with zero
/// future value. Internally beliefs are carried unnormalized, so the
/// observation probability folds into the recursion.
class ExpectimaxOracle {
 public:
  static constexpr std::size_t kDefaultNodeCap = 1'000'000;

  explicit ExpectimaxOracle(const PomdpModel& model, std::size_t node_cap = kDefaultNodeCap);

  /// Q(b, a) over `horizon` steps. horizon 0 has no future term, so it
  /// equals expected_reward; horizon 1 coincides with it too.
  double q_value(const DenseBelief& b, ActionId a, int horizon);
  double value(const DenseBelief& b, int horizon);

  /// argmax_a Q(b, a), lowest action index on ties.
  ActionId greedy_action(const DenseBelief& b, int horizon);

  /// Q(b, a) - max over a' != a of Q(b, a'). Needs at least two actions.
  double value_of_information(const DenseBelief& b, ActionId a, int horizon);

  std::size_t nodes_expanded() const { return nodes_; }

 private:
  double q_weights(const std::vector<double>& w, ActionId a, int steps_left);
  double v_weights(const std::vector<double>& w, int steps_left);
  void count_node();

  const PomdpModel& model_;
  std::size_t cap_;
  std::size_t nodes_ = 0;
};

}  // namespace pomcpe
