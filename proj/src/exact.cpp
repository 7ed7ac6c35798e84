#include "pomcpe/exact.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace pomcpe {

DenseBelief DenseBelief::uniform(int num_states) {
  return DenseBelief{std::vector<double>(num_states, 1.0 / num_states)};
}

DenseBelief DenseBelief::from_initial(const PomdpModel& m) {
  DenseBelief b{std::vector<double>(m.num_states(), 0.0)};
  for (const auto& w : m.initial_distribution()) b.probs[w.index] += w.prob;
  return b;
}

bool DenseBelief::valid() const {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) return false;
    total += p;
  }
  return std::abs(total - 1.0) <= 1e-9;
}

DenseBelief predict(const DenseBelief& b, ActionId a, const PomdpModel& m) {
  DenseBelief out{std::vector<double>(m.num_states(), 0.0)};
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (b.probs[s] == 0.0) continue;
    for (const auto& w : m.transition(s, a)) out.probs[w.index] += w.prob * b.probs[s];
  }
  return out;
}

namespace {

std::vector<double> unnormalized_posterior(const DenseBelief& b, ActionId a, ObsId z,
                                           const PomdpModel& m) {
  DenseBelief predicted = predict(b, a, m);
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (predicted.probs[s] != 0.0) predicted.probs[s] *= m.observation_prob(s, a, z);
  }
  return std::move(predicted.probs);
}

}  // namespace

double observation_probability(const DenseBelief& b, ActionId a, ObsId z, const PomdpModel& m) {
  auto w = unnormalized_posterior(b, a, z, m);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

DenseBelief exact_belief_update(const DenseBelief& b, ActionId a, ObsId z, const PomdpModel& m) {
  auto w = unnormalized_posterior(b, a, z, m);
  const double pz = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(pz > 0.0)) {
    throw ImpossibleObservation("observation " + std::to_string(z) +
                                " has zero probability under action " + std::to_string(a));
  }
  const double eta = 1.0 / pz;
  for (double& p : w) p *= eta;
  return DenseBelief{std::move(w)};
}

double expected_reward(const DenseBelief& b, ActionId a, const PomdpModel& m) {
  double r = 0.0;
  for (StateId s = 0; s < m.num_states(); ++s) r += b.probs[s] * m.reward(s, a);
  return r;
}

double discounted_return(std::span<const double> rewards, double gamma) {
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= gamma;
  }
  return total;
}

double exact_entropy(const DenseBelief& b) {
  double h = 0.0;
  for (double p : b.probs) {
    if (p > 0.0) h -= p * std::log(p);  // 0 log 0 = 0
  }
  return h;
}

ExpectimaxOracle::ExpectimaxOracle(const PomdpModel& model, std::size_t node_cap)
    : model_(model), cap_(node_cap) {}

void ExpectimaxOracle::count_node() {
  if (++nodes_ > cap_) {
    throw BudgetExceeded("expectimax oracle exceeded its cap of " + std::to_string(cap_) +
                         " belief nodes");
  }
}

double ExpectimaxOracle::q_weights(const std::vector<double>& w, ActionId a, int steps_left) {
  const PomdpModel& m = model_;
  const int n = m.num_states();
  double immediate = 0.0;
  for (StateId s = 0; s < n; ++s) immediate += w[s] * m.reward(s, a);
  if (steps_left <= 1) return immediate;

  // Mass that survives the step: not terminating at (s, a), not landing in a
  // terminal state.
  std::vector<double> next(n, 0.0);
  bool any = false;
  for (StateId s = 0; s < n; ++s) {
    if (w[s] == 0.0 || m.terminates(s, a)) continue;
    for (const auto& t : m.transition(s, a)) {
      if (m.is_terminal(t.index)) continue;
      next[t.index] += t.prob * w[s];
      any = true;
    }
  }
  if (!any) return immediate;

  double future = 0.0;
  std::vector<double> branch(n);
  for (ObsId z = 0; z < m.num_observations(); ++z) {
    bool reachable = false;
    for (StateId s = 0; s < n; ++s) {
      branch[s] = next[s] == 0.0 ? 0.0 : next[s] * m.observation_prob(s, a, z);
      reachable = reachable || branch[s] > 0.0;
    }
    if (reachable) future += v_weights(branch, steps_left - 1);
  }
  return immediate + m.discount() * future;
}

double ExpectimaxOracle::v_weights(const std::vector<double>& w, int steps_left) {
  count_node();
  if (steps_left <= 0) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (ActionId a = 0; a < model_.num_actions(); ++a) {
    best = std::max(best, q_weights(w, a, steps_left));
  }
  return best;
}

double ExpectimaxOracle::q_value(const DenseBelief& b, ActionId a, int horizon) {
  nodes_ = 0;
  count_node();
  return q_weights(b.probs, a, std::max(horizon, 1));
}

double ExpectimaxOracle::value(const DenseBelief& b, int horizon) {
  nodes_ = 0;
  if (horizon <= 0) return 0.0;
  return v_weights(b.probs, horizon);
}

ActionId ExpectimaxOracle::greedy_action(const DenseBelief& b, int horizon) {
  ActionId best_a = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  for (ActionId a = 0; a < model_.num_actions(); ++a) {
    const double q = q_value(b, a, horizon);
    if (q > best_q) {
      best_q = q;
      best_a = a;
    }
  }
  return best_a;
}

double ExpectimaxOracle::value_of_information(const DenseBelief& b, ActionId a, int horizon) {
  if (model_.num_actions() < 2) throw ModelError("value of information needs at least two actions");
  const double own = q_value(b, a, horizon);
  double best_other = -std::numeric_limits<double>::infinity();
  for (ActionId other = 0; other < model_.num_actions(); ++other) {
    if (other != a) best_other = std::max(best_other, q_value(b, other, horizon));
  }
  return own - best_other;
}

}  // namespace pomcpe
