#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pomcpe/model.hpp"
#include "pomcpe/particle_filter.hpp"

namespace pomcpe {

enum class Algorithm { pomcp, pomcpe };

/// How the entropy term combines the immediate reduction with the largest
/// reduction stored under the action. `sum` adds them, `max` takes the larger.
enum class EntropyCombine { sum, max };

inline constexpr std::uint64_t kNoThreshold = std::numeric_limits<std::uint64_t>::max();

struct PlannerConfig {
  Algorithm algorithm = Algorithm::pomcp;
  double exploration_c = 50.0;
  /// Weight of the entropy bonus. 0 turns POMCPe back into POMCP.
  double entropy_e = 0.0;
  /// Discount used inside the search; the model's when unset.
  std::optional<double> gamma;
  /// Trajectories stop at the first depth with gamma^depth < epsilon.
  double epsilon = 0.01;
  /// Particles an action must pass to its children before its entropy
  /// reduction is propagated to the ancestors.
  std::uint64_t k_threshold = 10;
  EntropyCombine entropy_combine = EntropyCombine::sum;
  /// Simulations per search. Ignored when time_budget_ms is set.
  std::uint64_t simulations = 10'000;
  std::optional<double> time_budget_ms;
  std::uint64_t initial_particles = 1000;
  std::uint64_t seed = 0;
};

class BeliefNode;

class ActionNode {
 public:
  ActionNode(ActionId action, BeliefNode* parent) : action_(action), parent_(parent) {}

  ActionId action() const { return action_; }
  BeliefNode* parent() const { return parent_; }

  std::uint64_t visits = 0;
  /// Running mean of the returns backed up through this node.
  double q = 0.0;
  /// Largest entropy reduction propagated into this node; starts at 0 and
  /// never decreases.
  double max_entropy_reduction = 0.0;
  /// Particles added to the child belief filters through this action.
  std::uint64_t particle_throughput = 0;

  BeliefNode* child(ObsId z) const;
  BeliefNode& child_or_create(ObsId z);
  const std::vector<std::pair<ObsId, std::unique_ptr<BeliefNode>>>& children() const {
    return children_;
  }
  /// Detaches the child for z (nullptr if absent).
  std::unique_ptr<BeliefNode> release_child(ObsId z);

 private:
  ActionId action_;
  BeliefNode* parent_;
  std::vector<std::pair<ObsId, std::unique_ptr<BeliefNode>>> children_;
};

class BeliefNode {
 public:
  explicit BeliefNode(ActionNode* parent = nullptr) : parent_(parent) {}
  BeliefNode(const BeliefNode&) = delete;
  BeliefNode& operator=(const BeliefNode&) = delete;

  ParticleFilter filter;
  /// Trajectories that reached this node, including the one that expanded it.
  std::uint64_t visits = 0;

  bool expanded() const { return !actions_.empty(); }
  void expand(int num_actions);
  std::vector<ActionNode>& actions() { return actions_; }
  const std::vector<ActionNode>& actions() const { return actions_; }
  ActionNode& action(ActionId a) { return actions_[a]; }
  const ActionNode& action(ActionId a) const { return actions_[a]; }

  ActionNode* parent() const { return parent_; }
  void detach() { parent_ = nullptr; }
  double entropy() const { return filter.entropy(); }

 private:
  ActionNode* parent_;
  std::vector<ActionNode> actions_;
};

/// Number of belief nodes in the subtree rooted at `node`, itself included.
std::size_t count_belief_nodes(const BeliefNode& node);

/// Q + c sqrt(ln N(b) / N(b,a)); infinite when the action is unvisited.
double ucb1_score(double q, double c, std::uint64_t parent_visits, std::uint64_t visits);

/// sqrt(ln N(b,a)), or sqrt(ln(N+1)) for N in {1, 2}.
double entropy_denominator(std::uint64_t visits);

/// e * dH / entropy_denominator(N(b,a)).
double entropy_bonus(double e, double delta_h, std::uint64_t visits);

/// UCB1 action choice. Unvisited actions come first (lowest index); ties
/// break to the lowest index.
ActionId ucb1_select(const BeliefNode& node, double c);

/// Raises max_entropy_reduction to dH on `a` and each ancestor action node
/// up to the root. Ancestors always hold at least their descendants' value,
/// so the walk ends at the first node already at or above dH.
void back_propagate_entropy(ActionNode& a, double delta_h);

/// Entropy signal for one action: the parent belief's entropy minus the
/// throughput-weighted entropy of the child beliefs. Once throughput reaches
/// k_threshold that reduction is propagated upward. Returns the reduction
/// combined with the stored maximum; 0 while no child holds particles.
double entropy_term(ActionNode& a, std::uint64_t k_threshold, EntropyCombine combine);

/// UCB1 plus the entropy bonus. Evaluating the entropy term can propagate
/// reductions, hence the non-const node.
ActionId pomcpe_select(BeliefNode& node, double c, double e, std::uint64_t k_threshold,
                       EntropyCombine combine);

struct SearchResult {
  ActionId action = 0;
  std::uint64_t simulations = 0;
  /// No root action was visited; the action is the lowest index.
  bool no_data = false;
};

enum class AdvanceStatus { ready, episode_over };

/// POMCP / POMCPe over a retained policy tree. One planner owns one tree and
/// is driven by one thread.
class Planner {
 public:
  Planner(const PomdpModel& model, PlannerConfig cfg);

  /// Fresh tree whose root holds initial_particles split evenly over the
  /// model's initial distribution.
  void reset();
  /// Fresh tree rooted at the given particles.
  void reset(ParticleFilter root_filter);
  void reseed(Rng rng) { rng_ = std::move(rng); }

  SearchResult search();

  /// Makes the child for (a, z) the new root, discarding the rest of the
  /// tree. A missing child is created; a root left with fewer than
  /// initial_particles particles is topped up by reinvigoration.
  AdvanceStatus advance_root(ActionId a, ObsId z, bool terminal);

  double simulate(StateId s, BeliefNode& node, int depth);
  double rollout(StateId s, int depth);
  ActionId select_action(BeliefNode& node);
  /// Root action with the best Q among visited actions.
  ActionId best_action() const;

  BeliefNode& root() { return *root_; }
  const BeliefNode& root() const { return *root_; }
  bool has_root() const { return root_ != nullptr; }
  const PlannerConfig& config() const { return cfg_; }
  double gamma() const { return gamma_; }
  /// First depth with gamma^depth < epsilon.
  int horizon() const { return horizon_; }
  Rng& rng() { return rng_; }

 private:
  const PomdpModel& model_;
  PlannerConfig cfg_;
  double gamma_;
  int horizon_;
  Rng rng_;
  std::unique_ptr<BeliefNode> root_;
};

}  // namespace pomcpe
