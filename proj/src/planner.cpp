#include "pomcpe/planner.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace pomcpe {

BeliefNode* ActionNode::child(ObsId z) const {
  for (const auto& [obs, node] : children_) {
    if (obs == z) return node.get();
  }
  return nullptr;
}

BeliefNode& ActionNode::child_or_create(ObsId z) {
  if (BeliefNode* existing = child(z)) return *existing;
  children_.emplace_back(z, std::make_unique<BeliefNode>(this));
  return *children_.back().second;
}

std::unique_ptr<BeliefNode> ActionNode::release_child(ObsId z) {
  for (auto& [obs, node] : children_) {
    if (obs == z) return std::move(node);
  }
  return nullptr;
}

void BeliefNode::expand(int num_actions) {
  actions_.reserve(num_actions);
  for (ActionId a = 0; a < num_actions; ++a) actions_.emplace_back(a, this);
}

std::size_t count_belief_nodes(const BeliefNode& node) {
  std::size_t total = 1;
  for (const auto& a : node.actions()) {
    for (const auto& [z, child] : a.children()) {
      if (child) total += count_belief_nodes(*child);
    }
  }
  return total;
}

double ucb1_score(double q, double c, std::uint64_t parent_visits, std::uint64_t visits) {
  if (visits == 0) return std::numeric_limits<double>::infinity();
  return q + c * std::sqrt(std::log(static_cast<double>(parent_visits)) /
                           static_cast<double>(visits));
}

double entropy_denominator(std::uint64_t visits) {
  const double n = static_cast<double>(visits);
  if (visits <= 2) return std::sqrt(std::log(n + 1.0));
  return std::sqrt(std::log(n));
}

double entropy_bonus(double e, double delta_h, std::uint64_t visits) {
  return e * (delta_h / entropy_denominator(visits));
}

namespace {

// Lowest-index unvisited action, or -1.
ActionId first_unvisited(const BeliefNode& node) {
  for (const auto& a : node.actions()) {
    if (a.visits == 0) return a.action();
  }
  return -1;
}

}  // namespace

ActionId ucb1_select(const BeliefNode& node, double c) {
  if (const ActionId fresh = first_unvisited(node); fresh >= 0) return fresh;
  ActionId best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& a : node.actions()) {
    const double score = ucb1_score(a.q, c, node.visits, a.visits);
    if (score > best_score) {
      best_score = score;
      best = a.action();
    }
  }
  return best;
}

void back_propagate_entropy(ActionNode& a, double delta_h) {
  ActionNode* node = &a;
  while (node != nullptr && node->max_entropy_reduction < delta_h) {
    node->max_entropy_reduction = delta_h;
    BeliefNode* belief = node->parent();
    node = belief != nullptr ? belief->parent() : nullptr;
  }
}

double entropy_term(ActionNode& a, std::uint64_t k_threshold, EntropyCombine combine) {
  const std::uint64_t n = a.particle_throughput;
  if (n == 0) return 0.0;
  double weighted = 0.0;
  for (const auto& [z, child] : a.children()) {
    const auto n_i = child->filter.size();
    if (n_i > 0) {
      weighted += (static_cast<double>(n_i) / static_cast<double>(n)) * child->entropy();
    }
  }
  const double parent_entropy = a.parent() != nullptr ? a.parent()->entropy() : 0.0;
  const double delta_h = parent_entropy - weighted;
  if (n >= k_threshold) back_propagate_entropy(a, delta_h);
  if (combine == EntropyCombine::max) return std::max(delta_h, a.max_entropy_reduction);
  return delta_h + a.max_entropy_reduction;
}

ActionId pomcpe_select(BeliefNode& node, double c, double e, std::uint64_t k_threshold,
                       EntropyCombine combine) {
  if (const ActionId fresh = first_unvisited(node); fresh >= 0) return fresh;
  ActionId best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (auto& a : node.actions()) {
    const double ucb = ucb1_score(a.q, c, node.visits, a.visits);
    const double score = ucb + entropy_bonus(e, entropy_term(a, k_threshold, combine), a.visits);
    if (score > best_score) {
      best_score = score;
      best = a.action();
    }
  }
  return best;
}

namespace {

int compute_horizon(double gamma, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  constexpr int kMaxDepth = 100'000;
  for (int d = 0; d < kMaxDepth; ++d) {
    if (std::pow(gamma, d) < epsilon) return d;
  }
  return kMaxDepth;
}

}  // namespace

Planner::Planner(const PomdpModel& model, PlannerConfig cfg)
    : model_(model),
      cfg_(cfg),
      gamma_(cfg.gamma.value_or(model.discount())),
      horizon_(compute_horizon(gamma_, cfg.epsilon)),
      rng_(derive_rng(cfg.seed, kPlannerStream)) {
  if (!(gamma_ >= 0.0 && gamma_ < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (cfg_.exploration_c < 0.0 || cfg_.entropy_e < 0.0) {
    throw std::invalid_argument("exploration and entropy weights must be nonnegative");
  }
  reset();
}

void Planner::reset() {
  std::vector<double> probs(model_.num_states(), 0.0);
  for (const auto& w : model_.initial_distribution()) probs[w.index] += w.prob;
  reset(filter_from_probabilities(probs, cfg_.initial_particles));
}

void Planner::reset(ParticleFilter root_filter) {
  root_ = std::make_unique<BeliefNode>();
  root_->filter = std::move(root_filter);
  root_->filter.refresh_entropy();
}

ActionId Planner::select_action(BeliefNode& node) {
  if (cfg_.algorithm == Algorithm::pomcpe) {
    return pomcpe_select(node, cfg_.exploration_c, cfg_.entropy_e, cfg_.k_threshold,
                         cfg_.entropy_combine);
  }
  return ucb1_select(node, cfg_.exploration_c);
}

double Planner::rollout(StateId s, int depth) {
  std::uniform_int_distribution<ActionId> any_action(0, model_.num_actions() - 1);
  double total = 0.0;
  double weight = 1.0;
  for (; depth < horizon_ && !model_.is_terminal(s); ++depth) {
    const ActionId a = any_action(rng_);
    const StepOutcome out = model_.step(s, a, rng_);
    total += weight * out.reward;
    if (out.done) break;
    weight *= gamma_;
    s = out.next;
  }
  return total;
}

double Planner::simulate(StateId s, BeliefNode& node, int depth) {
  if (depth >= horizon_) return 0.0;
  if (model_.is_terminal(s)) return 0.0;
  if (!node.expanded()) {
    node.expand(model_.num_actions());
    ++node.visits;
    return rollout(s, depth);
  }

  const ActionId a = select_action(node);
  ActionNode& action = node.action(a);
  const StepOutcome out = model_.step(s, a, rng_);
  double ret = out.reward;
  if (!out.done) {
    BeliefNode& child = action.child_or_create(out.obs);
    const auto before = child.filter.size();
    ret += gamma_ * simulate(out.next, child, depth + 1);
    action.particle_throughput += child.filter.size() - before;
  }

  node.filter.add(s);
  ++node.visits;
  ++action.visits;
  action.q += (ret - action.q) / static_cast<double>(action.visits);
  return ret;
}

ActionId Planner::best_action() const {
  ActionId best = 0;
  double best_q = -std::numeric_limits<double>::infinity();
  for (const auto& a : root_->actions()) {
    if (a.visits > 0 && a.q > best_q) {
      best_q = a.q;
      best = a.action();
    }
  }
  return best;
}

SearchResult Planner::search() {
  if (!root_) throw std::logic_error("search called after the episode ended");
  SearchResult result;
  const auto start = std::chrono::steady_clock::now();
  auto out_of_budget = [&] {
    if (cfg_.time_budget_ms) {
      const std::chrono::duration<double, std::milli> spent =
          std::chrono::steady_clock::now() - start;
      return spent.count() >= *cfg_.time_budget_ms;
    }
    return result.simulations >= cfg_.simulations;
  };
  while (!out_of_budget()) {
    const StateId s =
        root_->filter.empty() ? model_.sample_initial(rng_) : root_->filter.sample(rng_);
    simulate(s, *root_, 0);
    ++result.simulations;
  }
  bool any_visited = false;
  for (const auto& a : root_->actions()) any_visited = any_visited || a.visits > 0;
  result.no_data = !any_visited;
  result.action = best_action();
  return result;
}

AdvanceStatus Planner::advance_root(ActionId a, ObsId z, bool terminal) {
  if (terminal) {
    root_.reset();
    return AdvanceStatus::episode_over;
  }
  std::unique_ptr<BeliefNode> next;
  if (root_->expanded()) next = root_->action(a).release_child(z);
  if (!next) next = std::make_unique<BeliefNode>();
  next->detach();
  if (next->filter.size() < cfg_.initial_particles) {
    reinvigorate(next->filter, root_->filter, model_, a, z, cfg_.initial_particles, rng_);
  }
  root_ = std::move(next);
  return AdvanceStatus::ready;
}

}  // namespace pomcpe
