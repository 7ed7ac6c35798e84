#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pomcpe/hallway.hpp"
#include "pomcpe/planner.hpp"
#include "pomcpe/tiger.hpp"

namespace pomcpe {

struct DomainSpec {
  std::string name = "hallway";  // "hallway" or "tiger"
  int k1 = 1;
  int k2 = 1;
  hallway::StartVariant start = hallway::StartVariant::standard;
  tiger::TigerParams tiger;
};

struct RunConfig {
  DomainSpec domain;
  PlannerConfig planner;
  std::uint64_t episodes = 100;
  int max_steps = 200;
  /// Episode i runs with seed base_seed + i.
  std::uint64_t base_seed = 42;
  std::string out;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Fills `cfg` from a JSON document; absent keys keep their current values.
void merge_json(RunConfig& cfg, const nlohmann::json& j);

/// A model plus the hallway layout it came from, when it is a hallway.
struct Domain {
  std::shared_ptr<const PomdpModel> model;
  std::optional<hallway::HallwayLayout> layout;
};
Domain make_domain(const DomainSpec& spec);

struct EpisodeResult {
  std::uint64_t seed = 0;
  int steps = 0;
  double discounted = 0.0;
  double cumulative = 0.0;
  /// Ended in a terminal transition with a positive final reward.
  bool reached_goal = false;
  bool hit_step_cap = false;
  bool error = false;
  std::string error_message;
  std::vector<ActionId> actions;
  std::vector<ObsId> observations;
  std::vector<double> rewards;

  bool operator==(const EpisodeResult&) const = default;
};

/// Decision maker driven by run_episode.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_episode(std::uint64_t seed) = 0;
  virtual ActionId act(int step) = 0;
  virtual void observe(ActionId a, ObsId z, bool terminal) = 0;
};

/// Plans every step with a fresh planner RNG derived from (seed, step) and
/// reuses the tree between steps.
class PlannerAgent : public Agent {
 public:
  PlannerAgent(const PomdpModel& model, PlannerConfig cfg);
  void begin_episode(std::uint64_t seed) override;
  ActionId act(int step) override;
  void observe(ActionId a, ObsId z, bool terminal) override;
  Planner& planner() { return *planner_; }

 private:
  const PomdpModel& model_;
  PlannerConfig cfg_;
  std::uint64_t seed_ = 0;
  std::unique_ptr<Planner> planner_;
};

/// Chooses actions from the observation history alone.
class ScriptedAgent : public Agent {
 public:
  using Policy = std::function<ActionId(const std::vector<ObsId>& history)>;
  explicit ScriptedAgent(Policy policy) : policy_(std::move(policy)) {}
  void begin_episode(std::uint64_t) override { history_.clear(); }
  ActionId act(int) override { return policy_(history_); }
  void observe(ActionId, ObsId z, bool) override { history_.push_back(z); }

 private:
  Policy policy_;
  std::vector<ObsId> history_;
};

/// Follows hallway::optimal_plan, branching on the signal seen at f.
ScriptedAgent make_optimal_hallway_agent(const hallway::HallwayLayout& layout,
                                         hallway::StartVariant start);

/// Samples the hidden start state, then alternates act / environment step /
/// observe until a terminal transition or max_steps.
EpisodeResult run_episode(const PomdpModel& model, Agent& agent, std::uint64_t seed,
                          int max_steps);

struct BatchStats {
  std::uint64_t episodes = 0;
  std::uint64_t completed = 0;
  std::uint64_t errors = 0;
  double mean_discounted = 0.0;
  double stddev_discounted = 0.0;
  double mean_cumulative = 0.0;
  double stddev_cumulative = 0.0;
  double success_rate = 0.0;
  double mean_steps = 0.0;
};

/// Aggregates over the rows without an error marker, in row order.
BatchStats compute_stats(const std::vector<EpisodeResult>& rows);

struct BatchResult {
  std::vector<EpisodeResult> rows;
  BatchStats stats;
};

/// Runs cfg.episodes episodes (possibly on several threads; results keep
/// episode order and do not depend on the thread count) and, when cfg.out is
/// set, writes the CSV and its summary.
BatchResult run_batch(const RunConfig& cfg);

/// Runs `count` independent jobs on up to `threads` workers.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

inline constexpr const char* kCsvHeader = "seed,steps,discounted,cumulative,reached_goal";

/// CSV (header plus one row per episode) and a sidecar `<path>.summary.json`
/// echoing the stats and the run configuration. Throws std::runtime_error
/// naming the path on IO failure.
void write_results(const std::vector<EpisodeResult>& rows, const BatchStats& stats,
                   const RunConfig& cfg, const std::string& path);
std::vector<EpisodeResult> read_results(const std::string& path);
std::string summary_path(const std::string& csv_path);

struct GridRow {
  double c = 0.0;
  double e = 0.0;
  BatchStats stats;
};

/// One batch per (c, e) cell, ranked by mean discounted return (stable, so
/// equal means keep grid order). POMCP ignores e_grid.
std::vector<GridRow> grid_search(const RunConfig& base, const std::vector<double>& c_grid,
                                 const std::vector<double>& e_grid,
                                 std::uint64_t episodes_per_cell);
void write_grid(const std::vector<GridRow>& rows, const RunConfig& base, const std::string& path);

std::string format_double(double v);
const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);
const char* to_string(hallway::StartVariant v);
hallway::StartVariant parse_start(const std::string& s);

}  // namespace pomcpe
