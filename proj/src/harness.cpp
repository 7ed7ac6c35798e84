#include "pomcpe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pomcpe/exact.hpp"

namespace pomcpe {

const char* to_string(Algorithm a) { return a == Algorithm::pomcpe ? "pomcpe" : "pomcp"; }

Algorithm parse_algorithm(const std::string& s) {
  if (s == "pomcp") return Algorithm::pomcp;
  if (s == "pomcpe") return Algorithm::pomcpe;
  throw std::invalid_argument("unknown planner '" + s + "' (expected pomcp or pomcpe)");
}

const char* to_string(hallway::StartVariant v) {
  return v == hallway::StartVariant::modified ? "modified" : "standard";
}

hallway::StartVariant parse_start(const std::string& s) {
  if (s == "standard") return hallway::StartVariant::standard;
  if (s == "modified") return hallway::StartVariant::modified;
  throw std::invalid_argument("unknown start '" + s + "' (expected standard or modified)");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["domain"] = {{"name", cfg.domain.name},
                 {"k1", cfg.domain.k1},
                 {"k2", cfg.domain.k2},
                 {"start", to_string(cfg.domain.start)},
                 {"tiger",
                  {{"listen_accuracy", cfg.domain.tiger.listen_accuracy},
                   {"tiger_penalty", cfg.domain.tiger.tiger_penalty},
                   {"gold_reward", cfg.domain.tiger.gold_reward},
                   {"listen_reward", cfg.domain.tiger.listen_reward},
                   {"discount", cfg.domain.tiger.discount}}}};
  const PlannerConfig& p = cfg.planner;
  j["planner"] = {{"algorithm", to_string(p.algorithm)},
                  {"c", p.exploration_c},
                  {"e", p.entropy_e},
                  {"epsilon", p.epsilon},
                  {"k_threshold", p.k_threshold},
                  {"entropy_combine", p.entropy_combine == EntropyCombine::max ? "max" : "sum"},
                  {"simulations", p.simulations},
                  {"initial_particles", p.initial_particles}};
  j["planner"]["gamma"] = p.gamma ? nlohmann::json(*p.gamma) : nlohmann::json(nullptr);
  j["planner"]["time_budget_ms"] =
      p.time_budget_ms ? nlohmann::json(*p.time_budget_ms) : nlohmann::json(nullptr);
  j["episodes"] = cfg.episodes;
  j["max_steps"] = cfg.max_steps;
  j["seed"] = cfg.base_seed;
  j["out"] = cfg.out;
  j["threads"] = cfg.threads;
  return j;
}

namespace {

template <typename T>
void take(const nlohmann::json& j, const char* key, T& field) {
  if (j.contains(key) && !j[key].is_null()) field = j[key].get<T>();
}

template <typename T>
void take_optional(const nlohmann::json& j, const char* key, std::optional<T>& field) {
  if (!j.contains(key)) return;
  if (j[key].is_null()) {
    field.reset();
  } else {
    field = j[key].get<T>();
  }
}

}  // namespace

void merge_json(RunConfig& cfg, const nlohmann::json& j) {
  if (j.contains("domain")) {
    const auto& d = j["domain"];
    take(d, "name", cfg.domain.name);
    take(d, "k1", cfg.domain.k1);
    take(d, "k2", cfg.domain.k2);
    if (d.contains("start")) cfg.domain.start = parse_start(d["start"].get<std::string>());
    if (d.contains("tiger")) {
      const auto& t = d["tiger"];
      take(t, "listen_accuracy", cfg.domain.tiger.listen_accuracy);
      take(t, "tiger_penalty", cfg.domain.tiger.tiger_penalty);
      take(t, "gold_reward", cfg.domain.tiger.gold_reward);
      take(t, "listen_reward", cfg.domain.tiger.listen_reward);
      take(t, "discount", cfg.domain.tiger.discount);
    }
  }
  if (j.contains("planner")) {
    const auto& p = j["planner"];
    if (p.contains("algorithm")) {
      cfg.planner.algorithm = parse_algorithm(p["algorithm"].get<std::string>());
    }
    take(p, "c", cfg.planner.exploration_c);
    take(p, "e", cfg.planner.entropy_e);
    take(p, "epsilon", cfg.planner.epsilon);
    take(p, "k_threshold", cfg.planner.k_threshold);
    if (p.contains("entropy_combine")) {
      const auto mode = p["entropy_combine"].get<std::string>();
      if (mode != "sum" && mode != "max") throw std::invalid_argument("entropy_combine: sum|max");
      cfg.planner.entropy_combine = mode == "max" ? EntropyCombine::max : EntropyCombine::sum;
    }
    take(p, "simulations", cfg.planner.simulations);
    take(p, "initial_particles", cfg.planner.initial_particles);
    take_optional(p, "gamma", cfg.planner.gamma);
    take_optional(p, "time_budget_ms", cfg.planner.time_budget_ms);
  }
  take(j, "episodes", cfg.episodes);
  take(j, "max_steps", cfg.max_steps);
  take(j, "seed", cfg.base_seed);
  take(j, "out", cfg.out);
  take(j, "threads", cfg.threads);
}

Domain make_domain(const DomainSpec& spec) {
  Domain d;
  if (spec.name == "tiger") {
    d.model = std::make_shared<const PomdpModel>(tiger::tiger_model(spec.tiger));
  } else if (spec.name == "hallway") {
    auto h = hallway::make_long_hallway(spec.k1, spec.k2, spec.start);
    d.layout = std::move(h.layout);
    d.model = std::make_shared<const PomdpModel>(std::move(h.model));
  } else {
    throw std::invalid_argument("unknown domain '" + spec.name + "' (expected hallway or tiger)");
  }
  return d;
}

PlannerAgent::PlannerAgent(const PomdpModel& model, PlannerConfig cfg)
    : model_(model), cfg_(cfg) {}

void PlannerAgent::begin_episode(std::uint64_t seed) {
  seed_ = seed;
  PlannerConfig cfg = cfg_;
  cfg.seed = seed;
  planner_ = std::make_unique<Planner>(model_, cfg);
}

ActionId PlannerAgent::act(int step) {
  planner_->reseed(derive_rng(seed_, kPlannerStream, static_cast<std::uint64_t>(step)));
  return planner_->search().action;
}

void PlannerAgent::observe(ActionId a, ObsId z, bool terminal) {
  planner_->advance_root(a, z, terminal);
}

ScriptedAgent make_optimal_hallway_agent(const hallway::HallwayLayout& layout,
                                         hallway::StartVariant start) {
  const auto prefix = hallway::optimal_plan(layout, start, hallway::Signal::left).size() -
                      static_cast<std::size_t>(layout.k1) - 7;
  return ScriptedAgent([layout, start, prefix](const std::vector<ObsId>& history) {
    hallway::Signal seen = hallway::Signal::left;
    if (history.size() >= prefix) seen = hallway::decode_observation(history[prefix - 1]).signal;
    const auto plan = hallway::optimal_plan(layout, start, seen);
    return history.size() < plan.size() ? plan[history.size()] : ActionId{hallway::kWait};
  });
}

EpisodeResult run_episode(const PomdpModel& model, Agent& agent, std::uint64_t seed,
                          int max_steps) {
  EpisodeResult result;
  result.seed = seed;
  Rng env = derive_rng(seed, kEnvironmentStream);
  StateId s = model.sample_initial(env);
  agent.begin_episode(seed);
  bool done = model.is_terminal(s);
  while (!done && result.steps < max_steps) {
    const ActionId a = agent.act(result.steps);
    const StepOutcome out = model.step(s, a, env);
    result.actions.push_back(a);
    result.observations.push_back(out.obs);
    result.rewards.push_back(out.reward);
    ++result.steps;
    done = out.done;
    if (done) result.reached_goal = out.reward > 0.0;
    agent.observe(a, out.obs, done);
    s = out.next;
  }
  result.hit_step_cap = !done;
  result.discounted = discounted_return(result.rewards, model.discount());
  for (double r : result.rewards) result.cumulative += r;
  return result;
}

BatchStats compute_stats(const std::vector<EpisodeResult>& rows) {
  BatchStats st;
  st.episodes = rows.size();
  double sum_d = 0.0, sum_c = 0.0, sum_steps = 0.0;
  std::uint64_t goals = 0;
  for (const auto& r : rows) {
    if (r.error) {
      ++st.errors;
      continue;
    }
    ++st.completed;
    sum_d += r.discounted;
    sum_c += r.cumulative;
    sum_steps += r.steps;
    goals += r.reached_goal ? 1 : 0;
  }
  if (st.completed == 0) return st;
  const double n = static_cast<double>(st.completed);
  st.mean_discounted = sum_d / n;
  st.mean_cumulative = sum_c / n;
  st.mean_steps = sum_steps / n;
  st.success_rate = static_cast<double>(goals) / n;
  if (st.completed > 1) {
    double var_d = 0.0, var_c = 0.0;
    for (const auto& r : rows) {
      if (r.error) continue;
      var_d += (r.discounted - st.mean_discounted) * (r.discounted - st.mean_discounted);
      var_c += (r.cumulative - st.mean_cumulative) * (r.cumulative - st.mean_cumulative);
    }
    st.stddev_discounted = std::sqrt(var_d / (n - 1.0));
    st.stddev_cumulative = std::sqrt(var_c / (n - 1.0));
  }
  return st;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

BatchResult run_batch(const RunConfig& cfg) {
  if (cfg.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  const Domain domain = make_domain(cfg.domain);
  BatchResult out;
  out.rows.resize(cfg.episodes);
  parallel_for(cfg.episodes, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = cfg.base_seed + i;
    try {
      PlannerAgent agent(*domain.model, cfg.planner);
      EpisodeResult r = run_episode(*domain.model, agent, seed, cfg.max_steps);
      r.actions.clear();
      r.observations.clear();
      r.rewards.clear();
      out.rows[i] = std::move(r);
    } catch (const std::exception& ex) {
      EpisodeResult r;
      r.seed = seed;
      r.error = true;
      r.error_message = ex.what();
      out.rows[i] = std::move(r);
    }
  });
  out.stats = compute_stats(out.rows);
  if (!cfg.out.empty()) write_results(out.rows, out.stats, cfg, cfg.out);
  return out;
}

std::string summary_path(const std::string& csv_path) { return csv_path + ".summary.json"; }

namespace {

nlohmann::json stats_json(const BatchStats& st) {
  return {{"episodes", st.episodes},
          {"completed", st.completed},
          {"errors", st.errors},
          {"mean_discounted", st.mean_discounted},
          {"stddev_discounted", st.stddev_discounted},
          {"mean_cumulative", st.mean_cumulative},
          {"stddev_cumulative", st.stddev_cumulative},
          {"success_rate", st.success_rate},
          {"mean_steps", st.mean_steps}};
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  return os;
}

}  // namespace

void write_results(const std::vector<EpisodeResult>& rows, const BatchStats& stats,
                   const RunConfig& cfg, const std::string& path) {
  {
    auto os = open_for_write(path);
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
      if (r.error) {
        // Error rows carry no returns and are skipped by compute_stats.
        os << r.seed << ',' << r.steps << ",nan,nan,error\n";
        continue;
      }
      os << r.seed << ',' << r.steps << ',' << format_double(r.discounted) << ','
         << format_double(r.cumulative) << ',' << (r.reached_goal ? 1 : 0) << '\n';
    }
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
  }
  nlohmann::json summary;
  summary["stats"] = stats_json(stats);
  summary["config"] = to_json(cfg);
  summary["csv"] = path;
  summary["seed_derivation"] = "episode i uses seed = base_seed + i";
  auto os = open_for_write(summary_path(path));
  os << summary.dump(2) << '\n';
  if (!os) throw std::runtime_error("failed writing '" + summary_path(path) + "'");
}

std::vector<EpisodeResult> read_results(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) {
    throw std::runtime_error("'" + path + "' does not start with the expected CSV header");
  }
  std::vector<EpisodeResult> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 5) throw std::runtime_error("malformed row in '" + path + "': " + line);
    EpisodeResult r;
    r.seed = std::stoull(cells[0]);
    r.steps = std::stoi(cells[1]);
    if (cells[4] == "error") {
      r.error = true;
    } else {
      r.discounted = std::strtod(cells[2].c_str(), nullptr);
      r.cumulative = std::strtod(cells[3].c_str(), nullptr);
      r.reached_goal = cells[4] == "1";
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<GridRow> grid_search(const RunConfig& base, const std::vector<double>& c_grid,
                                 const std::vector<double>& e_grid,
                                 std::uint64_t episodes_per_cell) {
  if (c_grid.empty()) throw std::invalid_argument("grid search needs at least one c value");
  std::vector<double> es = e_grid;
  if (base.planner.algorithm == Algorithm::pomcp || es.empty()) es = {0.0};
  std::vector<GridRow> rows;
  for (double c : c_grid) {
    for (double e : es) {
      RunConfig cfg = base;
      cfg.out.clear();
      cfg.episodes = episodes_per_cell;
      cfg.planner.exploration_c = c;
      cfg.planner.entropy_e = base.planner.algorithm == Algorithm::pomcp ? 0.0 : e;
      rows.push_back({c, cfg.planner.entropy_e, run_batch(cfg).stats});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GridRow& x, const GridRow& y) {
    return x.stats.mean_discounted > y.stats.mean_discounted;
  });
  return rows;
}

void write_grid(const std::vector<GridRow>& rows, const RunConfig& base, const std::string& path) {
  {
    auto os = open_for_write(path);
    os << "rank,c,e,episodes,mean_discounted,stddev_discounted,mean_cumulative,"
          "stddev_cumulative,success_rate,mean_steps\n";
    int rank = 1;
    for (const auto& r : rows) {
      const auto& s = r.stats;
      os << rank++ << ',' << format_double(r.c) << ',' << format_double(r.e) << ','
         << s.completed << ',' << format_double(s.mean_discounted) << ','
         << format_double(s.stddev_discounted) << ',' << format_double(s.mean_cumulative) << ','
         << format_double(s.stddev_cumulative) << ',' << format_double(s.success_rate) << ','
         << format_double(s.mean_steps) << '\n';
    }
  }
  nlohmann::json summary;
  summary["config"] = to_json(base);
  auto os = open_for_write(summary_path(path));
  os << summary.dump(2) << '\n';
}

}  // namespace pomcpe
