// Command-line front end: run, gridsearch, validate, dump-domain.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pomcpe/harness.hpp"
#include "pomcpe/validate.hpp"

using namespace pomcpe;

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

// Flags shared by run and gridsearch. Values land in `cfg` only when given,
// so a --config file can be loaded first and overridden afterwards.
struct RunFlags {
  std::string config_file;
  std::optional<std::string> domain, start, planner, combine, out;
  std::optional<int> k1, k2, max_steps;
  std::optional<double> c, e, epsilon, gamma, time_ms;
  std::optional<std::uint64_t> k_threshold, sims, episodes, seed, particles;
  std::optional<unsigned> threads;

  void attach(CLI::App* app, bool with_ce) {
    app->add_option("--config", config_file, "JSON file mirroring the run configuration");
    app->add_option("--domain", domain, "hallway | tiger");
    app->add_option("--k1", k1, "hallway: distance from signal to goal junction");
    app->add_option("--k2", k2, "hallway: distance from start to side corridor");
    app->add_option("--start", start, "hallway start: standard | modified");
    app->add_option("--planner", planner, "pomcp | pomcpe");
    if (with_ce) {
      app->add_option("--c", c, "UCB1 exploration constant");
      app->add_option("--e", e, "entropy bonus weight");
    }
    app->add_option("--k-threshold", k_threshold, "particles before entropy back-propagation");
    app->add_option("--entropy-combine", combine, "sum | max");
    app->add_option("--epsilon", epsilon, "depth cutoff gamma^depth < epsilon");
    app->add_option("--gamma", gamma, "search discount (defaults to the model's)");
    app->add_option("--sims", sims, "simulations per step");
    app->add_option("--time-ms", time_ms, "wall-clock budget per step instead of --sims");
    app->add_option("--particles", particles, "initial / reinvigorated particle count");
    app->add_option("--episodes", episodes, "episodes per batch");
    app->add_option("--max-steps", max_steps, "step cap per episode");
    app->add_option("--seed", seed, "base seed; episode i uses seed + i");
    app->add_option("--threads", threads, "worker threads (0 = all cores)");
    app->add_option("--out", out, "output CSV path");
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_file.empty()) {
      std::ifstream is(config_file);
      if (!is) throw std::runtime_error("cannot open config '" + config_file + "'");
      merge_json(cfg, nlohmann::json::parse(is));
    }
    if (domain) cfg.domain.name = *domain;
    if (k1) cfg.domain.k1 = *k1;
    if (k2) cfg.domain.k2 = *k2;
    if (start) cfg.domain.start = parse_start(*start);
    if (planner) cfg.planner.algorithm = parse_algorithm(*planner);
    if (c) cfg.planner.exploration_c = *c;
    if (e) cfg.planner.entropy_e = *e;
    if (k_threshold) cfg.planner.k_threshold = *k_threshold;
    if (combine) {
      if (*combine != "sum" && *combine != "max") throw std::invalid_argument("--entropy-combine: sum|max");
      cfg.planner.entropy_combine = *combine == "max" ? EntropyCombine::max : EntropyCombine::sum;
    }
    if (epsilon) cfg.planner.epsilon = *epsilon;
    if (gamma) cfg.planner.gamma = *gamma;
    if (sims) cfg.planner.simulations = *sims;
    if (time_ms) cfg.planner.time_budget_ms = *time_ms;
    if (particles) cfg.planner.initial_particles = *particles;
    if (episodes) cfg.episodes = *episodes;
    if (max_steps) cfg.max_steps = *max_steps;
    if (seed) cfg.base_seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out) cfg.out = *out;
    return cfg;
  }
};

void print_stats(const BatchStats& s) {
  std::cout << "episodes " << s.episodes << " (completed " << s.completed << ", errors " << s.errors
            << ")\n"
            << "discounted  mean " << s.mean_discounted << "  sd " << s.stddev_discounted << '\n'
            << "cumulative  mean " << s.mean_cumulative << "  sd " << s.stddev_cumulative << '\n'
            << "success rate " << s.success_rate << "  mean steps " << s.mean_steps << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"POMCP / POMCPe online planning experiments"};
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "run a batch of episodes and write per-episode CSV");
  run_flags.attach(run, true);

  RunFlags grid_flags;
  std::string c_grid = "50";
  std::string e_grid = "0";
  auto* grid = app.add_subcommand("gridsearch", "rank (c, e) cells by mean discounted return");
  grid_flags.attach(grid, false);
  grid->add_option("--c", c_grid, "comma-separated exploration constants");
  grid->add_option("--e", e_grid, "comma-separated entropy weights");

  bool inject_delete_room = false;
  bool inject_corrupt_entropy = false;
  auto* validate = app.add_subcommand("validate", "run the built-in oracle and layout checks");
  validate->add_flag("--inject-delete-room", inject_delete_room, "fault injection: drop a room");
  validate->add_flag("--inject-corrupt-entropy", inject_corrupt_entropy,
                     "fault injection: corrupt a cached entropy");

  std::string dump_domain = "hallway";
  int dump_k1 = 1;
  int dump_k2 = 1;
  std::string dump_out;
  auto* dump = app.add_subcommand("dump-domain", "print the hallway map and adjacency listing");
  dump->add_option("--domain", dump_domain, "hallway");
  dump->add_option("--k1", dump_k1);
  dump->add_option("--k2", dump_k2);
  dump->add_option("--out", dump_out, "output file (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const RunConfig cfg = run_flags.resolve();
      const BatchResult result = run_batch(cfg);
      print_stats(result.stats);
      if (!cfg.out.empty()) std::cout << "wrote " << cfg.out << " and " << summary_path(cfg.out) << '\n';
      return result.stats.errors == 0 ? 0 : 3;
    }
    if (*grid) {
      RunConfig cfg = grid_flags.resolve();
      const auto rows = grid_search(cfg, parse_list(c_grid), parse_list(e_grid), cfg.episodes);
      std::cout << "rank c e mean_discounted mean_cumulative success_rate\n";
      int rank = 1;
      for (const auto& r : rows) {
        std::cout << rank++ << ' ' << r.c << ' ' << r.e << ' ' << r.stats.mean_discounted << ' '
                  << r.stats.mean_cumulative << ' ' << r.stats.success_rate << '\n';
      }
      if (!cfg.out.empty()) write_grid(rows, cfg, cfg.out);
      return 0;
    }
    if (*validate) {
      const auto report = run_validation({inject_delete_room, inject_corrupt_entropy});
      std::cout << report.to_text();
      return report.ok() ? 0 : 1;
    }
    if (*dump) {
      if (dump_domain != "hallway") throw std::invalid_argument("dump-domain supports only hallway");
      const auto layout = hallway::HallwayLayout::build(dump_k1, dump_k2);
      std::ostringstream os;
      os << hallway::render_map(layout) << '\n' << hallway::adjacency_listing(layout);
      if (dump_out.empty()) {
        std::cout << os.str();
      } else {
        std::ofstream file(dump_out);
        if (!file) throw std::runtime_error("cannot open '" + dump_out + "' for writing");
        file << os.str();
      }
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
