#include "pomcpe/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pomcpe {

namespace {

// x ln x with the 0 ln 0 = 0 convention.
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

double incremental_entropy(double entropy_n, std::uint64_t n, std::uint64_t prior_count) {
  const double c = static_cast<double>(prior_count);
  const double nn = static_cast<double>(n);
  // c (ln(c+1) - ln c) vanishes at c = 0.
  const double count_term = prior_count == 0 ? 0.0 : c * (std::log(c + 1.0) - std::log(c));
  const double bracket = count_term + std::log(c + 1.0) + xlogx(nn) - xlogx(nn + 1.0);
  return -bracket / (nn + 1.0) + entropy_n * nn / (nn + 1.0);
}

void ParticleFilter::add(StateId s) {
  auto& c = counts_[s];
  entropy_ = incremental_entropy(entropy_, particles_.size(), c);
  ++c;
  particles_.push_back(s);
  if (++since_refresh_ >= kRefreshInterval) refresh_entropy();
}

std::uint32_t ParticleFilter::count(StateId s) const {
  auto it = counts_.find(s);
  return it == counts_.end() ? 0 : it->second;
}

double ParticleFilter::full_entropy() const {
  if (particles_.empty()) throw EmptyFilter("entropy of an empty particle filter");
  const double n = static_cast<double>(particles_.size());
  double h = 0.0;
  for (const auto& [s, c] : counts_) {
    const double p = c / n;
    h -= p * std::log(p);
  }
  return h;
}

void ParticleFilter::refresh_entropy() {
  entropy_ = particles_.empty() ? 0.0 : full_entropy();
  since_refresh_ = 0;
}

StateId ParticleFilter::sample(Rng& rng) const {
  if (particles_.empty()) throw EmptyFilter("cannot sample from an empty particle filter");
  std::uniform_int_distribution<std::size_t> pick(0, particles_.size() - 1);
  return particles_[pick(rng)];
}

void reinvigorate(ParticleFilter& filter, const ParticleFilter& parent, const PomdpModel& m,
                  ActionId a, ObsId z, std::uint64_t target, Rng& rng,
                  std::uint64_t rejection_factor) {
  if (filter.size() >= target) return;

  std::vector<StateId> consistent;
  for (StateId s = 0; s < m.num_states(); ++s) {
    if (!m.is_terminal(s) && m.observation_prob(s, a, z) > 0.0) consistent.push_back(s);
  }
  if (consistent.empty()) {
    throw InconsistentObservation("no state emits observation " + std::to_string(z) +
                                  " under action " + std::to_string(a));
  }

  const std::uint64_t max_draws = rejection_factor * target;
  for (std::uint64_t draws = 0; draws < max_draws && filter.size() < target; ++draws) {
    const StateId s = parent.empty() ? m.sample_initial(rng) : parent.sample(rng);
    if (m.is_terminal(s) || m.terminates(s, a)) continue;
    const StepOutcome out = m.step(s, a, rng);
    if (out.obs == z && !out.done) filter.add(out.next);
  }
  if (filter.size() < target) {
    std::uniform_int_distribution<std::size_t> pick(0, consistent.size() - 1);
    while (filter.size() < target) filter.add(consistent[pick(rng)]);
  }
  filter.refresh_entropy();
}

ParticleFilter filter_from_probabilities(const std::vector<double>& probs, std::uint64_t n) {
  std::vector<std::uint64_t> alloc(probs.size(), 0);
  std::uint64_t used = 0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    alloc[s] = static_cast<std::uint64_t>(std::floor(probs[s] * static_cast<double>(n)));
    used += alloc[s];
  }
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return probs[x] > probs[y]; });
  const auto positive = static_cast<std::size_t>(
      std::count_if(probs.begin(), probs.end(), [](double p) { return p > 0.0; }));
  for (std::size_t i = 0; used < n && positive > 0; i = (i + 1) % positive) {
    ++alloc[order[i]];
    ++used;
  }
  ParticleFilter f;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    for (std::uint64_t k = 0; k < alloc[s]; ++k) f.add(static_cast<StateId>(s));
  }
  f.refresh_entropy();
  return f;
}

}  // namespace pomcpe
