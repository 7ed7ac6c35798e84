#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "pomcpe/model.hpp"

namespace pomcpe {

/// Unweighted particle filter: a multiset of states whose relative counts
/// approximate a belief. Keeps its Shannon entropy (nats) cached and updates
/// it in O(1) per insertion with the incremental count formula
///
///   H(n+1) = -1/(n+1) * [ c (ln(c+1) - ln c) + ln(c+1) + n ln n - (n+1) ln(n+1) ]
///            + n H(n) / (n+1)
///
/// where c is the prior count of the inserted state and 0 ln 0 = 0. The
/// cache is rebuilt from the counts every kRefreshInterval insertions. An
/// empty filter has entropy 0.
class ParticleFilter {
 public:
  static constexpr std::uint64_t kRefreshInterval = std::uint64_t{1} << 16;

  ParticleFilter() = default;

  void add(StateId s);

  std::uint64_t size() const { return particles_.size(); }
  bool empty() const { return particles_.empty(); }
  std::uint32_t count(StateId s) const;
  std::size_t distinct() const { return counts_.size(); }
  double entropy() const { return entropy_; }

  /// -sum (c/n) ln (c/n) recomputed from the counts. Throws EmptyFilter.
  double full_entropy() const;

  /// Replaces the cached entropy with full_entropy() (0 when empty).
  void refresh_entropy();

  /// Returns s with probability count(s) / size(). Throws EmptyFilter.
  StateId sample(Rng& rng) const;

  const std::vector<StateId>& particles() const { return particles_; }
  const std::unordered_map<StateId, std::uint32_t>& counts() const { return counts_; }

  /// Overwrites the cached entropy without touching the counts.
  void corrupt_entropy_for_testing(double value) { entropy_ = value; }

 private:
  std::vector<StateId> particles_;
  std::unordered_map<StateId, std::uint32_t> counts_;
  double entropy_ = 0.0;
  std::uint64_t since_refresh_ = 0;
};

/// One O(1) step of the incremental entropy formula: entropy after adding a
/// particle to a state holding `prior_count` of the `n` particles.
double incremental_entropy(double entropy_n, std::uint64_t n, std::uint64_t prior_count);

/// Tops `filter` up to `target` particles consistent with having taken `a`
/// and observed `z`. States are drawn from `parent` (or the model's initial
/// distribution when `parent` is empty), pushed through the generative model,
/// and kept when the sampled observation equals z. After
/// rejection_factor * target draws without reaching the target it falls back
/// to uniform draws over non-terminal states s' with O(s', a, z) > 0.
/// The entropy is recomputed from scratch at the end.
///
/// Throws InconsistentObservation if no state can emit z under a.
void reinvigorate(ParticleFilter& filter, const ParticleFilter& parent, const PomdpModel& m,
                  ActionId a, ObsId z, std::uint64_t target, Rng& rng,
                  std::uint64_t rejection_factor = 100);

/// Filter with round(p * n) particles per state of `probs` (remainder goes to
/// the most likely states). Handy for seeding a root at a given belief.
ParticleFilter filter_from_probabilities(const std::vector<double>& probs, std::uint64_t n);

}  // namespace pomcpe
