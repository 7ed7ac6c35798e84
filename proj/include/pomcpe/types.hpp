#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pomcpe {

using StateId = std::int32_t;
using ActionId = std::int32_t;
using ObsId = std::int32_t;

/// Random engine used throughout. Every consumer receives it by reference
/// from the caller; nothing in the library owns a global engine.
using Rng = std::mt19937_64;

/// Builds an engine for (seed, stream, index). Streams separate the
/// environment from the planner; the index is the episode step for planner
/// streams. Derivation goes through std::seed_seq so it is reproducible.
Rng derive_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0);

inline constexpr std::uint64_t kEnvironmentStream = 1;
inline constexpr std::uint64_t kPlannerStream = 2;
inline constexpr std::uint64_t kInitStream = 3;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ImpossibleObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyFilter : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InconsistentObservation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LayoutInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pomcpe
