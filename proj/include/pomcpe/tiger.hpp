#pragma once

#include "pomcpe/model.hpp"

namespace pomcpe::tiger {

inline constexpr StateId kTigerLeft = 0;
inline constexpr StateId kTigerRight = 1;

inline constexpr ActionId kListen = 0;
inline constexpr ActionId kOpenLeft = 1;
inline constexpr ActionId kOpenRight = 2;

inline constexpr ObsId kHearLeft = 0;
inline constexpr ObsId kHearRight = 1;

struct TigerParams {
  double listen_accuracy = 0.8;
  double tiger_penalty = -100.0;
  double gold_reward = 10.0;
  double listen_reward = -1.0;
  double discount = 0.95;
};

/// Two doors, a tiger behind one. Listening keeps the state and reports the
/// tiger's side with probability listen_accuracy; opening a door ends the
/// episode. Throws ModelError unless 0.5 < listen_accuracy <= 1.
PomdpModel tiger_model(const TigerParams& p = {});

}  // namespace pomcpe::tiger
