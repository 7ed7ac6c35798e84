#include "pomcpe/tiger.hpp"

namespace pomcpe::tiger {

PomdpModel tiger_model(const TigerParams& p) {
  if (!(p.listen_accuracy > 0.5 && p.listen_accuracy <= 1.0)) {
    throw ModelError("listen accuracy must lie in (0.5, 1]");
  }
  PomdpModel m(2, 3, 2, p.discount);
  m.set_state_name(kTigerLeft, "tiger-left");
  m.set_state_name(kTigerRight, "tiger-right");
  m.set_action_name(kListen, "listen");
  m.set_action_name(kOpenLeft, "open-left");
  m.set_action_name(kOpenRight, "open-right");
  m.set_observation_name(kHearLeft, "hear-left");
  m.set_observation_name(kHearRight, "hear-right");

  const double acc = p.listen_accuracy;
  for (StateId s : {kTigerLeft, kTigerRight}) {
    for (ActionId a : {kListen, kOpenLeft, kOpenRight}) m.set_transition(s, a, {{s, 1.0}});
    const ObsId correct = s == kTigerLeft ? kHearLeft : kHearRight;
    m.set_observation(s, kListen, {{correct, acc}, {1 - correct, 1.0 - acc}});
    m.set_observation(s, kOpenLeft, {{kHearLeft, 0.5}, {kHearRight, 0.5}});
    m.set_observation(s, kOpenRight, {{kHearLeft, 0.5}, {kHearRight, 0.5}});
    m.set_reward(s, kListen, p.listen_reward);
    m.set_terminating(s, kOpenLeft);
    m.set_terminating(s, kOpenRight);
  }
  m.set_reward(kTigerLeft, kOpenLeft, p.tiger_penalty);
  m.set_reward(kTigerLeft, kOpenRight, p.gold_reward);
  m.set_reward(kTigerRight, kOpenLeft, p.gold_reward);
  m.set_reward(kTigerRight, kOpenRight, p.tiger_penalty);
  m.set_initial({{kTigerLeft, 0.5}, {kTigerRight, 0.5}});
  m.finalize();
  return m;
}

}  // namespace pomcpe::tiger
