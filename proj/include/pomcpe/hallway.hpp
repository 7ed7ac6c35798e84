#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pomcpe/model.hpp"

namespace pomcpe::hallway {

enum Heading : int { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

enum Action : ActionId { kWait = 0, kForward = 1, kBackward = 2, kTurnLeft = 3, kTurnRight = 4 };
inline constexpr int kNumActions = 5;

enum class RoomKind { ordinary, junction, signal, star, trap };
enum class Signal : int { none = 0, left = 1, right = 2 };
enum class StartVariant { standard, modified };

/// 2 (front) x 2 (back) x 2 (left) x 2 (right) wall bits x 3 signals.
inline constexpr int kNumObservations = 48;
inline constexpr int kNoRoom = -1;
inline constexpr double kGoalReward = 100.0;
inline constexpr double kTrapReward = -100.0;
inline constexpr double kStepReward = -1.0;
inline constexpr double kDiscount = 0.95;

struct Room {
  int id = 0;
  std::string label;
  /// 0 = left hallway, 1 = right hallway.
  int hallway = 0;
  int x = 0;
  int y = 0;
  /// Neighbor room per compass heading, kNoRoom for a wall.
  std::array<int, 4> neighbors{kNoRoom, kNoRoom, kNoRoom, kNoRoom};
  RoomKind kind = RoomKind::ordinary;
};

struct Position {
  int room;
  Heading heading;
  bool operator==(const Position&) const = default;
};

/// Two copies of one hallway, differing only in which top arm holds the star
/// and in the signal reported at the side-corridor dead end.
///
/// Per hallway, bottom to top along a vertical corridor:
///   c (dead end), a (start), b1..b{k2}, d (junction), g1..g{k1}, h, t (junction)
/// d opens east into e and then f, the dead end that emits the signal. t
/// opens west and east into the two arm rooms. The left hallway has its star
/// on the west arm and reports the left signal; the right hallway mirrors
/// both.
struct HallwayLayout {
  int k1 = 0;
  int k2 = 0;
  std::vector<Room> rooms;

  static HallwayLayout build(int k1, int k2);

  int rooms_per_hallway() const { return static_cast<int>(rooms.size()) / 2; }
  int num_states() const { return static_cast<int>(rooms.size()) * 4; }
  /// Room id by hallway and label; throws LayoutInvalid if absent.
  int find(int hallway, const std::string& label) const;

  StateId state(Position p) const { return p.room * 4 + p.heading; }
  Position position(StateId s) const { return {s / 4, static_cast<Heading>(s % 4)}; }

  /// Deterministic effect of an action; moves into walls stay put.
  Position move(Position p, ActionId a) const;
  double reward(Position p, ActionId a) const;
  bool is_terminal(int room) const;
  ObsId observe(Position p) const;
  Signal signal(int room) const;
};

/// Decomposition of an observation index.
struct ObservationBits {
  bool wall_front;
  bool wall_back;
  bool wall_left;
  bool wall_right;
  Signal signal;
};
ObsId encode_observation(const ObservationBits& bits);
ObservationBits decode_observation(ObsId z);

struct LongHallway {
  HallwayLayout layout;
  PomdpModel model;
};

/// Deterministic POMDP over the layout. The start is facing north in room a
/// (standard) or facing west in room e (modified), uniformly over the two
/// hallways.
LongHallway make_long_hallway(int k1, int k2, StartVariant start = StartVariant::standard);
PomdpModel build_model(const HallwayLayout& layout, StartVariant start);
PomdpModel long_hallway_model(int k1, int k2);
PomdpModel modified_start_model(int k1, int k2);

/// Fewest actions from `from` to any position in `targets`, following the
/// deterministic moves; nullopt when unreachable.
std::optional<int> shortest_path(const HallwayLayout& layout, Position from,
                                 const std::vector<Position>& targets);

struct LayoutReport {
  int rooms = 0;
  int states = 0;
  int observations = 0;
  int goal_states = 0;
  int trap_states = 0;
  /// BFS distance from facing west in room f to the star, per hallway.
  std::array<int, 2> signal_to_star{0, 0};
  std::vector<std::string> checks;
};

/// Structural self-check: room, state, observation, goal and trap counts,
/// mirror symmetry between the hallways, and the 7 + k1 distance from the
/// signal room to the star. Throws LayoutInvalid naming the failed check.
LayoutReport validate_layout(const HallwayLayout& layout);

/// Character map of both hallways.
std::string render_map(const HallwayLayout& layout);
/// One line per room: id label hallway x y N E S W kind.
std::string adjacency_listing(const HallwayLayout& layout);

const char* to_string(RoomKind kind);
const char* to_string(Heading h);

/// Shortest full episode that first visits the signal room: the action
/// prefix that reaches f, then the route to the star chosen by the signal.
/// `signal` selects the branch taken after the prefix.
std::vector<ActionId> optimal_plan(const HallwayLayout& layout, StartVariant start, Signal signal);

}  // namespace pomcpe::hallway
