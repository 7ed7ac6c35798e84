#include "pomcpe/hallway.hpp"

#include <deque>
#include <map>
#include <sstream>

namespace pomcpe::hallway {

namespace {

constexpr int kHallwayOffset = 6;
constexpr std::array<int, 4> kDx{0, 1, 0, -1};
constexpr std::array<int, 4> kDy{1, 0, -1, 0};

Heading turn(Heading h, int quarter_turns) { return static_cast<Heading>((h + quarter_turns + 4) % 4); }

}  // namespace

const char* to_string(RoomKind kind) {
  switch (kind) {
    case RoomKind::ordinary: return "ordinary";
    case RoomKind::junction: return "junction";
    case RoomKind::signal: return "signal";
    case RoomKind::star: return "star";
    case RoomKind::trap: return "trap";
  }
  return "?";
}

const char* to_string(Heading h) {
  static constexpr const char* kNames[] = {"N", "E", "S", "W"};
  return kNames[h];
}

HallwayLayout HallwayLayout::build(int k1, int k2) {
  if (k1 < 0 || k2 < 0) throw LayoutInvalid("k1 and k2 must be nonnegative");
  HallwayLayout layout;
  layout.k1 = k1;
  layout.k2 = k2;

  for (int hw = 0; hw < 2; ++hw) {
    const int x0 = hw * kHallwayOffset;
    const int col = x0 + 2;
    auto add = [&](std::string label, int x, int y, RoomKind kind) {
      Room r;
      r.id = static_cast<int>(layout.rooms.size());
      r.label = std::move(label);
      r.hallway = hw;
      r.x = x;
      r.y = y;
      r.kind = kind;
      layout.rooms.push_back(std::move(r));
    };
    int y = 0;
    add("c", col, y++, RoomKind::ordinary);
    add("a", col, y++, RoomKind::ordinary);
    for (int i = 1; i <= k2; ++i) add("b" + std::to_string(i), col, y++, RoomKind::ordinary);
    const int yd = y;
    add("d", col, y++, RoomKind::junction);
    add("e", col + 1, yd, RoomKind::ordinary);
    add("f", col + 2, yd, RoomKind::signal);
    for (int i = 1; i <= k1; ++i) add("g" + std::to_string(i), col, y++, RoomKind::ordinary);
    add("h", col, y++, RoomKind::ordinary);
    const int yt = y;
    add("t", col, yt, RoomKind::junction);
    add("tw", col - 1, yt, hw == 0 ? RoomKind::star : RoomKind::trap);
    add("te", col + 1, yt, hw == 0 ? RoomKind::trap : RoomKind::star);
  }

  std::map<std::pair<int, int>, int> at;
  for (const auto& r : layout.rooms) at[{r.x, r.y}] = r.id;
  for (auto& r : layout.rooms) {
    for (int h = 0; h < 4; ++h) {
      auto it = at.find({r.x + kDx[h], r.y + kDy[h]});
      r.neighbors[h] = it == at.end() ? kNoRoom : it->second;
    }
  }
  return layout;
}

int HallwayLayout::find(int hallway, const std::string& label) const {
  for (const auto& r : rooms) {
    if (r.hallway == hallway && r.label == label) return r.id;
  }
  throw LayoutInvalid("no room '" + label + "' in hallway " + std::to_string(hallway));
}

bool HallwayLayout::is_terminal(int room) const {
  const RoomKind k = rooms[room].kind;
  return k == RoomKind::star || k == RoomKind::trap;
}

Signal HallwayLayout::signal(int room) const {
  if (rooms[room].kind != RoomKind::signal) return Signal::none;
  return rooms[room].hallway == 0 ? Signal::left : Signal::right;
}

Position HallwayLayout::move(Position p, ActionId a) const {
  switch (a) {
    case kTurnLeft: return {p.room, turn(p.heading, -1)};
    case kTurnRight: return {p.room, turn(p.heading, 1)};
    case kForward:
    case kBackward: {
      const Heading dir = a == kForward ? p.heading : turn(p.heading, 2);
      const int next = rooms[p.room].neighbors[dir];
      return next == kNoRoom ? p : Position{next, p.heading};
    }
    default: return p;
  }
}

double HallwayLayout::reward(Position p, ActionId a) const {
  const Position next = move(p, a);
  if (next.room != p.room) {
    if (rooms[next.room].kind == RoomKind::star) return kGoalReward;
    if (rooms[next.room].kind == RoomKind::trap) return kTrapReward;
  }
  return kStepReward;
}

ObsId encode_observation(const ObservationBits& b) {
  const int walls = (((b.wall_front ? 1 : 0) * 2 + (b.wall_back ? 1 : 0)) * 2 +
                     (b.wall_left ? 1 : 0)) * 2 + (b.wall_right ? 1 : 0);
  return walls * 3 + static_cast<int>(b.signal);
}

ObservationBits decode_observation(ObsId z) {
  ObservationBits b{};
  b.signal = static_cast<Signal>(z % 3);
  int walls = z / 3;
  b.wall_right = walls % 2 != 0;
  walls /= 2;
  b.wall_left = walls % 2 != 0;
  walls /= 2;
  b.wall_back = walls % 2 != 0;
  walls /= 2;
  b.wall_front = walls % 2 != 0;
  return b;
}

ObsId HallwayLayout::observe(Position p) const {
  const auto& n = rooms[p.room].neighbors;
  ObservationBits bits;
  bits.wall_front = n[p.heading] == kNoRoom;
  bits.wall_back = n[turn(p.heading, 2)] == kNoRoom;
  bits.wall_left = n[turn(p.heading, -1)] == kNoRoom;
  bits.wall_right = n[turn(p.heading, 1)] == kNoRoom;
  bits.signal = signal(p.room);
  return encode_observation(bits);
}

PomdpModel build_model(const HallwayLayout& layout, StartVariant start) {
  PomdpModel m(layout.num_states(), kNumActions, kNumObservations, kDiscount);
  static constexpr const char* kActionNames[] = {"wait", "forward", "backward", "turn-left",
                                                 "turn-right"};
  for (ActionId a = 0; a < kNumActions; ++a) m.set_action_name(a, kActionNames[a]);
  for (ObsId z = 0; z < kNumObservations; ++z) {
    const auto b = decode_observation(z);
    std::string name;
    name += b.wall_front ? 'F' : '-';
    name += b.wall_back ? 'B' : '-';
    name += b.wall_left ? 'L' : '-';
    name += b.wall_right ? 'R' : '-';
    static constexpr const char* kSignals[] = {"", "/left", "/right"};
    name += kSignals[static_cast<int>(b.signal)];
    m.set_observation_name(z, name);
  }

  for (StateId s = 0; s < layout.num_states(); ++s) {
    const Position p = layout.position(s);
    const Room& room = layout.rooms[p.room];
    m.set_state_name(s, std::string(room.hallway == 0 ? "L:" : "R:") + room.label + ":" +
                            to_string(p.heading));
    const bool terminal = layout.is_terminal(p.room);
    m.set_terminal(s, terminal);
    for (ActionId a = 0; a < kNumActions; ++a) {
      const Position next = terminal ? p : layout.move(p, a);
      m.set_transition(s, a, {{layout.state(next), 1.0}});
      m.set_observation(s, a, {{layout.observe(p), 1.0}});
      m.set_reward(s, a, terminal ? 0.0 : layout.reward(p, a));
    }
  }

  const char* label = start == StartVariant::standard ? "a" : "e";
  const Heading heading = start == StartVariant::standard ? kNorth : kWest;
  m.set_initial({{layout.state({layout.find(0, label), heading}), 0.5},
                 {layout.state({layout.find(1, label), heading}), 0.5}});
  m.finalize();
  return m;
}

LongHallway make_long_hallway(int k1, int k2, StartVariant start) {
  HallwayLayout layout = HallwayLayout::build(k1, k2);
  PomdpModel model = build_model(layout, start);
  return LongHallway{std::move(layout), std::move(model)};
}

PomdpModel long_hallway_model(int k1, int k2) {
  return make_long_hallway(k1, k2, StartVariant::standard).model;
}

PomdpModel modified_start_model(int k1, int k2) {
  return make_long_hallway(k1, k2, StartVariant::modified).model;
}

std::optional<int> shortest_path(const HallwayLayout& layout, Position from,
                                 const std::vector<Position>& targets) {
  std::vector<int> dist(layout.num_states(), -1);
  std::deque<Position> queue{from};
  dist[layout.state(from)] = 0;
  auto is_target = [&](Position p) {
    for (const auto& t : targets) {
      if (t == p) return true;
    }
    return false;
  };
  while (!queue.empty()) {
    const Position p = queue.front();
    queue.pop_front();
    const int d = dist[layout.state(p)];
    if (is_target(p)) return d;
    if (layout.is_terminal(p.room)) continue;
    for (ActionId a = 0; a < kNumActions; ++a) {
      const Position q = layout.move(p, a);
      if (dist[layout.state(q)] < 0) {
        dist[layout.state(q)] = d + 1;
        queue.push_back(q);
      }
    }
  }
  return std::nullopt;
}

namespace {

void require(bool ok, const std::string& what, LayoutReport& report) {
  if (!ok) throw LayoutInvalid("layout check failed: " + what);
  report.checks.push_back(what);
}

}  // namespace

LayoutReport validate_layout(const HallwayLayout& layout) {
  LayoutReport report;
  const int k1 = layout.k1;
  const int k2 = layout.k2;
  report.rooms = static_cast<int>(layout.rooms.size());
  report.states = layout.num_states();
  report.observations = kNumObservations;

  const int expected_rooms = 18 + 2 * k1 + 2 * k2;
  require(report.rooms == expected_rooms,
          "room count " + std::to_string(report.rooms) + " == 18 + 2k1 + 2k2 = " +
              std::to_string(expected_rooms),
          report);
  require(report.states == expected_rooms * 4, "state count == rooms x 4", report);

  for (std::size_t i = 0; i < layout.rooms.size(); ++i) {
    const Room& r = layout.rooms[i];
    require(r.id == static_cast<int>(i), "room ids are dense", report);
    for (int h = 0; h < 4; ++h) {
      const int n = r.neighbors[h];
      require(n == kNoRoom || (n >= 0 && n < report.rooms), "neighbor ids in range", report);
      if (n != kNoRoom) {
        require(layout.rooms[n].neighbors[(h + 2) % 4] == r.id, "adjacency is symmetric", report);
      }
    }
  }

  int stars = 0;
  int traps = 0;
  for (const auto& r : layout.rooms) {
    stars += r.kind == RoomKind::star;
    traps += r.kind == RoomKind::trap;
  }
  report.goal_states = stars * 4;
  report.trap_states = traps * 4;
  require(report.goal_states == 8, "8 goal states", report);
  require(report.trap_states == 8, "8 trap states", report);

  // Observation encoding covers exactly 48 symbols.
  bool encoding_ok = true;
  for (ObsId z = 0; z < kNumObservations; ++z) {
    encoding_ok = encoding_ok && encode_observation(decode_observation(z)) == z;
  }
  require(encoding_ok, "48 observations encode bijectively", report);

  const int half = layout.rooms_per_hallway();
  bool mirror = true;
  for (int i = 0; i < half && mirror; ++i) {
    const Room& l = layout.rooms[i];
    const Room& r = layout.rooms[i + half];
    mirror = l.hallway == 0 && r.hallway == 1 && l.label == r.label;
    for (int h = 0; h < 4 && mirror; ++h) {
      const int ln = l.neighbors[h];
      const int rn = r.neighbors[h];
      mirror = (ln == kNoRoom && rn == kNoRoom) || (ln != kNoRoom && rn == ln + half);
    }
    const bool swapped = (l.kind == RoomKind::star && r.kind == RoomKind::trap) ||
                         (l.kind == RoomKind::trap && r.kind == RoomKind::star);
    mirror = mirror && (l.kind == r.kind || swapped);
  }
  require(mirror, "hallways are identical up to the star/trap swap", report);

  for (int hw = 0; hw < 2; ++hw) {
    std::vector<Position> goals;
    for (const auto& r : layout.rooms) {
      if (r.hallway == hw && r.kind == RoomKind::star) {
        for (int h = 0; h < 4; ++h) goals.push_back({r.id, static_cast<Heading>(h)});
      }
    }
    const auto d = shortest_path(layout, {layout.find(hw, "f"), kWest}, goals);
    report.signal_to_star[hw] = d.value_or(-1);
    require(d && *d == 7 + k1,
            "signal room to star takes 7 + k1 = " + std::to_string(7 + k1) + " actions (found " +
                std::to_string(d.value_or(-1)) + ")",
            report);
  }
  return report;
}

std::string render_map(const HallwayLayout& layout) {
  int max_x = 0;
  int max_y = 0;
  for (const auto& r : layout.rooms) {
    max_x = std::max(max_x, r.x);
    max_y = std::max(max_y, r.y);
  }
  std::map<std::pair<int, int>, const Room*> at;
  for (const auto& r : layout.rooms) at[{r.x, r.y}] = &r;
  std::ostringstream os;
  os << "Long Hallway k1=" << layout.k1 << " k2=" << layout.k2 << " (north is up; * star, # trap, "
     << "! signal)\n";
  for (int y = max_y; y >= 0; --y) {
    for (int x = 0; x <= max_x; ++x) {
      auto it = at.find({x, y});
      if (it == at.end()) {
        os << "    ";
        continue;
      }
      const Room& r = *it->second;
      std::string cell = r.label;
      if (r.kind == RoomKind::star) cell = "*";
      if (r.kind == RoomKind::trap) cell = "#";
      if (r.kind == RoomKind::signal) cell = std::string("!") + (r.hallway == 0 ? "L" : "R");
      cell.resize(3, ' ');
      os << '[' << cell;
    }
    os << '\n';
  }
  return os.str();
}

std::string adjacency_listing(const HallwayLayout& layout) {
  std::ostringstream os;
  os << "# id label hallway x y N E S W kind\n";
  for (const auto& r : layout.rooms) {
    os << r.id << ' ' << r.label << ' ' << (r.hallway == 0 ? "left" : "right") << ' ' << r.x
       << ' ' << r.y;
    for (int n : r.neighbors) {
      os << ' ';
      if (n == kNoRoom) {
        os << "WALL";
      } else {
        os << n;
      }
    }
    os << ' ' << to_string(r.kind) << '\n';
  }
  return os.str();
}

std::vector<ActionId> optimal_plan(const HallwayLayout& layout, StartVariant start, Signal signal) {
  std::vector<ActionId> plan;
  if (start == StartVariant::standard) {
    // Up to d, face west, back into the side corridor until f.
    plan.insert(plan.end(), static_cast<std::size_t>(layout.k2) + 1, kForward);
    plan.push_back(kTurnLeft);
    plan.push_back(kBackward);
    plan.push_back(kBackward);
  } else {
    plan.push_back(kBackward);
  }
  // Facing west in f: back to d, north to t, into the starred arm.
  plan.push_back(kForward);
  plan.push_back(kForward);
  plan.push_back(kTurnRight);
  plan.insert(plan.end(), static_cast<std::size_t>(layout.k1) + 2, kForward);
  plan.push_back(signal == Signal::left ? kTurnLeft : kTurnRight);
  plan.push_back(kForward);
  return plan;
}

}  // namespace pomcpe::hallway
