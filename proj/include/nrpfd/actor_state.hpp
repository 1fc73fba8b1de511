#pragma once

#include <array>
#include <optional>
#include <variant>

#include "nrpfd/types.hpp"

namespace nrpfd {

// Numeric values are fixed: the safety assertions compare mode against the
// literal 1 for PRIMARY.
enum class Mode : std::uint8_t {
  Waiting = 0,
  Primary = 1,
  Backup = 2,
  Failed = 3,
};

const char* mode_name(Mode m);

// A controller node (DCN). Field names follow the modeled state variables so
// traces and propositions read like the model they describe.
struct NodeState {
  ActorId id = -1;
  Mode mode = Mode::Waiting;
  ActorId primary = -1;  // believed primary; -1 when none
  std::array<ActorId, 2> nrp_candidates{-1, -1};
  int nrp_network = -1;  // -1 none, 0/1 selected, 2 = candidates exhausted
  ActorId nrp_switch_id = -1;
  std::array<int, 2> heartbeats_missed{0, 0};
  bool ping_pending = false;
  bool nrp_pending = true;
  bool become_primary_on_ping_response = false;
  bool init = true;
  // Heartbeat-suppression gate: counts periods served as primary, clamped so
  // the reachable state space stays finite.
  int attacker = 0;
  // Lease bookkeeping (leasing variant): consecutive NRP observations that
  // saw no fresh primary ping, and the node-side previous-flag initial value.
  int lease_strikes = 0;
  bool prev_lease_flag = true;
  LogicalTime fail_time = 0;  // 0 means no scheduled failure
  std::array<ActorId, 2> network_out{-1, -1};  // terminal switch per network

  bool operator==(const NodeState&) const = default;
};

struct SwitchState {
  ActorId id = -1;
  int network_id = 0;
  bool terminal = false;
  bool failed = false;
  bool am_i_nrp = false;
  ActorId registered_primary = 0;
  // Lease bookkeeping: whether the latest / previous pingNRP seen by this
  // switch came from the registered primary.
  bool last_ping_from_primary = true;
  bool prev_ping_from_primary = false;
  ActorId neighbor_toward_low = -1;
  ActorId neighbor_toward_high = -1;
  std::optional<ActorId> attached_node;  // terminal switches only
  LogicalTime fail_time = 0;

  bool operator==(const SwitchState&) const = default;
};

using ActorSnapshot = std::variant<NodeState, SwitchState>;

inline bool is_node(const ActorSnapshot& a) {
  return std::holds_alternative<NodeState>(a);
}

inline ActorId actor_id(const ActorSnapshot& a) {
  return is_node(a) ? std::get<NodeState>(a).id : std::get<SwitchState>(a).id;
}

}  // namespace nrpfd
