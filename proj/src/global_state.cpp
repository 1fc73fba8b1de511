#include "nrpfd/global_state.hpp"

#include <algorithm>
#include <sstream>

namespace nrpfd {

void bag_insert(GlobalState& state, MessageEnvelope env) {
  auto pos = std::upper_bound(state.bag.begin(), state.bag.end(), env, bag_order);
  state.bag.insert(pos, std::move(env));
}

std::size_t bag_count_for(const GlobalState& state, ActorId receiver) {
  return static_cast<std::size_t>(
      std::count_if(state.bag.begin(), state.bag.end(),
                    [&](const MessageEnvelope& e) { return e.receiver == receiver; }));
}

namespace {

void put(std::ostream& os, const NodeState& n) {
  os << "N{" << n.id << ' ' << static_cast<int>(n.mode) << ' ' << n.primary
     << ' ' << n.nrp_candidates[0] << ',' << n.nrp_candidates[1] << ' '
     << n.nrp_network << ' ' << n.nrp_switch_id << ' '
     << n.heartbeats_missed[0] << ',' << n.heartbeats_missed[1] << ' '
     << n.ping_pending << n.nrp_pending << n.become_primary_on_ping_response
     << n.init << ' ' << n.attacker << ' ' << n.lease_strikes
     << n.prev_lease_flag << ' ' << n.fail_time << ' ' << n.network_out[0]
     << ',' << n.network_out[1] << '}';
}

void put(std::ostream& os, const SwitchState& s) {
  os << "S{" << s.id << ' ' << s.network_id << ' ' << s.terminal << s.failed
     << s.am_i_nrp << ' ' << s.registered_primary << ' '
     << s.last_ping_from_primary << s.prev_ping_from_primary << ' '
     << s.neighbor_toward_low << ',' << s.neighbor_toward_high << ' '
     << (s.attached_node ? *s.attached_node : -1) << ' ' << s.fail_time << '}';
}

}  // namespace

std::string serialize_state(const GlobalState& state) {
  std::ostringstream os;
  os << "t=" << state.now << ';';
  for (const ActorSnapshot& a : state.actors) {
    if (is_node(a)) {
      put(os, std::get<NodeState>(a));
    } else {
      put(os, std::get<SwitchState>(a));
    }
  }
  os << "bag[";
  for (const MessageEnvelope& e : state.bag) {
    os << e.receiver << '<' << e.sender << ':' << handler_name(e.handler) << '(';
    for (std::size_t i = 0; i < e.payload.size(); ++i) {
      if (i) os << ',';
      os << e.payload[i];
    }
    os << ")@" << e.arrival;
    if (e.deadline) os << '!' << *e.deadline;
    os << ';';
  }
  os << ']';
  return std::move(os).str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace nrpfd
