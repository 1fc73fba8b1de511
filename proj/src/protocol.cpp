#include "nrpfd/protocol.hpp"

#include <algorithm>

#include "nrpfd/types.hpp"

namespace nrpfd {

ChoiceStream ChoiceStream::replay(std::vector<bool> bits) {
  return ChoiceStream(std::move(bits), false);
}

ChoiceStream ChoiceStream::probing(std::vector<bool> prefix) {
  return ChoiceStream(std::move(prefix), true);
}

bool ChoiceStream::next() {
  bool value = false;
  if (pos_ < bits_.size()) {
    value = bits_[pos_];
  } else if (!extend_) {
    throw ModelError(ModelFault::ChoiceUnderflow,
                     "choice sequence shorter than the handler's choice points");
  }
  ++pos_;
  consumed_.push_back(value);
  return value;
}

namespace protocol {

void Emissions::send(ActorId receiver, Handler handler,
                     std::vector<int> payload, LogicalTime after) {
  list.push_back(Emission{receiver, handler, std::move(payload), after, {}});
}

namespace {

// Both controller ping paths test for network 0 and otherwise use the
// second interface, so a wiped pointer (-1) also goes out interface 1.
int out_index(int nrp_network) { return nrp_network == 0 ? 0 : 1; }

void clamp_missed(const ProtocolEnv& env, NodeState& n) {
  const int cap = env.params.max_missed_heartbeats + 2;
  n.heartbeats_missed[0] = std::min(n.heartbeats_missed[0], cap);
  n.heartbeats_missed[1] = std::min(n.heartbeats_missed[1], cap);
}

void send_ping(const ProtocolEnv& env, const NodeState& n, LogicalTime offset,
               Emissions& out) {
  const int k = out_index(n.nrp_network);
  out.send(n.network_out[k], Handler::PingNrp, {n.id, n.id, n.nrp_switch_id},
           offset);
  out.send(n.id, Handler::PingTimedOut, {}, env.params.ping_timeout);
}

}  // namespace

void node_run_me(const ProtocolEnv& env, NodeState& n, Emissions& out) {
  const ProtocolParams& p = env.params;
  switch (n.mode) {
    case Mode::Waiting:
      if (n.init) {
        if (n.id == n.primary) {
          n.mode = Mode::Primary;
          ++n.nrp_network;
          if (n.nrp_network < p.number_of_networks) {
            n.nrp_switch_id = n.nrp_candidates[n.nrp_network];
            out.send(n.network_out[n.nrp_network], Handler::NewNrp,
                     {n.id, n.id, n.nrp_network, n.nrp_switch_id});
          } else {
            n.nrp_network = p.number_of_networks;
          }
        } else {
          n.mode = Mode::Backup;
        }
        n.init = false;
      }
      // already initialized: parked until recovery, nothing to do
      break;
    case Mode::Primary:
      ++n.attacker;
      n.attacker = std::min(n.attacker, env.attacker_clamp());
      n.ping_pending = true;
      send_ping(env, n, p.ping_send_offset_primary, out);
      n.nrp_pending = true;
      break;
    case Mode::Backup: {
      ++n.heartbeats_missed[0];
      ++n.heartbeats_missed[1];
      const int m1 = n.heartbeats_missed[0];
      const int m2 = n.heartbeats_missed[1];
      const int max = p.max_missed_heartbeats;
      if (m1 > max && m2 > max) {
        if (env.variant == Variant::Baseline && m1 == m2 && m2 == max + 1) {
          // Simultaneous timeout on both networks: take over directly,
          // skipping the NRP ping exchange.
          n.mode = Mode::Primary;
          n.primary = n.id;
          n.heartbeats_missed = {0, 0};
          n.nrp_pending = true;
        } else {
          clamp_missed(env, n);
          n.ping_pending = true;
          const int k = out_index(n.nrp_network);
          if (env.variant != Variant::Leasing) n.nrp_network = -1;
          out.send(n.network_out[k], Handler::PingNrp,
                   {n.id, n.id, n.nrp_switch_id}, p.ping_send_offset_backup);
          out.send(n.id, Handler::PingTimedOut, {}, p.ping_timeout);
          n.nrp_pending = true;
        }
      } else if (m1 > max || m2 > max) {
        // One network quiet: probe the NRP only when it sits on that network.
        if (n.nrp_network == 0 && m1 > max) {
          n.ping_pending = true;
          send_ping(env, n, p.ping_send_offset_primary, out);
        } else if (n.nrp_network == 1 && m2 > max) {
          n.ping_pending = true;
          send_ping(env, n, p.ping_send_offset_primary, out);
        }
        clamp_missed(env, n);
      }
      break;
    }
    case Mode::Failed:
      break;
  }
  out.send(n.id, Handler::RunMe, {}, p.heartbeat_period);
}

void node_heartbeat(NodeState& n, int network_id) {
  if (n.mode == Mode::Backup) {
    n.heartbeats_missed[network_id == 0 ? 0 : 1] = 0;
  }
}

void node_ping_nrp_response(const ProtocolEnv& env, NodeState& n,
                            const std::vector<int>& payload) {
  switch (n.mode) {
    case Mode::Backup:
      if (env.variant == Variant::Leasing) {
        const bool lease_now = payload.size() > 1 && payload[1] != 0;
        const bool lease_prev = payload.size() > 2 && payload[2] != 0;
        if (!lease_now && !lease_prev) {
          ++n.lease_strikes;
        } else {
          n.lease_strikes = 0;
        }
        if (n.lease_strikes > 1) n.ping_pending = false;
      } else {
        n.ping_pending = false;
        n.become_primary_on_ping_response = true;
      }
      break;
    case Mode::Primary:
      n.ping_pending = false;
      break;
    case Mode::Waiting:
    case Mode::Failed:
      break;
  }
}

void node_ping_timed_out(const ProtocolEnv& env, NodeState& n, Emissions& out) {
  const ProtocolParams& p = env.params;
  if (n.mode == Mode::Backup) {
    if (n.ping_pending) {
      // No reply arrived in time: the NRP is unreachable, stay backup.
      n.ping_pending = false;
      return;
    }
    if (env.variant == Variant::Leasing) {
      if (n.lease_strikes > 1) {
        n.mode = Mode::Primary;
        n.heartbeats_missed = {0, 0};
        n.primary = n.id;
        out.send(n.network_out[out_index(n.nrp_network)], Handler::NewNrpBack,
                 {n.id, n.id, n.nrp_network, n.nrp_switch_id});
        n.nrp_pending = true;
      } else {
        n.nrp_pending = true;
      }
    } else {
      n.mode = Mode::Primary;
      n.heartbeats_missed = {0, 0};
      n.primary = n.id;
      n.nrp_pending = true;
      n.become_primary_on_ping_response = false;
    }
  } else if (n.mode == Mode::Primary) {
    if (n.ping_pending) {
      // NRP lost; move to the next candidate or abdicate.
      ++n.nrp_network;
      if (n.nrp_network < p.number_of_networks) {
        n.nrp_switch_id = n.nrp_candidates[n.nrp_network];
        out.send(n.network_out[n.nrp_network], Handler::NewNrp,
                 {n.id, n.id, n.nrp_network, n.nrp_switch_id});
      } else {
        n.nrp_network = p.number_of_networks;
        n.mode = env.abdication_mode();
      }
      n.nrp_pending = true;
    } else {
      // NRP confirmed for this period; heartbeats go out unless suppressed.
      if (!env.heartbeats_suppressed(n.attacker)) {
        out.send(n.network_out[0], Handler::HeartBeat, {0, n.id},
                 p.network_delay);
        out.send(n.network_out[1], Handler::HeartBeat, {1, n.id},
                 p.network_delay);
      }
    }
  }
}

void node_new_nrp(NodeState& n, const std::vector<int>& payload) {
  if (n.mode != Mode::Failed) {
    n.nrp_network = payload[2];
    n.nrp_switch_id = payload[3];
  }
}

void node_new_nrp_request_timed_out(NodeState& n) {
  if (n.mode == Mode::Backup && n.nrp_pending) {
    n.nrp_pending = false;
    n.become_primary_on_ping_response = false;
  }
}

void node_fail(NodeState& n) {
  n.primary = -1;
  n.mode = Mode::Failed;
  n.nrp_network = -1;
  n.nrp_switch_id = -1;
  n.heartbeats_missed = {0, 0};
  n.nrp_pending = true;
  n.become_primary_on_ping_response = false;
  n.ping_pending = false;
}

void switch_fail(SwitchState& s) {
  s.failed = true;
  s.am_i_nrp = false;
}

namespace {

// prev_hop above our id goes toward the low side, at or below goes toward
// the high side; node ids sit above max_switches, so a message entering at a
// terminal switch always proceeds into the chain.
ActorId route_next(const SwitchState& s, ActorId prev_hop) {
  return prev_hop > s.id ? s.neighbor_toward_low : s.neighbor_toward_high;
}

bool from_switch(const ProtocolEnv& env, ActorId prev_hop) {
  return prev_hop <= env.params.max_switches;
}

}  // namespace

void switch_forward(const ProtocolEnv& env, SwitchState& s, Handler handler,
                    const std::vector<int>& payload, Emissions& out) {
  if (s.failed) return;
  if (handler == Handler::HeartBeat) {
    // heartBeat(networkId, senderNode); each hop costs one network delay.
    const ActorId prev_hop = payload[1];
    const std::vector<int> forwarded{payload[0], s.id};
    const ActorId next = s.terminal && from_switch(env, prev_hop)
                             ? *s.attached_node
                             : route_next(s, prev_hop);
    out.send(next, handler, forwarded, env.params.network_delay);
    return;
  }
  // new_NRP / new_NRPBack (senderNode, primary, network, switch): the named
  // switch claims NRP duty, everyone else renounces it.
  const ActorId prev_hop = payload[0];
  if (s.id == payload[3]) {
    s.am_i_nrp = true;
    s.registered_primary = payload[1];
  } else {
    s.am_i_nrp = false;
  }
  const std::vector<int> forwarded{s.id, payload[1], payload[2], payload[3]};
  const ActorId next = s.terminal && from_switch(env, prev_hop)
                           ? *s.attached_node
                           : route_next(s, prev_hop);
  out.send(next, handler, forwarded);
}

void switch_ping_nrp(const ProtocolEnv& env, SwitchState& s,
                     const std::vector<int>& payload, Emissions& out) {
  if (s.failed) return;  // this silence is what ping_timed_out detects
  const ActorId prev_hop = payload[0];
  const ActorId origin = payload[1];
  const ActorId nrp_id = payload[2];
  if (s.terminal && nrp_id == s.id) {
    std::vector<int> response;
    if (env.variant == Variant::Leasing) {
      // Lease stamp: remember whether this and the previous ping came from
      // the registered primary, and report both to the asker.
      s.prev_ping_from_primary = s.last_ping_from_primary;
      s.last_ping_from_primary = origin == s.registered_primary;
      response = {s.id, s.last_ping_from_primary ? 1 : 0,
                  s.prev_ping_from_primary ? 1 : 0};
    } else {
      response = {s.id};
    }
    if (from_switch(env, prev_hop)) {
      out.send(s.neighbor_toward_low, Handler::PingNrpResponse, response);
    } else {
      out.send(*s.attached_node, Handler::PingNrpResponse, response);
    }
  } else if (prev_hop > s.id) {
    out.send(s.neighbor_toward_low, Handler::PingNrp, {s.id, origin, nrp_id});
  } else {
    out.send(s.neighbor_toward_high, Handler::PingNrp, {s.id, origin, nrp_id});
  }
}

void switch_ping_nrp_response(const ProtocolEnv& env, SwitchState& s,
                              const std::vector<int>& payload, Emissions& out) {
  if (s.failed) return;
  const ActorId prev_hop = payload[0];
  std::vector<int> forwarded = payload;
  forwarded[0] = s.id;
  if (s.terminal && from_switch(env, prev_hop)) {
    out.send(*s.attached_node, Handler::PingNrpResponse, forwarded);
  } else if (prev_hop > s.id) {
    out.send(s.neighbor_toward_low, Handler::PingNrpResponse, forwarded);
  } else {
    out.send(s.neighbor_toward_high, Handler::PingNrpResponse, forwarded);
  }
}

std::size_t bag_capacity(const ActorSnapshot& actor) {
  return is_node(actor) ? 4 : 10;
}

void apply_handler(const ProtocolEnv& env, ActorSnapshot& actor,
                   const MessageEnvelope& msg, ChoiceStream& choices,
                   Emissions& out) {
  const bool node = is_node(actor);
  if (node && msg.handler == Handler::SwitchFail) {
    throw ModelError(ModelFault::UnknownHandler, "node has no switchFail");
  }
  if (!node && (msg.handler == Handler::RunMe ||
                msg.handler == Handler::PingTimedOut ||
                msg.handler == Handler::NewNrpRequestTimedOut ||
                msg.handler == Handler::NodeFail)) {
    throw ModelError(ModelFault::UnknownHandler,
                     std::string("switch has no ") + handler_name(msg.handler));
  }

  if (env.event_based_failures && msg.handler != Handler::NodeFail &&
      msg.handler != Handler::SwitchFail) {
    // Failure choice at handler entry: when taken, the actor fails and the
    // body is skipped.
    if (choices.next()) {
      if (node) {
        node_fail(std::get<NodeState>(actor));
      } else {
        switch_fail(std::get<SwitchState>(actor));
      }
      return;
    }
  }

  if (node) {
    NodeState& n = std::get<NodeState>(actor);
    switch (msg.handler) {
      case Handler::RunMe: node_run_me(env, n, out); break;
      case Handler::HeartBeat: node_heartbeat(n, msg.payload[0]); break;
      case Handler::PingNrpResponse:
        node_ping_nrp_response(env, n, msg.payload);
        break;
      case Handler::PingTimedOut: node_ping_timed_out(env, n, out); break;
      case Handler::NewNrp:
      case Handler::NewNrpBack: node_new_nrp(n, msg.payload); break;
      case Handler::NewNrpRequestTimedOut:
        node_new_nrp_request_timed_out(n);
        break;
      case Handler::NodeFail: node_fail(n); break;
      default:
        throw ModelError(ModelFault::UnknownHandler, handler_name(msg.handler));
    }
  } else {
    SwitchState& s = std::get<SwitchState>(actor);
    switch (msg.handler) {
      case Handler::HeartBeat:
      case Handler::NewNrp:
      case Handler::NewNrpBack:
        switch_forward(env, s, msg.handler, msg.payload, out);
        break;
      case Handler::PingNrp: switch_ping_nrp(env, s, msg.payload, out); break;
      case Handler::PingNrpResponse:
        switch_ping_nrp_response(env, s, msg.payload, out);
        break;
      case Handler::SwitchFail: switch_fail(s); break;
      default:
        throw ModelError(ModelFault::UnknownHandler, handler_name(msg.handler));
    }
  }
}

}  // namespace protocol
}  // namespace nrpfd
