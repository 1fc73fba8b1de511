#pragma once

#include <vector>

#include "nrpfd/actor_state.hpp"
#include "nrpfd/global_state.hpp"
#include "nrpfd/message.hpp"
#include "nrpfd/params.hpp"

namespace nrpfd {

// Source of resolved nondeterministic choices. Exploration probes handlers
// with an extensible stream (missing bits default to false and are recorded);
// replay uses a fixed stream that faults on underflow.
class ChoiceStream {
 public:
  static ChoiceStream replay(std::vector<bool> bits);
  static ChoiceStream probing(std::vector<bool> prefix = {});

  bool next();
  const std::vector<bool>& consumed() const { return consumed_; }

 private:
  ChoiceStream(std::vector<bool> bits, bool extend)
      : bits_(std::move(bits)), extend_(extend) {}

  std::vector<bool> bits_;
  std::size_t pos_ = 0;
  bool extend_ = false;
  std::vector<bool> consumed_;
};

namespace protocol {

// A send request produced by a handler; the kernel stamps the arrival time
// (current instant + after) and enforces bag capacity.
struct Emission {
  ActorId receiver = -1;
  Handler handler = Handler::RunMe;
  std::vector<int> payload;
  LogicalTime after = 0;
  std::optional<LogicalTime> deadline_after;
};

struct Emissions {
  std::vector<Emission> list;

  void send(ActorId receiver, Handler handler, std::vector<int> payload = {},
            LogicalTime after = 0);
};

// --- node message servers ------------------------------------------------

void node_run_me(const ProtocolEnv& env, NodeState& n, Emissions& out);
void node_heartbeat(NodeState& n, int network_id);
void node_ping_nrp_response(const ProtocolEnv& env, NodeState& n,
                            const std::vector<int>& payload);
void node_ping_timed_out(const ProtocolEnv& env, NodeState& n, Emissions& out);
void node_new_nrp(NodeState& n, const std::vector<int>& payload);
void node_new_nrp_request_timed_out(NodeState& n);
void node_fail(NodeState& n);

// --- switch message servers ----------------------------------------------

void switch_fail(SwitchState& s);
// heartBeat / new_NRP / new_NRPBack: mark NRP ownership (announcements) and
// route along the chain until a terminal switch delivers to its node.
void switch_forward(const ProtocolEnv& env, SwitchState& s, Handler handler,
                    const std::vector<int>& payload, Emissions& out);
void switch_ping_nrp(const ProtocolEnv& env, SwitchState& s,
                     const std::vector<int>& payload, Emissions& out);
void switch_ping_nrp_response(const ProtocolEnv& env, SwitchState& s,
                              const std::vector<int>& payload, Emissions& out);

// Dispatches one envelope against one actor snapshot. With event-based
// failures enabled, a choice point at handler entry may fail the actor and
// skip the body (fail handlers themselves carry no choice point).
// Throws ModelError(UnknownHandler) when the actor kind has no such server.
void apply_handler(const ProtocolEnv& env, ActorSnapshot& actor,
                   const MessageEnvelope& msg, ChoiceStream& choices,
                   Emissions& out);

// Declared queue bounds of the two actor classes.
std::size_t bag_capacity(const ActorSnapshot& actor);

}  // namespace protocol
}  // namespace nrpfd
