#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "nrpfd/types.hpp"

namespace nrpfd {

// Message servers understood by the two actor kinds. Enumerator order equals
// the lexicographic order of the wire names below; the kernel breaks
// same-receiver ties by this order, so keep both in sync.
enum class Handler : std::uint8_t {
  HeartBeat,              // "heartBeat"
  NewNrp,                 // "new_NRP"
  NewNrpBack,             // "new_NRPBack"
  NewNrpRequestTimedOut,  // "new_NRP_request_timed_out"
  NodeFail,               // "nodeFail"
  PingNrp,                // "pingNRP"
  PingNrpResponse,        // "pingNRP_response"
  PingTimedOut,           // "ping_timed_out"
  RunMe,                  // "runMe"
  SwitchFail,             // "switchFail"
};

const char* handler_name(Handler h);

// A pending, time-tagged handler invocation; the only way actors interact.
// `arrival` is the send instant plus the sender's after-offset. An envelope
// whose deadline lies in the past is discarded instead of executed.
struct MessageEnvelope {
  ActorId sender = -1;
  ActorId receiver = -1;
  Handler handler = Handler::RunMe;
  std::vector<int> payload;  // ints; booleans encoded as 0/1
  LogicalTime arrival = 0;
  std::optional<LogicalTime> deadline;

  bool operator==(const MessageEnvelope&) const = default;
};

// Canonical multiset order for bag storage and serialization:
// (receiver, handler, arrival, payload, sender, deadline).
bool bag_order(const MessageEnvelope& a, const MessageEnvelope& b);

}  // namespace nrpfd
