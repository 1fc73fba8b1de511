#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nrpfd/global_state.hpp"
#include "nrpfd/protocol.hpp"
#include "nrpfd/topology.hpp"

namespace nrpfd {

// Everything needed to re-derive an edge: replaying (source, label) through
// execute_event deterministically yields the target state. The envelope is
// expressed in the source state's time frame.
struct TransitionLabel {
  MessageEnvelope executed;
  std::vector<bool> choices;

  bool operator==(const TransitionLabel&) const = default;
};

// Adds an envelope to the bag. Faults with BagOverflow when the receiver's
// declared queue bound would be exceeded; that signals a modeling bug, not a
// droppable message.
GlobalState schedule(const ModelContext& ctx, GlobalState state,
                     MessageEnvelope env);

// All envelopes whose arrival equals the minimal arrival among non-expired
// entries, ordered by (receiver priority, declaration order, handler,
// payload, sender). Envelopes past their deadline are skipped. Empty result
// means a terminal state.
std::vector<MessageEnvelope> enabled_at_now(const ModelContext& ctx,
                                            const GlobalState& state);

// Minimal arrival in the bag; never executes anything.
LogicalTime advance_time(const GlobalState& state);  // faults: EmptyBag

// Consumes `env`: advances now to its arrival, drops expired entries, runs
// the receiver's message server atomically, and schedules its emissions.
std::pair<GlobalState, TransitionLabel> execute_event(
    const ModelContext& ctx, const GlobalState& state,
    const MessageEnvelope& env, ChoiceStream& choices);

// Shift-equivalence representative: now becomes 0 and every arrival/deadline
// shifts down by the same amount. Actor variables hold no absolute times, so
// states that differ only by a uniform time translation collapse.
GlobalState canonicalize(GlobalState state);

struct StoredState {
  GlobalState state;  // canonical
  std::uint64_t digest = 0;
  LogicalTime first_reached = 0;  // absolute time at first discovery
  std::size_t depth = 0;
  int parent_state = -1;
  int parent_edge = -1;
  bool violating = false;
};

struct Edge {
  int source = -1;
  int target = -1;
  TransitionLabel label;
};

struct ExplorationResult {
  Verdict verdict = Verdict::Unknown;
  std::string limit;  // "max_states" or "max_depth" when verdict is Unknown
  std::size_t states = 0;
  std::size_t transitions = 0;
  int violating_state = -1;
  std::vector<StoredState> graph;
  std::vector<Edge> edges;
  double elapsed_seconds = 0.0;
};

using StateProperty = std::function<bool(const GlobalState&)>;

// Breadth-first exhaustive exploration over canonical states. Branches over
// the enabled envelopes (per `policy`) and over every boolean assignment of
// the choice points inside each handler. The property is evaluated on every
// state as it is generated; the first violation stops the search with the
// violating path retained in the graph. Results are independent of `workers`.
ExplorationResult explore(const ModelContext& ctx, const GlobalState& initial,
                          const StateProperty& property, ExploreLimits limits,
                          InterleavingPolicy policy, unsigned workers = 1);

}  // namespace nrpfd
