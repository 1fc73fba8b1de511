#pragma once

#include <string>
#include <vector>

#include "nrpfd/actor_state.hpp"
#include "nrpfd/message.hpp"

namespace nrpfd {

// Immutable-by-convention snapshot of the whole model: logical time, one
// snapshot per actor (declaration order), and the pending message bag kept
// in canonical multiset order. Equality is field-wise; exploration compares
// states after canonicalize().
struct GlobalState {
  LogicalTime now = 0;
  std::vector<ActorSnapshot> actors;
  std::vector<MessageEnvelope> bag;

  bool operator==(const GlobalState&) const = default;
};

// Sorted insert preserving bag_order. Capacity enforcement lives in
// kernel::schedule, which knows the per-class bounds.
void bag_insert(GlobalState& state, MessageEnvelope env);

// Number of bag entries addressed to `receiver`.
std::size_t bag_count_for(const GlobalState& state, ActorId receiver);

// Stable textual form with a fixed field order; the state digest is the
// FNV-1a 64-bit hash of exactly this string, so external tools can
// deduplicate states by recomputing it.
std::string serialize_state(const GlobalState& state);

std::uint64_t fnv1a64(std::string_view bytes);

inline std::uint64_t state_digest(const GlobalState& state) {
  return fnv1a64(serialize_state(state));
}

}  // namespace nrpfd
