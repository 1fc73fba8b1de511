#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nrpfd {

// Abstract model time. One heartbeat period is 1000 units in the reference
// configuration; values are non-negative and only ever advance.
using LogicalTime = std::int64_t;

// Switches use small ids (1..max_switches), nodes use large ids (100, 101).
// Routing decisions compare ids against the max_switches threshold, so the
// id scheme is load-bearing and validated at scenario construction.
using ActorId = int;

enum class Verdict { Satisfied, Violated, Unknown };

const char* verdict_name(Verdict v);

enum class InterleavingPolicy {
  // Serve only the highest-priority envelope among those enabled at the
  // current instant: one successor per state, matching the priority
  // annotations of the modeled system.
  Priority,
  // Branch over every envelope enabled at the current instant.
  Full,
};

const char* interleaving_name(InterleavingPolicy p);

struct ExploreLimits {
  std::size_t max_states = 1'000'000;
  std::size_t max_depth = 1'000'000;

  bool operator==(const ExploreLimits&) const = default;
};

enum class ModelFault {
  BagOverflow,
  UnknownHandler,
  ChoiceUnderflow,
  EmptyBag,
  NotViolated,
  UnknownActor,
  UnknownField,
};

class ModelError : public std::runtime_error {
 public:
  ModelError(ModelFault fault, const std::string& what)
      : std::runtime_error(what), fault_(fault) {}

  ModelFault fault() const { return fault_; }

 private:
  ModelFault fault_;
};

// Scenario/parameter problems: bad ids, malformed config text, violated
// timing constraints. Reported to the CLI user, never raised mid-exploration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nrpfd
