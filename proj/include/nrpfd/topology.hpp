#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "nrpfd/global_state.hpp"
#include "nrpfd/params.hpp"

namespace nrpfd {

struct SwitchDecl {
  ActorId id = -1;
  std::string name;
  int network = 0;
  bool terminal = false;
  ActorId toward_low = -1;   // neighbor serving ids below ours
  ActorId toward_high = -1;  // neighbor serving ids above ours
  std::optional<ActorId> attached_node;

  bool operator==(const SwitchDecl&) const = default;
};

struct NodeDecl {
  ActorId id = -1;
  std::string name;
  std::array<ActorId, 2> nrp_candidates{-1, -1};
  std::array<ActorId, 2> network_out{-1, -1};

  bool operator==(const NodeDecl&) const = default;
};

// Declaration order (switches first, then nodes) fixes the tie-breaking
// order of the kernel, mirroring the instantiation order of the model.
struct Topology {
  std::vector<SwitchDecl> switches;
  std::vector<NodeDecl> nodes;

  // Two controllers (100, 101) bridged by two disjoint three-switch chains:
  // 1-2-3 on network 0 and 4-5-6 on network 1, terminals attached to nodes.
  static Topology reference();

  bool operator==(const Topology&) const = default;
};

struct ScenarioConfig {
  ProtocolParams params;
  Variant variant = Variant::Baseline;
  Topology topology = Topology::reference();
  ActorId initial_primary = 100;
  std::map<ActorId, LogicalTime> node_fail_times;    // absent or 0: no failure
  std::map<ActorId, LogicalTime> switch_fail_times;  // absent or 0: no failure
  bool event_based_failures = false;
  std::optional<PeriodWindow> suppress_heartbeat_periods;
  std::optional<Mode> abdication_override;
  InterleavingPolicy interleaving = InterleavingPolicy::Priority;
  ExploreLimits limits;

  static ScenarioConfig for_variant(Variant v);

  ProtocolEnv protocol_env() const;

  bool operator==(const ScenarioConfig&) const = default;
};

// Table of the eight regression scenarios:
//   1 no failure                      5 switchA3 fails at 2500
//   2 fail choice on every event      6 switchA1 at 2500, switchB1 at 3500
//   3 DCN1 fails at 2500              7 switchA1 and switchB1 both at 2500
//   4 switchA1 fails at 2500          8 transient heartbeat suppression
// Case 8 suppresses heartbeat periods [1, max_missed_heartbeats+1]: the
// smallest transient outage that outlasts the miss tolerance while the
// primary stays alive, with delivery resuming afterwards.
ScenarioConfig preset_case(int k, Variant v = Variant::Baseline);

const char* case_description(int k);

// Expected NoDualPrimary verdict per preset. Baseline and leasing vectors
// follow the protocol's reference verification results; the no-optimization
// vector was pinned by an exhaustive exploration recorded in the regression
// suite.
std::array<Verdict, 8> expected_verdicts(Variant v);

// Fixed per-scenario data the kernel consults: actor order, priorities,
// display names, and the protocol environment.
class ModelContext {
 public:
  ModelContext(Topology topology, ProtocolEnv env);  // validates, throws ConfigError

  const Topology& topology() const { return topology_; }
  const ProtocolEnv& env() const { return env_; }

  const std::vector<ActorId>& declaration_order() const { return order_; }
  int index_of(ActorId id) const;  // -1 when unknown
  // Switches run at priority 1, nodes at 2 (lower value served first).
  int priority_of(ActorId id) const;
  const std::string& name_of(ActorId id) const;
  ActorId id_of(std::string_view name) const;  // -1 when unknown

 private:
  Topology topology_;
  ProtocolEnv env_;
  std::vector<ActorId> order_;
  std::vector<std::string> names_;
};

ModelContext make_context(const ScenarioConfig& cfg);

// Runs every constructor: nodes start WAITING with runMe scheduled at time 0,
// fail messages are scheduled per the fail-time maps.
GlobalState build_reference_topology(const ModelContext& ctx,
                                     const ScenarioConfig& cfg);

}  // namespace nrpfd
