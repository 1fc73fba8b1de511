#include "nrpfd/topology.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nrpfd/protocol.hpp"

namespace nrpfd {

Topology Topology::reference() {
  Topology t;
  t.switches = {
      {1, "switchA1", 0, true, 2, 2, 100},
      {2, "switchA2", 0, false, 1, 3, std::nullopt},
      {3, "switchA3", 0, true, 2, 2, 101},
      {4, "switchB1", 1, true, 5, 5, 100},
      {5, "switchB2", 1, false, 4, 6, std::nullopt},
      {6, "switchB3", 1, true, 5, 5, 101},
  };
  t.nodes = {
      {100, "DCN1", {1, 4}, {1, 4}},
      {101, "DCN2", {3, 6}, {3, 6}},
  };
  return t;
}

ScenarioConfig ScenarioConfig::for_variant(Variant v) {
  ScenarioConfig cfg;
  cfg.variant = v;
  cfg.params = ProtocolParams::defaults_for(v);
  return cfg;
}

ProtocolEnv ScenarioConfig::protocol_env() const {
  ProtocolEnv env;
  env.params = params;
  env.variant = variant;
  env.event_based_failures = event_based_failures;
  env.suppress_heartbeats = suppress_heartbeat_periods;
  env.abdication_override = abdication_override;
  return env;
}

ScenarioConfig preset_case(int k, Variant v) {
  if (k < 1 || k > 8) {
    throw ConfigError("preset case must be in 1..8, got " + std::to_string(k));
  }
  ScenarioConfig cfg = ScenarioConfig::for_variant(v);
  switch (k) {
    case 1:
      break;
    case 2:
      cfg.event_based_failures = true;
      break;
    case 3:
      cfg.node_fail_times[100] = 2500;
      break;
    case 4:
      cfg.switch_fail_times[1] = 2500;
      break;
    case 5:
      cfg.switch_fail_times[3] = 2500;
      break;
    case 6:
      cfg.switch_fail_times[1] = 2500;
      cfg.switch_fail_times[4] = 3500;
      break;
    case 7:
      cfg.switch_fail_times[1] = 2500;
      cfg.switch_fail_times[4] = 2500;
      break;
    case 8:
      cfg.suppress_heartbeat_periods =
          PeriodWindow{1, cfg.params.max_missed_heartbeats + 1};
      break;
  }
  return cfg;
}

const char* case_description(int k) {
  switch (k) {
    case 1: return "without failure";
    case 2: return "failures on each event";
    case 3: return "DCN1 fails at time 2500";
    case 4: return "switchA1 fails at time 2500";
    case 5: return "switchA3 fails at time 2500";
    case 6: return "switchA1 fails at 2500 and switchB1 at 3500";
    case 7: return "switchA1 and switchB1 fail simultaneously at 2500";
    case 8: return "heartbeats missing because of transient errors";
  }
  return "?";
}

std::array<Verdict, 8> expected_verdicts(Variant v) {
  constexpr Verdict S = Verdict::Satisfied;
  constexpr Verdict V = Verdict::Violated;
  switch (v) {
    case Variant::Baseline:
      return {S, V, S, S, S, S, V, V};
    case Variant::BaselineNoOpt:
      // Derived regression vector: without the direct-takeover shortcut only
      // the transient-suppression scenario still produces a dual primary.
      return {S, S, S, S, S, S, S, V};
    case Variant::Leasing:
      return {S, S, S, S, S, S, S, S};
  }
  return {S, S, S, S, S, S, S, S};
}

ModelContext::ModelContext(Topology topology, ProtocolEnv env)
    : topology_(std::move(topology)), env_(std::move(env)) {
  env_.params.validate();

  std::set<ActorId> switch_ids;
  for (const SwitchDecl& s : topology_.switches) {
    if (s.id <= 0 || s.id > env_.params.max_switches) {
      throw ConfigError("switch id " + std::to_string(s.id) +
                        " outside 1..max_switches");
    }
    if (!switch_ids.insert(s.id).second) {
      throw ConfigError("duplicate switch id " + std::to_string(s.id));
    }
  }
  std::set<ActorId> node_ids;
  for (const NodeDecl& n : topology_.nodes) {
    if (n.id <= env_.params.max_switches) {
      throw ConfigError("node id " + std::to_string(n.id) +
                        " not above max_switches");
    }
    if (!node_ids.insert(n.id).second) {
      throw ConfigError("duplicate node id " + std::to_string(n.id));
    }
  }
  for (const SwitchDecl& s : topology_.switches) {
    if (!switch_ids.count(s.toward_low) || !switch_ids.count(s.toward_high)) {
      throw ConfigError("switch " + std::to_string(s.id) +
                        " references a nonexistent neighbor");
    }
    if (s.terminal != s.attached_node.has_value()) {
      throw ConfigError("terminal switches (exactly) carry an attached node");
    }
    if (s.attached_node && !node_ids.count(*s.attached_node)) {
      throw ConfigError("switch " + std::to_string(s.id) +
                        " attached to nonexistent node");
    }
  }
  for (const NodeDecl& n : topology_.nodes) {
    for (int k = 0; k < 2; ++k) {
      if (!switch_ids.count(n.nrp_candidates[k])) {
        throw ConfigError("NRP candidate " + std::to_string(n.nrp_candidates[k]) +
                          " of node " + std::to_string(n.id) + " does not exist");
      }
      if (!switch_ids.count(n.network_out[k])) {
        throw ConfigError("network interface of node " + std::to_string(n.id) +
                          " references nonexistent switch");
      }
    }
  }

  for (const SwitchDecl& s : topology_.switches) {
    order_.push_back(s.id);
    names_.push_back(s.name);
  }
  for (const NodeDecl& n : topology_.nodes) {
    order_.push_back(n.id);
    names_.push_back(n.name);
  }
}

int ModelContext::index_of(ActorId id) const {
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (order_[i] == id) return static_cast<int>(i);
  }
  return -1;
}

int ModelContext::priority_of(ActorId id) const {
  return id <= env_.params.max_switches ? 1 : 2;
}

const std::string& ModelContext::name_of(ActorId id) const {
  const int i = index_of(id);
  if (i < 0) {
    throw ModelError(ModelFault::UnknownActor,
                     "no actor with id " + std::to_string(id));
  }
  return names_[static_cast<std::size_t>(i)];
}

ActorId ModelContext::id_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return order_[i];
  }
  return -1;
}

ModelContext make_context(const ScenarioConfig& cfg) {
  ModelContext ctx(cfg.topology, cfg.protocol_env());
  bool primary_known = false;
  for (const NodeDecl& n : cfg.topology.nodes) {
    primary_known = primary_known || n.id == cfg.initial_primary;
  }
  if (!primary_known) {
    throw ConfigError("initial primary " + std::to_string(cfg.initial_primary) +
                      " is not a declared node");
  }
  for (const auto& [id, t] : cfg.node_fail_times) {
    if (t < 0) throw ConfigError("negative fail time");
    if (ctx.index_of(id) < 0 || ctx.priority_of(id) != 2) {
      throw ConfigError("node fail time for unknown node " + std::to_string(id));
    }
  }
  for (const auto& [id, t] : cfg.switch_fail_times) {
    if (t < 0) throw ConfigError("negative fail time");
    if (ctx.index_of(id) < 0 || ctx.priority_of(id) != 1) {
      throw ConfigError("switch fail time for unknown switch " +
                        std::to_string(id));
    }
  }
  if (cfg.suppress_heartbeat_periods &&
      (cfg.suppress_heartbeat_periods->first < 1 ||
       cfg.suppress_heartbeat_periods->last <
           cfg.suppress_heartbeat_periods->first)) {
    throw ConfigError("suppression window must satisfy 1 <= first <= last");
  }
  if (cfg.limits.max_states == 0 || cfg.limits.max_depth == 0) {
    throw ConfigError("exploration limits must be positive");
  }
  return ctx;
}

GlobalState build_reference_topology(const ModelContext&,
                                     const ScenarioConfig& cfg) {
  GlobalState state;
  auto fail_time_of = [](const std::map<ActorId, LogicalTime>& m, ActorId id) {
    auto it = m.find(id);
    return it == m.end() ? LogicalTime{0} : it->second;
  };

  for (const SwitchDecl& d : cfg.topology.switches) {
    SwitchState s;
    s.id = d.id;
    s.network_id = d.network;
    s.terminal = d.terminal;
    s.neighbor_toward_low = d.toward_low;
    s.neighbor_toward_high = d.toward_high;
    s.attached_node = d.attached_node;
    s.fail_time = fail_time_of(cfg.switch_fail_times, d.id);
    state.actors.emplace_back(s);
    if (s.fail_time != 0) {
      bag_insert(state, MessageEnvelope{s.id, s.id, Handler::SwitchFail, {},
                                        s.fail_time, {}});
    }
  }
  for (const NodeDecl& d : cfg.topology.nodes) {
    NodeState n;
    n.id = d.id;
    n.primary = cfg.initial_primary;
    n.nrp_candidates = d.nrp_candidates;
    n.network_out = d.network_out;
    n.fail_time = fail_time_of(cfg.node_fail_times, d.id);
    state.actors.emplace_back(n);
    if (n.fail_time != 0) {
      bag_insert(state, MessageEnvelope{n.id, n.id, Handler::NodeFail, {},
                                        n.fail_time, {}});
    }
    bag_insert(state, MessageEnvelope{n.id, n.id, Handler::RunMe, {}, 0, {}});
  }
  return state;
}

}  // namespace nrpfd
