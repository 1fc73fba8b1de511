#pragma once

#include <optional>

#include "nrpfd/actor_state.hpp"
#include "nrpfd/types.hpp"

namespace nrpfd {

enum class Variant {
  // Heartbeat failure detector with an NRP tiebreaker, including the direct
  // takeover shortcut on simultaneous heartbeat timeouts.
  Baseline,
  // Same, with the direct takeover shortcut removed.
  BaselineNoOpt,
  // Lease-based: the NRP remembers whether its latest ping came from the
  // registered primary; a backup needs two stale observations to take over.
  Leasing,
};

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

struct ProtocolParams {
  LogicalTime heartbeat_period = 1000;
  int max_missed_heartbeats = 2;
  LogicalTime ping_timeout = 500;
  LogicalTime nrp_timeout = 500;
  int number_of_networks = 2;
  LogicalTime network_delay = 1;
  LogicalTime network_delay_for_nrp_ping = 1;
  LogicalTime ping_send_offset_primary = 5;
  LogicalTime ping_send_offset_backup = 5;
  ActorId max_switches = 99;

  bool operator==(const ProtocolParams&) const = default;

  static ProtocolParams defaults_for(Variant v);

  // Every per-period exchange (ping out, timeout, heartbeat hops) must
  // resolve within one heartbeat period.
  void validate() const;  // throws ConfigError
};

// Closed range of heartbeat periods, counted from 1 for the first period the
// primary serves after startup.
struct PeriodWindow {
  int first = 0;
  int last = 0;

  bool contains(int period) const { return period >= first && period <= last; }
  bool operator==(const PeriodWindow&) const = default;
};

// Everything a handler body needs besides the actor snapshot and payload.
struct ProtocolEnv {
  ProtocolParams params;
  Variant variant = Variant::Baseline;
  bool event_based_failures = false;
  std::optional<PeriodWindow> suppress_heartbeats;
  std::optional<Mode> abdication_override;

  // Mode the primary falls back to when it runs out of NRP candidates.
  Mode abdication_mode() const {
    if (abdication_override) return *abdication_override;
    return variant == Variant::Leasing ? Mode::Waiting : Mode::Failed;
  }

  bool heartbeats_suppressed(int period) const {
    return suppress_heartbeats && suppress_heartbeats->contains(period);
  }

  // Upper clamp for the period counter; one past the window end is enough to
  // tell "window over" from "inside window".
  int attacker_clamp() const {
    return suppress_heartbeats ? suppress_heartbeats->last + 1 : 1;
  }
};

}  // namespace nrpfd
