#include <string_view>

#include "nrpfd/actor_state.hpp"
#include "nrpfd/message.hpp"
#include "nrpfd/params.hpp"
#include "nrpfd/types.hpp"

namespace nrpfd {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

const char* interleaving_name(InterleavingPolicy p) {
  return p == InterleavingPolicy::Priority ? "priority" : "full";
}

const char* handler_name(Handler h) {
  switch (h) {
    case Handler::HeartBeat: return "heartBeat";
    case Handler::NewNrp: return "new_NRP";
    case Handler::NewNrpBack: return "new_NRPBack";
    case Handler::NewNrpRequestTimedOut: return "new_NRP_request_timed_out";
    case Handler::NodeFail: return "nodeFail";
    case Handler::PingNrp: return "pingNRP";
    case Handler::PingNrpResponse: return "pingNRP_response";
    case Handler::PingTimedOut: return "ping_timed_out";
    case Handler::RunMe: return "runMe";
    case Handler::SwitchFail: return "switchFail";
  }
  return "?";
}

bool bag_order(const MessageEnvelope& a, const MessageEnvelope& b) {
  if (a.receiver != b.receiver) return a.receiver < b.receiver;
  if (a.handler != b.handler) return a.handler < b.handler;
  if (a.arrival != b.arrival) return a.arrival < b.arrival;
  if (a.payload != b.payload) return a.payload < b.payload;
  if (a.sender != b.sender) return a.sender < b.sender;
  return a.deadline < b.deadline;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Waiting: return "WAITING";
    case Mode::Primary: return "PRIMARY";
    case Mode::Backup: return "BACKUP";
    case Mode::Failed: return "FAILED";
  }
  return "?";
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Baseline: return "baseline";
    case Variant::BaselineNoOpt: return "baseline-noopt";
    case Variant::Leasing: return "leasing";
  }
  return "?";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  if (name == "baseline") return Variant::Baseline;
  if (name == "baseline-noopt") return Variant::BaselineNoOpt;
  if (name == "leasing") return Variant::Leasing;
  return std::nullopt;
}

ProtocolParams ProtocolParams::defaults_for(Variant v) {
  ProtocolParams p;
  if (v == Variant::Leasing) {
    p.ping_timeout = 100;
    p.nrp_timeout = 100;
    p.ping_send_offset_backup = 15;
  }
  return p;
}

void ProtocolParams::validate() const {
  if (heartbeat_period <= 0 || ping_timeout <= 0 || nrp_timeout <= 0 ||
      network_delay < 0 || network_delay_for_nrp_ping < 0 ||
      ping_send_offset_primary < 0 || ping_send_offset_backup < 0) {
    throw ConfigError("timing parameters must be positive");
  }
  if (max_missed_heartbeats < 1) {
    throw ConfigError("max_missed_heartbeats must be at least 1");
  }
  if (number_of_networks != 2) {
    throw ConfigError("NumberOfNetworks is fixed to 2 for this topology");
  }
  const LogicalTime offset =
      std::max(ping_send_offset_primary, ping_send_offset_backup);
  if (heartbeat_period <= offset + ping_timeout + 2 * network_delay) {
    throw ConfigError(
        "heartbeat_period must exceed ping offset + ping_timeout + twice the "
        "network delay so each period's events resolve within the period");
  }
}

}  // namespace nrpfd
