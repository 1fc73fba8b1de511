#include "nrpfd/scenario_io.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <vector>

namespace nrpfd {

namespace {

struct KeyValue {
  int line = 0;
  std::string key;
  std::string value;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  throw ConfigError("parse error on line " + std::to_string(line) + ": " + what);
}

long long to_int(const KeyValue& kv) {
  const std::string_view v = kv.value;
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    parse_error(kv.line, "expected an integer for " + kv.key);
  }
  return out;
}

bool to_bool(const KeyValue& kv) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  parse_error(kv.line, "expected true/false for " + kv.key);
}

PeriodWindow to_window(const KeyValue& kv) {
  const auto sep = kv.value.find("..");
  if (sep == std::string::npos) {
    parse_error(kv.line, "expected <first>..<last> for " + kv.key);
  }
  KeyValue lo{kv.line, kv.key, kv.value.substr(0, sep)};
  KeyValue hi{kv.line, kv.key, kv.value.substr(sep + 2)};
  return PeriodWindow{static_cast<int>(to_int(lo)), static_cast<int>(to_int(hi))};
}

const std::map<std::string, ActorId>& fail_time_keys() {
  static const std::map<std::string, ActorId> keys = {
      {"switchA1failtime", 1}, {"switchA2failtime", 2}, {"switchA3failtime", 3},
      {"switchB1failtime", 4}, {"switchB2failtime", 5}, {"switchB3failtime", 6},
      {"node1failtime", 100},  {"node2failtime", 101},
  };
  return keys;
}

}  // namespace

ScenarioConfig load_config(const std::string& text) {
  std::vector<KeyValue> pairs;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      parse_error(line_no, "expected key = value");
    }
    KeyValue kv;
    kv.line = line_no;
    kv.key = std::string(trim(line.substr(0, eq)));
    kv.value = std::string(trim(line.substr(eq + 1)));
    if (kv.key.empty()) parse_error(line_no, "empty key");
    if (kv.value.empty()) parse_error(line_no, "empty value for " + kv.key);
    pairs.push_back(std::move(kv));
  }

  // The variant fixes the parameter defaults, so resolve it first.
  Variant variant = Variant::Baseline;
  for (const KeyValue& kv : pairs) {
    if (kv.key == "variant") {
      auto v = variant_from_name(kv.value);
      if (!v) parse_error(kv.line, "unknown variant '" + kv.value + "'");
      variant = *v;
    }
  }
  ScenarioConfig cfg = ScenarioConfig::for_variant(variant);

  for (const KeyValue& kv : pairs) {
    const std::string& k = kv.key;
    if (k == "variant") {
      continue;
    } else if (k == "heartbeat_period") {
      cfg.params.heartbeat_period = to_int(kv);
    } else if (k == "max_missed_heartbeats") {
      cfg.params.max_missed_heartbeats = static_cast<int>(to_int(kv));
    } else if (k == "ping_timeout") {
      cfg.params.ping_timeout = to_int(kv);
    } else if (k == "nrp_timeout") {
      cfg.params.nrp_timeout = to_int(kv);
    } else if (k == "NumberOfNetworks") {
      cfg.params.number_of_networks = static_cast<int>(to_int(kv));
    } else if (k == "MAX_SWITCHES") {
      cfg.params.max_switches = static_cast<ActorId>(to_int(kv));
    } else if (k == "networkDelay") {
      cfg.params.network_delay = to_int(kv);
    } else if (k == "networkDelayForNRPPing") {
      cfg.params.network_delay_for_nrp_ping = to_int(kv);
    } else if (k == "ping_send_offset_primary") {
      cfg.params.ping_send_offset_primary = to_int(kv);
    } else if (k == "ping_send_offset_backup") {
      cfg.params.ping_send_offset_backup = to_int(kv);
    } else if (auto it = fail_time_keys().find(k); it != fail_time_keys().end()) {
      const LogicalTime t = to_int(kv);
      if (t < 0) parse_error(kv.line, "fail times must be >= 0");
      auto& map = it->second > cfg.params.max_switches ? cfg.node_fail_times
                                                       : cfg.switch_fail_times;
      if (t == 0) {
        map.erase(it->second);  // zero means no failure
      } else {
        map[it->second] = t;
      }
    } else if (k == "initial_primary") {
      cfg.initial_primary = static_cast<ActorId>(to_int(kv));
    } else if (k == "event_based_failures") {
      cfg.event_based_failures = to_bool(kv);
    } else if (k == "suppress_heartbeat_periods") {
      cfg.suppress_heartbeat_periods = to_window(kv);
    } else if (k == "abdication_mode") {
      if (kv.value == "failed") {
        cfg.abdication_override = Mode::Failed;
      } else if (kv.value == "waiting") {
        cfg.abdication_override = Mode::Waiting;
      } else {
        parse_error(kv.line, "abdication_mode must be failed or waiting");
      }
    } else if (k == "interleaving") {
      if (kv.value == "priority") {
        cfg.interleaving = InterleavingPolicy::Priority;
      } else if (kv.value == "full") {
        cfg.interleaving = InterleavingPolicy::Full;
      } else {
        parse_error(kv.line, "interleaving must be priority or full");
      }
    } else if (k == "max_states") {
      cfg.limits.max_states = static_cast<std::size_t>(to_int(kv));
    } else if (k == "max_depth") {
      cfg.limits.max_depth = static_cast<std::size_t>(to_int(kv));
    } else {
      throw ConfigError("unknown key '" + k + "' on line " +
                        std::to_string(kv.line));
    }
  }

  cfg.params.validate();
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "variant = " << variant_name(cfg.variant) << '\n';
  os << "heartbeat_period = " << cfg.params.heartbeat_period << '\n';
  os << "max_missed_heartbeats = " << cfg.params.max_missed_heartbeats << '\n';
  os << "ping_timeout = " << cfg.params.ping_timeout << '\n';
  os << "nrp_timeout = " << cfg.params.nrp_timeout << '\n';
  os << "NumberOfNetworks = " << cfg.params.number_of_networks << '\n';
  os << "MAX_SWITCHES = " << cfg.params.max_switches << '\n';
  os << "networkDelay = " << cfg.params.network_delay << '\n';
  os << "networkDelayForNRPPing = " << cfg.params.network_delay_for_nrp_ping
     << '\n';
  os << "ping_send_offset_primary = " << cfg.params.ping_send_offset_primary
     << '\n';
  os << "ping_send_offset_backup = " << cfg.params.ping_send_offset_backup
     << '\n';
  os << "initial_primary = " << cfg.initial_primary << '\n';
  for (const auto& [key, id] : fail_time_keys()) {
    const auto& map =
        id > cfg.params.max_switches ? cfg.node_fail_times : cfg.switch_fail_times;
    if (auto it = map.find(id); it != map.end() && it->second != 0) {
      os << key << " = " << it->second << '\n';
    }
  }
  os << "event_based_failures = "
     << (cfg.event_based_failures ? "true" : "false") << '\n';
  if (cfg.suppress_heartbeat_periods) {
    os << "suppress_heartbeat_periods = " << cfg.suppress_heartbeat_periods->first
       << ".." << cfg.suppress_heartbeat_periods->last << '\n';
  }
  if (cfg.abdication_override) {
    os << "abdication_mode = "
       << (*cfg.abdication_override == Mode::Failed ? "failed" : "waiting")
       << '\n';
  }
  os << "interleaving = " << interleaving_name(cfg.interleaving) << '\n';
  os << "max_states = " << cfg.limits.max_states << '\n';
  os << "max_depth = " << cfg.limits.max_depth << '\n';
  return std::move(os).str();
}

}  // namespace nrpfd
