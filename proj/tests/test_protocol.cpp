#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nrpfd/protocol.hpp"
#include "nrpfd/topology.hpp"

using namespace nrpfd;
using protocol::Emissions;

namespace {

ProtocolEnv env_for(Variant v) {
  return ScenarioConfig::for_variant(v).protocol_env();
}

NodeState make_dcn1() {
  NodeState n;
  n.id = 100;
  n.primary = 100;
  n.nrp_candidates = {1, 4};
  n.network_out = {1, 4};
  return n;
}

NodeState make_dcn2() {
  NodeState n;
  n.id = 101;
  n.primary = 100;
  n.nrp_candidates = {3, 6};
  n.network_out = {3, 6};
  return n;
}

NodeState backup_dcn2() {
  NodeState n = make_dcn2();
  n.mode = Mode::Backup;
  n.init = false;
  n.nrp_network = 0;
  n.nrp_switch_id = 1;
  return n;
}

SwitchState make_a1() {
  SwitchState s;
  s.id = 1;
  s.network_id = 0;
  s.terminal = true;
  s.neighbor_toward_low = 2;
  s.neighbor_toward_high = 2;
  s.attached_node = 100;
  return s;
}

SwitchState make_a2() {
  SwitchState s;
  s.id = 2;
  s.network_id = 0;
  s.terminal = false;
  s.neighbor_toward_low = 1;
  s.neighbor_toward_high = 3;
  return s;
}

SwitchState make_a3() {
  SwitchState s;
  s.id = 3;
  s.network_id = 0;
  s.terminal = true;
  s.neighbor_toward_low = 2;
  s.neighbor_toward_high = 2;
  s.attached_node = 101;
  return s;
}

const protocol::Emission& single(const Emissions& out) {
  REQUIRE(out.list.size() == 1);
  return out.list.front();
}

}  // namespace

TEST_CASE("runMe: waiting primary claims the role and announces its NRP") {
  auto env = env_for(Variant::Baseline);
  NodeState n = make_dcn1();
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.mode == Mode::Primary);
  CHECK(n.nrp_network == 0);
  CHECK(n.nrp_switch_id == 1);
  CHECK_FALSE(n.init);
  REQUIRE(out.list.size() == 2);
  CHECK(out.list[0].receiver == 1);
  CHECK(out.list[0].handler == Handler::NewNrp);
  CHECK(out.list[0].payload == std::vector<int>{100, 100, 0, 1});
  CHECK(out.list[1].handler == Handler::RunMe);
  CHECK(out.list[1].after == env.params.heartbeat_period);
}

TEST_CASE("runMe: waiting non-primary becomes backup with no extra sends") {
  auto env = env_for(Variant::Baseline);
  NodeState n = make_dcn2();
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.mode == Mode::Backup);
  CHECK_FALSE(n.init);
  CHECK(single(out).handler == Handler::RunMe);
}

TEST_CASE("runMe: primary pings its NRP and arms the timeout") {
  auto env = env_for(Variant::Baseline);
  NodeState n = make_dcn1();
  n.mode = Mode::Primary;
  n.init = false;
  n.nrp_network = 0;
  n.nrp_switch_id = 1;
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.ping_pending);
  CHECK(n.nrp_pending);
  CHECK(n.attacker == 1);
  REQUIRE(out.list.size() == 3);
  CHECK(out.list[0].receiver == 1);
  CHECK(out.list[0].handler == Handler::PingNrp);
  CHECK(out.list[0].after == 5);
  CHECK(out.list[1].handler == Handler::PingTimedOut);
  CHECK(out.list[1].after == 500);
  CHECK(out.list[2].handler == Handler::RunMe);
}

TEST_CASE("runMe: baseline backup takes over directly on simultaneous timeout") {
  auto env = env_for(Variant::Baseline);
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {2, 2};  // increments to max+1 on both
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.mode == Mode::Primary);
  CHECK(n.primary == 101);
  CHECK(n.heartbeats_missed == std::array<int, 2>{0, 0});
  CHECK(single(out).handler == Handler::RunMe);  // no ping exchange
}

TEST_CASE("runMe: the direct takeover needs equal counters at exactly max+1") {
  auto env = env_for(Variant::Baseline);
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {3, 2};  // (4,3) after increment
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.mode == Mode::Backup);
  CHECK(n.ping_pending);
  CHECK(n.nrp_network == -1);  // baseline wipes the pointer while probing
  REQUIRE(out.list.size() == 3);
  CHECK(out.list[0].receiver == 3);  // out interface of network 0
  CHECK(out.list[0].handler == Handler::PingNrp);
}

TEST_CASE("runMe: leasing backup never takes over directly") {
  auto env = env_for(Variant::Leasing);
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {2, 2};
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.mode == Mode::Backup);
  CHECK(n.ping_pending);
  CHECK(n.nrp_network == 0);  // pointer kept
  REQUIRE(out.list.size() == 3);
  CHECK(out.list[0].handler == Handler::PingNrp);
  CHECK(out.list[0].after == 15);
  CHECK(out.list[1].handler == Handler::PingTimedOut);
  CHECK(out.list[1].after == 100);
}

TEST_CASE("runMe: noopt backup probes the NRP instead of taking over") {
  auto env = env_for(Variant::BaselineNoOpt);
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {2, 2};
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.mode == Mode::Backup);
  CHECK(n.ping_pending);
}

TEST_CASE("runMe: single-network miss pings only when the NRP sits there") {
  auto env = env_for(Variant::Baseline);
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {2, 0};  // network 0 misses, NRP on network 0
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.ping_pending);
  REQUIRE(out.list.size() == 3);
  CHECK(out.list[0].handler == Handler::PingNrp);
  CHECK(out.list[0].after == 5);

  NodeState m = backup_dcn2();
  m.nrp_network = 1;
  m.nrp_switch_id = 6;
  m.heartbeats_missed = {2, 0};  // network 0 misses, NRP elsewhere
  Emissions out2;
  protocol::node_run_me(env, m, out2);
  CHECK_FALSE(m.ping_pending);
  CHECK(single(out2).handler == Handler::RunMe);
  CHECK(m.heartbeats_missed == std::array<int, 2>{3, 1});
}

TEST_CASE("runMe: counters clamp at max+2") {
  auto env = env_for(Variant::Leasing);
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {4, 4};
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n.heartbeats_missed == std::array<int, 2>{4, 4});
}

TEST_CASE("runMe: failed node only reschedules") {
  auto env = env_for(Variant::Baseline);
  NodeState n = make_dcn2();
  protocol::node_fail(n);
  NodeState before = n;
  Emissions out;
  protocol::node_run_me(env, n, out);
  CHECK(n == before);
  CHECK(single(out).handler == Handler::RunMe);
}

TEST_CASE("heartBeat: backup resets the matching counter, others ignore") {
  NodeState n = backup_dcn2();
  n.heartbeats_missed = {2, 1};
  protocol::node_heartbeat(n, 0);
  CHECK(n.heartbeats_missed == std::array<int, 2>{0, 1});

  NodeState p = make_dcn1();
  p.mode = Mode::Primary;
  NodeState before = p;
  protocol::node_heartbeat(p, 0);
  CHECK(p == before);

  NodeState f = make_dcn2();
  protocol::node_fail(f);
  before = f;
  protocol::node_heartbeat(f, 1);
  CHECK(f == before);
}

TEST_CASE("pingNRP_response: leasing strike accounting") {
  auto env = env_for(Variant::Leasing);
  NodeState n = backup_dcn2();

  SUBCASE("fresh lease resets strikes and keeps the ping pending") {
    n.ping_pending = true;
    protocol::node_ping_nrp_response(env, n, {1, 1, 0});
    CHECK(n.lease_strikes == 0);
    CHECK(n.ping_pending);
  }
  SUBCASE("two stale observations clear ping_pending") {
    n.lease_strikes = 1;
    n.ping_pending = true;
    protocol::node_ping_nrp_response(env, n, {1, 0, 0});
    CHECK(n.lease_strikes == 2);
    CHECK_FALSE(n.ping_pending);
  }
  SUBCASE("one stale observation is not enough") {
    n.ping_pending = true;
    protocol::node_ping_nrp_response(env, n, {1, 0, 0});
    CHECK(n.lease_strikes == 1);
    CHECK(n.ping_pending);
  }
}

TEST_CASE("pingNRP_response: baseline backup confirms immediately") {
  auto env = env_for(Variant::Baseline);
  NodeState n = backup_dcn2();
  n.ping_pending = true;
  protocol::node_ping_nrp_response(env, n, {1});
  CHECK_FALSE(n.ping_pending);
  CHECK(n.become_primary_on_ping_response);
}

TEST_CASE("pingNRP_response: primary confirms, waiting and failed ignore") {
  auto env = env_for(Variant::Baseline);
  NodeState p = make_dcn1();
  p.mode = Mode::Primary;
  p.ping_pending = true;
  protocol::node_ping_nrp_response(env, p, {1});
  CHECK_FALSE(p.ping_pending);

  NodeState w = make_dcn1();
  NodeState before = w;
  protocol::node_ping_nrp_response(env, w, {1});
  CHECK(w == before);
}

TEST_CASE("ping_timed_out: unreachable NRP advances to the next candidate") {
  auto env = env_for(Variant::Baseline);
  NodeState n = make_dcn1();
  n.mode = Mode::Primary;
  n.init = false;
  n.nrp_network = 0;
  n.nrp_switch_id = 1;
  n.ping_pending = true;
  Emissions out;
  protocol::node_ping_timed_out(env, n, out);
  CHECK(n.nrp_network == 1);
  CHECK(n.nrp_switch_id == 4);
  CHECK(single(out).receiver == 4);
  CHECK(single(out).handler == Handler::NewNrp);
  CHECK(single(out).payload == std::vector<int>{100, 100, 1, 4});
}

TEST_CASE("ping_timed_out: candidate exhaustion abdicates per variant") {
  NodeState base = make_dcn1();
  base.mode = Mode::Primary;
  base.init = false;
  base.nrp_network = 1;
  base.nrp_switch_id = 4;
  base.ping_pending = true;

  SUBCASE("baseline fails") {
    NodeState n = base;
    Emissions out;
    protocol::node_ping_timed_out(env_for(Variant::Baseline), n, out);
    CHECK(n.mode == Mode::Failed);
    CHECK(n.nrp_network == 2);
    CHECK(out.list.empty());
  }
  SUBCASE("leasing parks in waiting") {
    NodeState n = base;
    Emissions out;
    protocol::node_ping_timed_out(env_for(Variant::Leasing), n, out);
    CHECK(n.mode == Mode::Waiting);
    CHECK(n.nrp_network == 2);
  }
  SUBCASE("a config override wins") {
    NodeState n = base;
    auto env = env_for(Variant::Baseline);
    env.abdication_override = Mode::Waiting;
    Emissions out;
    protocol::node_ping_timed_out(env, n, out);
    CHECK(n.mode == Mode::Waiting);
  }
}

TEST_CASE("ping_timed_out: confirmed NRP releases the heartbeats") {
  auto env = env_for(Variant::Baseline);
  NodeState n = make_dcn1();
  n.mode = Mode::Primary;
  n.init = false;
  n.nrp_network = 0;
  n.nrp_switch_id = 1;
  n.ping_pending = false;
  Emissions out;
  protocol::node_ping_timed_out(env, n, out);
  REQUIRE(out.list.size() == 2);
  CHECK(out.list[0].receiver == 1);
  CHECK(out.list[0].payload == std::vector<int>{0, 100});
  CHECK(out.list[0].after == env.params.network_delay);
  CHECK(out.list[1].receiver == 4);
  CHECK(out.list[1].payload == std::vector<int>{1, 100});
}

TEST_CASE("ping_timed_out: the suppression window holds heartbeats back") {
  auto env = env_for(Variant::Baseline);
  env.suppress_heartbeats = PeriodWindow{1, 3};
  NodeState n = make_dcn1();
  n.mode = Mode::Primary;
  n.init = false;
  n.nrp_network = 0;
  n.nrp_switch_id = 1;

  n.attacker = 2;  // inside the window
  Emissions out;
  protocol::node_ping_timed_out(env, n, out);
  CHECK(out.list.empty());

  n.attacker = 4;  // window over, delivery resumes
  Emissions out2;
  protocol::node_ping_timed_out(env, n, out2);
  CHECK(out2.list.size() == 2);
}

TEST_CASE("ping_timed_out: backup without a response stays backup") {
  auto env = env_for(Variant::Baseline);
  NodeState n = backup_dcn2();
  n.ping_pending = true;
  Emissions out;
  protocol::node_ping_timed_out(env, n, out);
  CHECK(n.mode == Mode::Backup);
  CHECK_FALSE(n.ping_pending);
  CHECK(out.list.empty());
}

TEST_CASE("ping_timed_out: baseline backup with a response takes over") {
  auto env = env_for(Variant::Baseline);
  NodeState n = backup_dcn2();
  n.ping_pending = false;
  n.become_primary_on_ping_response = true;
  n.heartbeats_missed = {3, 3};
  Emissions out;
  protocol::node_ping_timed_out(env, n, out);
  CHECK(n.mode == Mode::Primary);
  CHECK(n.primary == 101);
  CHECK(n.heartbeats_missed == std::array<int, 2>{0, 0});
  CHECK_FALSE(n.become_primary_on_ping_response);
  CHECK(out.list.empty());
}

TEST_CASE("ping_timed_out: leasing backup needs two strikes, then announces") {
  auto env = env_for(Variant::Leasing);

  SUBCASE("strikes below the bar keep it backup") {
    NodeState n = backup_dcn2();
    n.ping_pending = false;
    n.lease_strikes = 1;
    Emissions out;
    protocol::node_ping_timed_out(env, n, out);
    CHECK(n.mode == Mode::Backup);
    CHECK(out.list.empty());
  }
  SUBCASE("two strikes promote and announce over the NRP network") {
    NodeState n = backup_dcn2();
    n.ping_pending = false;
    n.lease_strikes = 2;
    Emissions out;
    protocol::node_ping_timed_out(env, n, out);
    CHECK(n.mode == Mode::Primary);
    CHECK(single(out).handler == Handler::NewNrpBack);
    CHECK(single(out).receiver == 3);
    CHECK(single(out).payload == std::vector<int>{101, 101, 0, 1});
  }
}

TEST_CASE("new_NRP: live nodes adopt the announcement, failed ones do not") {
  NodeState n = backup_dcn2();
  protocol::node_new_nrp(n, {3, 100, 1, 4});
  CHECK(n.nrp_network == 1);
  CHECK(n.nrp_switch_id == 4);

  NodeState f = make_dcn2();
  protocol::node_fail(f);
  NodeState before = f;
  protocol::node_new_nrp(f, {3, 100, 0, 1});
  CHECK(f == before);
}

TEST_CASE("new_NRP_request_timed_out: clears pending flags on backups only") {
  NodeState n = backup_dcn2();
  n.nrp_pending = true;
  n.become_primary_on_ping_response = true;
  protocol::node_new_nrp_request_timed_out(n);
  CHECK_FALSE(n.nrp_pending);
  CHECK_FALSE(n.become_primary_on_ping_response);

  NodeState p = make_dcn1();
  p.mode = Mode::Primary;
  p.nrp_pending = true;
  protocol::node_new_nrp_request_timed_out(p);
  CHECK(p.nrp_pending);

  NodeState q = backup_dcn2();
  q.nrp_pending = false;
  NodeState before = q;
  protocol::node_new_nrp_request_timed_out(q);
  CHECK(q == before);
}

TEST_CASE("nodeFail: clears the role state and is idempotent") {
  NodeState n = make_dcn1();
  n.mode = Mode::Primary;
  n.nrp_network = 0;
  n.nrp_switch_id = 1;
  n.heartbeats_missed = {2, 1};
  protocol::node_fail(n);
  CHECK(n.mode == Mode::Failed);
  CHECK(n.primary == -1);
  CHECK(n.nrp_network == -1);
  CHECK(n.nrp_switch_id == -1);
  CHECK(n.heartbeats_missed == std::array<int, 2>{0, 0});
  NodeState again = n;
  protocol::node_fail(again);
  CHECK(again == n);
}

TEST_CASE("switch routing: heartbeat from a node enters the chain") {
  auto env = env_for(Variant::Baseline);
  SwitchState a1 = make_a1();
  Emissions out;
  protocol::switch_forward(env, a1, Handler::HeartBeat, {0, 100}, out);
  CHECK(single(out).receiver == 2);
  CHECK(single(out).payload == std::vector<int>{0, 1});
  CHECK(single(out).after == env.params.network_delay);
}

TEST_CASE("switch routing: terminal delivers a chain heartbeat to its node") {
  auto env = env_for(Variant::Baseline);
  SwitchState a3 = make_a3();
  Emissions out;
  protocol::switch_forward(env, a3, Handler::HeartBeat, {0, 2}, out);
  CHECK(single(out).receiver == 101);
  CHECK(single(out).after == env.params.network_delay);
}

TEST_CASE("switch routing: failed switches absorb silently") {
  auto env = env_for(Variant::Baseline);
  SwitchState a1 = make_a1();
  a1.failed = true;
  Emissions out;
  protocol::switch_forward(env, a1, Handler::HeartBeat, {0, 100}, out);
  CHECK(out.list.empty());
}

TEST_CASE("new_NRP at a switch: the named switch claims NRP duty") {
  auto env = env_for(Variant::Baseline);
  SwitchState a1 = make_a1();
  Emissions out;
  protocol::switch_forward(env, a1, Handler::NewNrp, {100, 100, 0, 1}, out);
  CHECK(a1.am_i_nrp);
  CHECK(a1.registered_primary == 100);
  CHECK(single(out).receiver == 2);  // announcement still travels on

  SwitchState a2 = make_a2();
  a2.am_i_nrp = true;
  Emissions out2;
  protocol::switch_forward(env, a2, Handler::NewNrp, {1, 100, 0, 1}, out2);
  CHECK_FALSE(a2.am_i_nrp);  // someone else was named
  CHECK(single(out2).receiver == 3);
}

TEST_CASE("pingNRP: the NRP answers and stamps the lease") {
  auto env = env_for(Variant::Leasing);
  SwitchState a1 = make_a1();
  a1.am_i_nrp = true;
  a1.registered_primary = 100;

  // primary pings directly: lease fresh
  Emissions out;
  protocol::switch_ping_nrp(env, a1, {100, 100, 1}, out);
  CHECK(a1.last_ping_from_primary);
  CHECK(single(out).receiver == 100);
  CHECK(single(out).payload == std::vector<int>{1, 1, 1});

  // backup pings via the chain right after: now stale, previously fresh
  Emissions out2;
  protocol::switch_ping_nrp(env, a1, {2, 101, 1}, out2);
  CHECK_FALSE(a1.last_ping_from_primary);
  CHECK(a1.prev_ping_from_primary);
  CHECK(single(out2).receiver == 2);  // response passes back into the chain
  CHECK(single(out2).payload == std::vector<int>{1, 0, 1});
}

TEST_CASE("pingNRP: baseline responses carry no lease flags") {
  auto env = env_for(Variant::Baseline);
  SwitchState a1 = make_a1();
  Emissions out;
  protocol::switch_ping_nrp(env, a1, {100, 100, 1}, out);
  CHECK(single(out).payload == std::vector<int>{1});
  CHECK(a1.last_ping_from_primary);  // untouched in baseline
}

TEST_CASE("pingNRP: a failed NRP stays silent") {
  auto env = env_for(Variant::Baseline);
  SwitchState a1 = make_a1();
  a1.failed = true;
  Emissions out;
  protocol::switch_ping_nrp(env, a1, {100, 100, 1}, out);
  CHECK(out.list.empty());
}

TEST_CASE("pingNRP: non-NRP switches route toward the target") {
  auto env = env_for(Variant::Baseline);
  SwitchState a2 = make_a2();
  Emissions out;
  protocol::switch_ping_nrp(env, a2, {3, 101, 1}, out);
  CHECK(single(out).receiver == 1);
  CHECK(single(out).payload == std::vector<int>{2, 101, 1});
}

TEST_CASE("two leasing periods keep the backup's strikes at zero") {
  // One heartbeat period of the transient scenario, twice: the primary's
  // ping lands before the backup's, so the lease the backup reads is always
  // fresh-or-previous and its strike counter stays at zero.
  auto env = env_for(Variant::Leasing);
  SwitchState nrp = make_a1();
  nrp.am_i_nrp = true;
  nrp.registered_primary = 100;
  NodeState backup = backup_dcn2();
  for (int period = 0; period < 2; ++period) {
    Emissions ignored;
    protocol::switch_ping_nrp(env, nrp, {100, 100, 1}, ignored);  // primary @+5
    Emissions response;
    protocol::switch_ping_nrp(env, nrp, {2, 101, 1}, response);   // backup @+15
    backup.ping_pending = true;
    protocol::node_ping_nrp_response(env, backup, single(response).payload);
    CHECK(backup.lease_strikes == 0);
    Emissions after;
    protocol::node_ping_timed_out(env, backup, after);
    CHECK(backup.mode == Mode::Backup);
  }
}

TEST_CASE("pingNRP_response: pass-back routing") {
  auto env = env_for(Variant::Baseline);
  SwitchState a3 = make_a3();
  Emissions out;
  protocol::switch_ping_nrp_response(env, a3, {2, 1, 1}, out);
  CHECK(single(out).receiver == 101);

  SwitchState a2 = make_a2();
  Emissions out2;
  protocol::switch_ping_nrp_response(env, a2, {1, 1, 1}, out2);
  CHECK(single(out2).receiver == 3);

  SwitchState failed = make_a2();
  failed.failed = true;
  Emissions out3;
  protocol::switch_ping_nrp_response(env, failed, {1, 1, 1}, out3);
  CHECK(out3.list.empty());
}

TEST_CASE("switchFail: drops NRP duty and is idempotent") {
  SwitchState s = make_a1();
  s.am_i_nrp = true;
  protocol::switch_fail(s);
  CHECK(s.failed);
  CHECK_FALSE(s.am_i_nrp);
  SwitchState again = s;
  protocol::switch_fail(again);
  CHECK(again == s);
}

TEST_CASE("declared queue bounds") {
  CHECK(protocol::bag_capacity(ActorSnapshot{make_dcn1()}) == 4);
  CHECK(protocol::bag_capacity(ActorSnapshot{make_a1()}) == 10);
}
