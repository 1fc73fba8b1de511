#include "nrpfd/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace nrpfd {

BoolExpr BoolExpr::atom(std::string name) {
  BoolExpr e;
  e.kind = Kind::Prop;
  e.prop = std::move(name);
  return e;
}

BoolExpr BoolExpr::negation(BoolExpr inner) {
  BoolExpr e;
  e.kind = Kind::Not;
  e.args.push_back(std::move(inner));
  return e;
}

BoolExpr BoolExpr::conjunction(BoolExpr a, BoolExpr b) {
  BoolExpr e;
  e.kind = Kind::And;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

BoolExpr BoolExpr::disjunction(BoolExpr a, BoolExpr b) {
  BoolExpr e;
  e.kind = Kind::Or;
  e.args.push_back(std::move(a));
  e.args.push_back(std::move(b));
  return e;
}

int field_value(const ActorSnapshot& actor, std::string_view field) {
  if (is_node(actor)) {
    const NodeState& n = std::get<NodeState>(actor);
    if (field == "mode") return static_cast<int>(n.mode);
    if (field == "primary") return n.primary;
    if (field == "NRP_network") return n.nrp_network;
    if (field == "NRP_switch_id") return n.nrp_switch_id;
    if (field == "heartbeats_missed_1") return n.heartbeats_missed[0];
    if (field == "heartbeats_missed_2") return n.heartbeats_missed[1];
    if (field == "ping_pending") return n.ping_pending;
    if (field == "NRP_pending") return n.nrp_pending;
    if (field == "become_primary_on_ping_response")
      return n.become_primary_on_ping_response;
    if (field == "init") return n.init;
    if (field == "attacker") return n.attacker;
    if (field == "which") return n.lease_strikes;
    if (field == "prevWhich") return n.prev_lease_flag;
  } else {
    const SwitchState& s = std::get<SwitchState>(actor);
    if (field == "failed") return s.failed;
    if (field == "amINRP") return s.am_i_nrp;
    if (field == "terminal") return s.terminal;
    if (field == "mynetworkId") return s.network_id;
    if (field == "which") return s.last_ping_from_primary;
    if (field == "prevWhich") return s.prev_ping_from_primary;
    if (field == "primary") return s.registered_primary;
  }
  throw ModelError(ModelFault::UnknownField,
                   std::string(is_node(actor) ? "node" : "switch") +
                       " has no field '" + std::string(field) + "'");
}

namespace {

bool compare(FieldTest::Cmp cmp, int lhs, int rhs) {
  switch (cmp) {
    case FieldTest::Cmp::Eq: return lhs == rhs;
    case FieldTest::Cmp::Ne: return lhs != rhs;
    case FieldTest::Cmp::Lt: return lhs < rhs;
    case FieldTest::Cmp::Le: return lhs <= rhs;
    case FieldTest::Cmp::Gt: return lhs > rhs;
    case FieldTest::Cmp::Ge: return lhs >= rhs;
  }
  return false;
}

bool proposition_holds(const ModelContext& ctx, const Proposition& p,
                       const GlobalState& state) {
  bool value = true;
  for (const FieldTest& t : p.conjuncts) {
    const ActorId id = ctx.id_of(t.actor);
    const int idx = id < 0 ? -1 : ctx.index_of(id);
    if (idx < 0) {
      throw ModelError(ModelFault::UnknownActor,
                       "no actor named '" + t.actor + "'");
    }
    const int lhs =
        field_value(state.actors[static_cast<std::size_t>(idx)], t.field);
    value = value && compare(t.cmp, lhs, t.literal);
    if (!value) break;
  }
  return p.negated ? !value : value;
}

bool formula_holds(const ModelContext& ctx, const Assertion& a,
                   const BoolExpr& e, const GlobalState& state) {
  switch (e.kind) {
    case BoolExpr::Kind::Prop: {
      for (const Proposition& p : a.propositions) {
        if (p.name == e.prop) return proposition_holds(ctx, p, state);
      }
      throw ModelError(ModelFault::UnknownField,
                       "assertion references undefined proposition '" + e.prop +
                           "'");
    }
    case BoolExpr::Kind::Not:
      return !formula_holds(ctx, a, e.args[0], state);
    case BoolExpr::Kind::And:
      for (const BoolExpr& arg : e.args) {
        if (!formula_holds(ctx, a, arg, state)) return false;
      }
      return true;
    case BoolExpr::Kind::Or:
      for (const BoolExpr& arg : e.args) {
        if (formula_holds(ctx, a, arg, state)) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

bool evaluate(const ModelContext& ctx, const Assertion& a,
              const GlobalState& state) {
  return formula_holds(ctx, a, a.formula, state);
}

Assertion no_dual_primary() {
  Assertion a;
  a.name = "NoDualPrimary";
  a.propositions.push_back(Proposition{
      "DCN1Primary", {FieldTest{"DCN1", "mode", FieldTest::Cmp::Eq, 1}}, false});
  a.propositions.push_back(Proposition{
      "DCN2Primary", {FieldTest{"DCN2", "mode", FieldTest::Cmp::Eq, 1}}, false});
  a.formula = BoolExpr::negation(BoolExpr::conjunction(
      BoolExpr::atom("DCN1Primary"), BoolExpr::atom("DCN2Primary")));
  return a;
}

StateProperty as_property(const ModelContext& ctx, const Assertion& a) {
  return [&ctx, a](const GlobalState& s) { return evaluate(ctx, a, s); };
}

CounterexampleTrace extract_trace(const ModelContext& ctx,
                                  const GlobalState& initial,
                                  const ExplorationResult& result) {
  if (result.verdict != Verdict::Violated || result.violating_state < 0) {
    throw ModelError(ModelFault::NotViolated,
                     "exploration did not produce a counterexample");
  }
  std::vector<int> edge_path;
  for (int sid = result.violating_state; sid > 0;) {
    const StoredState& s = result.graph[static_cast<std::size_t>(sid)];
    edge_path.push_back(s.parent_edge);
    sid = s.parent_state;
  }
  std::reverse(edge_path.begin(), edge_path.end());

  CounterexampleTrace trace;
  GlobalState real = initial;
  for (const int ei : edge_path) {
    const Edge& edge = result.edges[static_cast<std::size_t>(ei)];
    // Labels live in the source state's canonical frame; the running state's
    // own clock is exactly the shift to undo.
    MessageEnvelope env = edge.label.executed;
    env.arrival += real.now;
    if (env.deadline) *env.deadline += real.now;
    ChoiceStream choices = ChoiceStream::replay(edge.label.choices);
    auto [next, label] = execute_event(ctx, real, env, choices);
    if (!(canonicalize(next) ==
          result.graph[static_cast<std::size_t>(edge.target)].state)) {
      throw std::logic_error("trace replay diverged from the explored graph");
    }
    TraceStep step;
    step.source_digest =
        result.graph[static_cast<std::size_t>(edge.source)].digest;
    step.label = TransitionLabel{env, edge.label.choices};
    step.now = env.arrival;
    step.post = next;
    trace.steps.push_back(std::move(step));
    real = std::move(next);
  }
  trace.violating_state = std::move(real);
  return trace;
}

Stats stats(const ExplorationResult& result) {
  return Stats{result.states, result.transitions, result.verdict,
               result.elapsed_seconds};
}

namespace {

std::string mode_summary(const ModelContext& ctx, const GlobalState& state,
                         char sep) {
  std::ostringstream os;
  bool first = true;
  for (const ActorSnapshot& a : state.actors) {
    if (!is_node(a)) continue;
    if (!first) os << sep;
    first = false;
    const NodeState& n = std::get<NodeState>(a);
    os << ctx.name_of(n.id) << ':' << mode_name(n.mode);
  }
  return std::move(os).str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string payload_text(const std::vector<int>& payload) {
  std::ostringstream os;
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (i) os << ',';
    os << payload[i];
  }
  return std::move(os).str();
}

std::string choices_text(const std::vector<bool>& choices) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i) os << ',';
    os << (choices[i] ? 1 : 0);
  }
  os << ']';
  return std::move(os).str();
}

void dump_actor(std::ostream& os, const ModelContext& ctx,
                const ActorSnapshot& a) {
  if (is_node(a)) {
    const NodeState& n = std::get<NodeState>(a);
    const std::string& name = ctx.name_of(n.id);
    os << name << ".mode=" << mode_name(n.mode) << '\n';
    os << name << ".primary=" << n.primary << '\n';
    os << name << ".NRP_network=" << n.nrp_network << '\n';
    os << name << ".NRP_switch_id=" << n.nrp_switch_id << '\n';
    os << name << ".heartbeats_missed_1=" << n.heartbeats_missed[0] << '\n';
    os << name << ".heartbeats_missed_2=" << n.heartbeats_missed[1] << '\n';
    os << name << ".ping_pending=" << n.ping_pending << '\n';
    os << name << ".NRP_pending=" << n.nrp_pending << '\n';
    os << name << ".become_primary_on_ping_response="
       << n.become_primary_on_ping_response << '\n';
    os << name << ".init=" << n.init << '\n';
    os << name << ".attacker=" << n.attacker << '\n';
    os << name << ".which=" << n.lease_strikes << '\n';
  } else {
    const SwitchState& s = std::get<SwitchState>(a);
    const std::string& name = ctx.name_of(s.id);
    os << name << ".failed=" << s.failed << '\n';
    os << name << ".amINRP=" << s.am_i_nrp << '\n';
    os << name << ".primary=" << s.registered_primary << '\n';
    os << name << ".which=" << s.last_ping_from_primary << '\n';
    os << name << ".prevWhich=" << s.prev_ping_from_primary << '\n';
  }
}

}  // namespace

std::string export_dot(const ModelContext& ctx,
                       const ExplorationResult& result) {
  std::ostringstream os;
  os << "digraph statespace {\n";
  os << "  node [shape=box fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < result.graph.size(); ++i) {
    const StoredState& s = result.graph[i];
    os << "  S" << i << " [label=\"S" << i << "\\n@" << s.first_reached
       << "\\n" << mode_summary(ctx, s.state, ' ') << "\"";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(s.digest));
    os << " tooltip=\"digest=" << buf << "\"";
    if (s.violating) os << " style=filled fillcolor=red";
    os << "];\n";
  }
  for (const Edge& e : result.edges) {
    os << "  S" << e.source << " -> S" << e.target << " [label=\""
       << ctx.name_of(e.label.executed.receiver) << '.'
       << handler_name(e.label.executed.handler) << "\"];\n";
  }
  os << "}\n";
  return std::move(os).str();
}

std::string export_xml(const ModelContext& ctx, const ExplorationResult& result,
                       const std::string& variant, const std::string& scenario) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<statespace variant=\"" << xml_escape(variant) << "\" scenario=\""
     << xml_escape(scenario) << "\" verdict=\"" << verdict_name(result.verdict)
     << "\" states=\"" << result.states << "\" transitions=\""
     << result.transitions << "\">\n";
  for (std::size_t i = 0; i < result.graph.size(); ++i) {
    const StoredState& s = result.graph[i];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(s.digest));
    os << "  <state id=\"S" << i << "\" digest=\"" << buf << "\" now=\""
       << s.first_reached << "\" depth=\"" << s.depth << "\" violating=\""
       << (s.violating ? "true" : "false") << "\" modes=\""
       << xml_escape(mode_summary(ctx, s.state, ' ')) << "\"/>\n";
  }
  for (const Edge& e : result.edges) {
    os << "  <transition source=\"S" << e.source << "\" target=\"S" << e.target
       << "\" receiver=\"" << xml_escape(ctx.name_of(e.label.executed.receiver))
       << "\" handler=\"" << handler_name(e.label.executed.handler)
       << "\" payload=\"" << payload_text(e.label.executed.payload)
       << "\" choices=\"" << xml_escape(choices_text(e.label.choices))
       << "\"/>\n";
  }
  os << "</statespace>\n";
  return std::move(os).str();
}

std::string format_trace(const ModelContext& ctx,
                         const CounterexampleTrace& trace) {
  std::ostringstream os;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& st = trace.steps[i];
    os << "step " << i << " @" << st.now << ' '
       << ctx.name_of(st.label.executed.receiver) << '.'
       << handler_name(st.label.executed.handler) << '('
       << payload_text(st.label.executed.payload) << ") choices="
       << choices_text(st.label.choices) << '\n';
  }
  os << "violating state:\n";
  os << "now=" << trace.violating_state.now << '\n';
  for (const ActorSnapshot& a : trace.violating_state.actors) {
    dump_actor(os, ctx, a);
  }
  return std::move(os).str();
}

}  // namespace nrpfd
