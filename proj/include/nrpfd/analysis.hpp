#pragma once

#include <string>
#include <vector>

#include "nrpfd/kernel.hpp"

namespace nrpfd {

// Atomic state predicate: a conjunction of field comparisons, optionally
// negated. Fields are addressed as <actor>.<field> with the model's variable
// names (DCN1.mode, switchA1.failed, ...).
struct FieldTest {
  enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge };

  std::string actor;
  std::string field;
  Cmp cmp = Cmp::Eq;
  int literal = 0;
};

struct Proposition {
  std::string name;
  std::vector<FieldTest> conjuncts;
  bool negated = false;
};

// Boolean combination of named propositions, read as an invariant over all
// reachable states.
struct BoolExpr {
  enum class Kind { Prop, Not, And, Or };

  Kind kind = Kind::Prop;
  std::string prop;             // Kind::Prop
  std::vector<BoolExpr> args;   // Not: 1 arg; And/Or: 2+

  static BoolExpr atom(std::string name);
  static BoolExpr negation(BoolExpr e);
  static BoolExpr conjunction(BoolExpr a, BoolExpr b);
  static BoolExpr disjunction(BoolExpr a, BoolExpr b);
};

struct Assertion {
  std::string name;
  std::vector<Proposition> propositions;
  BoolExpr formula;
};

// Reads an integer view of any actor field (booleans as 0/1, modes by value).
// Faults with UnknownField for names the actor kind does not have.
int field_value(const ActorSnapshot& actor, std::string_view field);

// Truth value of the assertion in `state`.
// Faults: UnknownActor, UnknownField.
bool evaluate(const ModelContext& ctx, const Assertion& a,
              const GlobalState& state);

// The predefined safety assertion: never both controllers in PRIMARY mode.
Assertion no_dual_primary();

StateProperty as_property(const ModelContext& ctx, const Assertion& a);

struct TraceStep {
  std::uint64_t source_digest = 0;
  TransitionLabel label;       // in the source state's time frame
  LogicalTime now = 0;         // absolute execution instant
  GlobalState post;            // absolute-time state after the step
};

struct CounterexampleTrace {
  std::vector<TraceStep> steps;
  GlobalState violating_state;  // absolute-time
};

// Shortest violating path found by the breadth-first search, replayed from
// the initial state (which both validates the edges and restores absolute
// times). Faults with NotViolated when the result holds.
CounterexampleTrace extract_trace(const ModelContext& ctx,
                                  const GlobalState& initial,
                                  const ExplorationResult& result);

struct Stats {
  std::size_t states = 0;
  std::size_t transitions = 0;
  Verdict verdict = Verdict::Unknown;
  double elapsed_seconds = 0.0;
};

Stats stats(const ExplorationResult& result);

// Graphviz view of the explored graph. Node labels carry the state index,
// absolute time of first discovery and the per-controller modes; violating
// states are flagged red; the digest rides along as a tooltip.
std::string export_dot(const ModelContext& ctx,
                       const ExplorationResult& result);

// Same graph as XML: a root element with run metadata, then one element per
// state and per transition.
std::string export_xml(const ModelContext& ctx, const ExplorationResult& result,
                       const std::string& variant, const std::string& scenario);

// Plain-text rendering: one line per step, then a key=value dump of the
// violating state.
std::string format_trace(const ModelContext& ctx,
                         const CounterexampleTrace& trace);

}  // namespace nrpfd
