#include "nrpfd/kernel.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <thread>
#include <unordered_map>

namespace nrpfd {

GlobalState schedule(const ModelContext& ctx, GlobalState state,
                     MessageEnvelope env) {
  if (env.arrival < state.now) {
    throw std::logic_error("cannot schedule an envelope in the past");
  }
  const int idx = ctx.index_of(env.receiver);
  if (idx < 0) {
    throw ModelError(ModelFault::UnknownActor,
                     "receiver " + std::to_string(env.receiver) + " not declared");
  }
  const std::size_t capacity =
      protocol::bag_capacity(state.actors[static_cast<std::size_t>(idx)]);
  if (bag_count_for(state, env.receiver) + 1 > capacity) {
    throw ModelError(ModelFault::BagOverflow,
                     ctx.name_of(env.receiver) + " exceeds its bag capacity of " +
                         std::to_string(capacity) +
                         "; the model should never queue this much");
  }
  bag_insert(state, std::move(env));
  return state;
}

namespace {

bool executable(const GlobalState& state, const MessageEnvelope& e) {
  return !e.deadline || (*e.deadline >= state.now && *e.deadline >= e.arrival);
}

}  // namespace

std::vector<MessageEnvelope> enabled_at_now(const ModelContext& ctx,
                                            const GlobalState& state) {
  LogicalTime min_arrival = 0;
  bool any = false;
  for (const MessageEnvelope& e : state.bag) {
    if (!executable(state, e)) continue;
    if (!any || e.arrival < min_arrival) {
      min_arrival = e.arrival;
      any = true;
    }
  }
  std::vector<MessageEnvelope> enabled;
  if (!any) return enabled;
  for (const MessageEnvelope& e : state.bag) {
    if (executable(state, e) && e.arrival == min_arrival) enabled.push_back(e);
  }
  std::sort(enabled.begin(), enabled.end(),
            [&](const MessageEnvelope& a, const MessageEnvelope& b) {
              const int pa = ctx.priority_of(a.receiver);
              const int pb = ctx.priority_of(b.receiver);
              if (pa != pb) return pa < pb;
              const int ia = ctx.index_of(a.receiver);
              const int ib = ctx.index_of(b.receiver);
              if (ia != ib) return ia < ib;
              if (a.handler != b.handler) return a.handler < b.handler;
              if (a.payload != b.payload) return a.payload < b.payload;
              return a.sender < b.sender;
            });
  return enabled;
}

LogicalTime advance_time(const GlobalState& state) {
  if (state.bag.empty()) {
    throw ModelError(ModelFault::EmptyBag, "no pending envelopes");
  }
  LogicalTime min_arrival = state.bag.front().arrival;
  for (const MessageEnvelope& e : state.bag) {
    min_arrival = std::min(min_arrival, e.arrival);
  }
  return min_arrival;
}

std::pair<GlobalState, TransitionLabel> execute_event(
    const ModelContext& ctx, const GlobalState& state,
    const MessageEnvelope& env, ChoiceStream& choices) {
  GlobalState next = state;
  auto it = std::find(next.bag.begin(), next.bag.end(), env);
  if (it == next.bag.end()) {
    throw std::logic_error("envelope to execute is not in the bag");
  }
  next.bag.erase(it);
  next.now = env.arrival;
  std::erase_if(next.bag, [&](const MessageEnvelope& e) {
    return e.deadline && *e.deadline < next.now;
  });

  const int idx = ctx.index_of(env.receiver);
  if (idx < 0) {
    throw ModelError(ModelFault::UnknownActor,
                     "receiver " + std::to_string(env.receiver) + " not declared");
  }
  protocol::Emissions emitted;
  protocol::apply_handler(ctx.env(), next.actors[static_cast<std::size_t>(idx)],
                          env, choices, emitted);
  for (const protocol::Emission& e : emitted.list) {
    MessageEnvelope m;
    m.sender = env.receiver;
    m.receiver = e.receiver;
    m.handler = e.handler;
    m.payload = e.payload;
    m.arrival = next.now + e.after;
    if (e.deadline_after) m.deadline = next.now + *e.deadline_after;
    next = schedule(ctx, std::move(next), std::move(m));
  }
  return {std::move(next), TransitionLabel{env, choices.consumed()}};
}

GlobalState canonicalize(GlobalState state) {
  const LogicalTime shift = state.now;
  if (shift == 0) return state;
  state.now = 0;
  for (MessageEnvelope& e : state.bag) {
    e.arrival -= shift;
    if (e.deadline) *e.deadline -= shift;
  }
  return state;
}

namespace {

struct Succ {
  GlobalState canon;
  TransitionLabel label;
};

// All successors of a canonical state in deterministic order: enabled
// envelopes (possibly pruned to the front one), each expanded over every
// assignment of its nondeterministic choice points.
std::vector<Succ> successors(const ModelContext& ctx, const GlobalState& state,
                             InterleavingPolicy policy) {
  std::vector<Succ> out;
  std::vector<MessageEnvelope> enabled = enabled_at_now(ctx, state);
  if (enabled.empty()) return out;
  if (policy == InterleavingPolicy::Priority && enabled.size() > 1) {
    enabled.resize(1);
  }
  for (const MessageEnvelope& env : enabled) {
    std::deque<std::vector<bool>> prefixes;
    prefixes.push_back({});
    while (!prefixes.empty()) {
      std::vector<bool> prefix = std::move(prefixes.front());
      prefixes.pop_front();
      ChoiceStream stream = ChoiceStream::probing(prefix);
      auto [succ, label] = execute_event(ctx, state, env, stream);
      // Every bit the probe appended beyond the prefix was false; each such
      // position spawns the sibling prefix with that bit flipped.
      for (std::size_t i = prefix.size(); i < label.choices.size(); ++i) {
        std::vector<bool> alt(label.choices.begin(),
                              label.choices.begin() + static_cast<long>(i));
        alt.push_back(true);
        prefixes.push_back(std::move(alt));
      }
      out.push_back(Succ{canonicalize(std::move(succ)), std::move(label)});
    }
  }
  return out;
}

}  // namespace

ExplorationResult explore(const ModelContext& ctx, const GlobalState& initial,
                          const StateProperty& property, ExploreLimits limits,
                          InterleavingPolicy policy, unsigned workers) {
  const auto started = std::chrono::steady_clock::now();
  ExplorationResult res;

  GlobalState canon = canonicalize(initial);
  const std::uint64_t digest0 = state_digest(canon);
  res.graph.push_back(
      StoredState{std::move(canon), digest0, initial.now, 0, -1, -1, false});

  std::unordered_map<std::uint64_t, std::vector<int>> visited;
  visited[digest0].push_back(0);

  bool stop = false;
  bool depth_limited = false;
  if (!property(res.graph[0].state)) {
    res.graph[0].violating = true;
    res.verdict = Verdict::Violated;
    res.violating_state = 0;
    stop = true;
  }

  std::vector<int> frontier{0};
  while (!stop && !frontier.empty()) {
    std::vector<int> expand;
    expand.reserve(frontier.size());
    for (int sid : frontier) {
      if (res.graph[static_cast<std::size_t>(sid)].depth < limits.max_depth) {
        expand.push_back(sid);
      } else {
        depth_limited = true;
      }
    }
    if (expand.empty()) break;

    // Successor computation is pure, so the frontier can be fanned out to
    // worker threads; the merge below runs in frontier order, which keeps
    // counts and the first-violation choice identical for any worker count.
    std::vector<std::vector<Succ>> succs(expand.size());
    const unsigned nthreads = std::max(1u, std::min<unsigned>(
        workers, static_cast<unsigned>(expand.size())));
    if (nthreads <= 1) {
      for (std::size_t i = 0; i < expand.size(); ++i) {
        succs[i] = successors(
            ctx, res.graph[static_cast<std::size_t>(expand[i])].state, policy);
      }
    } else {
      std::vector<std::exception_ptr> errors(nthreads);
      std::vector<std::thread> pool;
      pool.reserve(nthreads);
      for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
          try {
            for (std::size_t i = t; i < expand.size(); i += nthreads) {
              succs[i] = successors(
                  ctx, res.graph[static_cast<std::size_t>(expand[i])].state,
                  policy);
            }
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
      }
    }

    std::vector<int> next;
    for (std::size_t i = 0; i < expand.size() && !stop; ++i) {
      const int source = expand[i];
      for (Succ& sc : succs[i]) {
        const std::uint64_t digest = state_digest(sc.canon);
        int target = -1;
        if (auto it = visited.find(digest); it != visited.end()) {
          for (int cand : it->second) {
            if (res.graph[static_cast<std::size_t>(cand)].state == sc.canon) {
              target = cand;
              break;
            }
          }
        }
        if (target >= 0) {
          res.edges.push_back(Edge{source, target, std::move(sc.label)});
          continue;
        }
        if (res.graph.size() >= limits.max_states) {
          res.limit = "max_states";
          stop = true;
          break;
        }
        target = static_cast<int>(res.graph.size());
        const StoredState& parent = res.graph[static_cast<std::size_t>(source)];
        StoredState stored;
        stored.digest = digest;
        stored.first_reached = parent.first_reached + sc.label.executed.arrival;
        stored.depth = parent.depth + 1;
        stored.parent_state = source;
        stored.parent_edge = static_cast<int>(res.edges.size());
        res.edges.push_back(Edge{source, target, sc.label});
        stored.state = std::move(sc.canon);
        res.graph.push_back(std::move(stored));
        visited[digest].push_back(target);
        if (!property(res.graph.back().state)) {
          res.graph.back().violating = true;
          res.verdict = Verdict::Violated;
          res.violating_state = target;
          stop = true;
          break;
        }
        next.push_back(target);
      }
    }
    frontier = std::move(next);
  }

  if (res.verdict != Verdict::Violated) {
    if (!res.limit.empty()) {
      res.verdict = Verdict::Unknown;
    } else if (depth_limited) {
      res.verdict = Verdict::Unknown;
      res.limit = "max_depth";
    } else {
      res.verdict = Verdict::Satisfied;
    }
  }
  res.states = res.graph.size();
  res.transitions = res.edges.size();
  res.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return res;
}

}  // namespace nrpfd
