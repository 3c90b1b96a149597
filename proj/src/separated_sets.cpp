#include "epsn/separated_sets.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numeric>

namespace epsn {

ClosenessGraph::ClosenessGraph(std::uint32_t vertex_count,
                               std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                               double eps, int n)
    : vertex_count_(vertex_count), eps_(eps), n_(n) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edge_count_ = static_cast<std::int64_t>(edges.size());
  std::vector<std::size_t> deg(vertex_count_ + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u == v) throw Error("closeness graph has a self-loop");
    ++deg[u];
    ++deg[v];
  }
  offsets_.assign(vertex_count_ + 1, 0);
  for (std::uint32_t v = 0; v < vertex_count_; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adj_.assign(offsets_[vertex_count_], 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
  for (std::uint32_t v = 0; v < vertex_count_; ++v)
    std::sort(adj_.begin() + offsets_[v], adj_.begin() + offsets_[v + 1]);
}

bool ClosenessGraph::adjacent(std::uint32_t u, std::uint32_t v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  return std::binary_search(neighbors_begin(u), neighbors_end(u), v);
}

ClosenessGraph closeness_graph(const OrbitTable& table, double eps, int n) {
  if (!(eps >= 0.0)) throw Error("closeness graph needs eps >= 0");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  if (eps > 0.0)
    table.for_each_conflict(eps, n, [&](std::uint32_t u, std::uint32_t v, double) {
      edges.emplace_back(u, v);
    });
  return ClosenessGraph(static_cast<std::uint32_t>(table.size()), std::move(edges), eps, n);
}

std::string set_status_name(SetStatus s) {
  switch (s) {
    case SetStatus::MaximalGreedy:
      return "maximal-greedy";
    case SetStatus::MaximumExact:
      return "maximum-exact";
    case SetStatus::ClosedForm:
      return "closed-form";
  }
  return "?";
}

namespace {

SeparatedSet make_set(const ClosenessGraph& g, const OrbitTable& table,
                      std::vector<std::uint32_t> members, SetStatus status, SearchStats stats) {
  std::sort(members.begin(), members.end());
  SeparatedSet s;
  s.points.reserve(members.size());
  for (auto v : members) s.points.push_back(table.point(v));
  s.members = std::move(members);
  s.eps = g.eps();
  s.n = g.n();
  s.status = status;
  s.stats = stats;
  return s;
}

// Component subgraph in local ids 0..n-1 (ascending global order).
struct LocalGraph {
  std::size_t n = 0;
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> adj;

  std::size_t degree(std::uint32_t v) const { return offsets[v + 1] - offsets[v]; }
  const std::uint32_t* begin(std::uint32_t v) const { return adj.data() + offsets[v]; }
  const std::uint32_t* end(std::uint32_t v) const { return adj.data() + offsets[v + 1]; }
  bool adjacent(std::uint32_t u, std::uint32_t v) const {
    if (degree(u) > degree(v)) std::swap(u, v);
    return std::binary_search(begin(u), end(u), v);
  }
};

// Branch-and-bound maximum independent set on one component: greedy
// incumbent by index order, greedy clique-partition bound, branch on the
// highest-degree live vertex.
class MisSolver {
 public:
  MisSolver(const LocalGraph& g, std::int64_t budget) : g_(g), budget_(budget) {
    blocked_.assign(g_.n, 0);
    in_live_.assign(g_.n, 0);
  }

  std::vector<std::uint32_t> run() {
    std::vector<std::uint32_t> all(g_.n);
    std::iota(all.begin(), all.end(), 0u);
    chosen_.clear();
    best_.clear();
    recurse(std::move(all));
    return best_;
  }

  SearchStats stats() const { return {nodes_, completed_}; }

 private:
  std::size_t greedy_size(const std::vector<std::uint32_t>& live,
                          std::vector<std::uint32_t>* out) {
    for (auto v : live) blocked_[v] = 0;
    std::size_t picked = 0;
    for (auto v : live) {
      if (blocked_[v]) continue;
      ++picked;
      if (out) out->push_back(v);
      for (auto it = g_.begin(v); it != g_.end(v); ++it) blocked_[*it] = 1;
    }
    return picked;
  }

  std::size_t clique_bound(const std::vector<std::uint32_t>& live) {
    cliques_.clear();
    for (auto v : live) {
      bool placed = false;
      for (std::size_t c = cliques_.size(); c-- > 0;) {
        bool fits = true;
        for (auto u : cliques_[c])
          if (!g_.adjacent(u, v)) {
            fits = false;
            break;
          }
        if (fits) {
          cliques_[c].push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) cliques_.push_back({v});
    }
    return cliques_.size();
  }

  void recurse(std::vector<std::uint32_t> live) {
    if (nodes_ >= budget_) {
      completed_ = false;
      return;
    }
    ++nodes_;
    if (live.empty()) {
      if (chosen_.size() > best_.size()) best_ = chosen_;
      return;
    }
    std::size_t mark = chosen_.size();
    std::size_t greedy = greedy_size(live, nullptr);
    if (mark + greedy > best_.size()) {
      best_ = chosen_;
      greedy_size(live, &best_);
    }
    if (mark + clique_bound(live) <= best_.size()) return;
    // branch vertex: max live degree, smallest index on ties
    for (auto v : live) in_live_[v] = 1;
    std::uint32_t pick = live.front();
    std::size_t pick_deg = 0;
    for (auto v : live) {
      std::size_t d = 0;
      for (auto it = g_.begin(v); it != g_.end(v); ++it) d += in_live_[*it];
      if (d > pick_deg) {
        pick = v;
        pick_deg = d;
      }
    }
    for (auto v : live) in_live_[v] = 0;
    {
      for (auto it = g_.begin(pick); it != g_.end(pick); ++it) blocked_[*it] = 1;
      blocked_[pick] = 1;
      std::vector<std::uint32_t> next;
      next.reserve(live.size());
      for (auto v : live)
        if (!blocked_[v]) next.push_back(v);
      for (auto it = g_.begin(pick); it != g_.end(pick); ++it) blocked_[*it] = 0;
      blocked_[pick] = 0;
      chosen_.push_back(pick);
      recurse(std::move(next));
      chosen_.pop_back();
    }
    {
      std::vector<std::uint32_t> next;
      next.reserve(live.size() - 1);
      for (auto v : live)
        if (v != pick) next.push_back(v);
      recurse(std::move(next));
    }
  }

  const LocalGraph& g_;
  std::int64_t budget_ = 0;
  std::int64_t nodes_ = 0;
  bool completed_ = true;
  std::vector<std::uint32_t> best_;
  std::vector<std::uint32_t> chosen_;
  std::vector<std::uint8_t> blocked_;
  std::vector<std::uint8_t> in_live_;
  std::vector<std::vector<std::uint32_t>> cliques_;
};

}  // namespace

SeparatedSet greedy_maximal(const ClosenessGraph& g, const OrbitTable& table,
                            const std::vector<std::uint32_t>& order) {
  if (order.size() != g.vertex_count()) throw Error("greedy order must be a permutation");
  std::vector<std::uint8_t> chosen(g.vertex_count(), 0);
  std::vector<std::uint32_t> members;
  for (auto v : order) {
    if (v >= g.vertex_count()) throw Error("greedy order index out of range");
    if (table.flagged(v)) continue;
    bool blocked = false;
    for (auto it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it)
      if (chosen[*it]) {
        blocked = true;
        break;
      }
    if (!blocked) {
      chosen[v] = 1;
      members.push_back(v);
    }
  }
  return make_set(g, table, std::move(members), SetStatus::MaximalGreedy, SearchStats{});
}

SeparatedSet exact_maximum(const ClosenessGraph& g, const OrbitTable& table,
                           std::int64_t node_budget) {
  if (node_budget < 1) throw Error("exact_maximum needs node_budget >= 1");
  const std::uint32_t V = g.vertex_count();
  std::vector<std::int32_t> comp_of(V, -1);
  std::vector<std::vector<std::uint32_t>> components;
  for (std::uint32_t s = 0; s < V; ++s) {
    if (comp_of[s] >= 0 || table.flagged(s)) continue;
    auto id = static_cast<std::int32_t>(components.size());
    components.emplace_back();
    std::deque<std::uint32_t> queue{s};
    comp_of[s] = id;
    while (!queue.empty()) {
      std::uint32_t v = queue.front();
      queue.pop_front();
      components[id].push_back(v);
      for (auto it = g.neighbors_begin(v); it != g.neighbors_end(v); ++it) {
        if (comp_of[*it] >= 0 || table.flagged(*it)) continue;
        comp_of[*it] = id;
        queue.push_back(*it);
      }
    }
    std::sort(components[id].begin(), components[id].end());
  }

  std::vector<std::uint32_t> members;
  SearchStats total;
  std::vector<std::int32_t> local_id(V, -1);
  for (const auto& comp : components) {
    if (comp.size() == 1) {
      members.push_back(comp[0]);
      continue;
    }
    std::int64_t remaining = node_budget - total.nodes_explored;
    if (remaining <= 0) {
      // budget exhausted: greedy-by-index completion stays a valid set
      total.completed = false;
      std::vector<std::uint32_t> picked;
      for (auto v : comp) {
        bool blocked = false;
        for (auto u : picked)
          if (g.adjacent(u, v)) {
            blocked = true;
            break;
          }
        if (!blocked) picked.push_back(v);
      }
      members.insert(members.end(), picked.begin(), picked.end());
      continue;
    }
    LocalGraph local;
    local.n = comp.size();
    for (std::size_t i = 0; i < comp.size(); ++i)
      local_id[comp[i]] = static_cast<std::int32_t>(i);
    local.offsets.assign(local.n + 1, 0);
    for (std::size_t i = 0; i < comp.size(); ++i)
      local.offsets[i + 1] = local.offsets[i] + g.degree(comp[i]);
    local.adj.reserve(local.offsets[local.n]);
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (auto it = g.neighbors_begin(comp[i]); it != g.neighbors_end(comp[i]); ++it)
        local.adj.push_back(static_cast<std::uint32_t>(local_id[*it]));
    MisSolver solver(local, remaining);
    auto part = solver.run();
    auto st = solver.stats();
    total.nodes_explored += st.nodes_explored;
    if (!st.completed) total.completed = false;
    for (auto v : part) members.push_back(comp[v]);
    for (auto v : comp) local_id[v] = -1;
  }
  SetStatus status = total.completed ? SetStatus::MaximumExact : SetStatus::MaximalGreedy;
  return make_set(g, table, std::move(members), status, total);
}

bool verify_separated(const SystemSpec& sys, const std::vector<PhasePoint>& points, double eps,
                      int n) {
  if (points.size() < 2) return true;
  if (!(eps > 0.0)) return true;  // every pair is (0,n)-separated
  OrbitTable table(sys, points, n);
  if (table.flagged_count() > 0)
    throw SingularOrbitError("separated-set member has a singular orbit");
  bool ok = true;
  table.for_each_conflict(eps, n, [&](std::uint32_t, std::uint32_t, double) { ok = false; });
  return ok;
}

bool verify_separated(const SystemSpec& sys, const SeparatedSet& s) {
  return verify_separated(sys, s.points, s.eps, s.n);
}

InjectionResult hall_injection(const SystemSpec& sys, const SeparatedSet& from_b,
                               const SeparatedSet& to_a) {
  if (from_b.eps != to_a.eps || from_b.n != to_a.n)
    throw MismatchedParametersError("hall_injection requires matching (eps, n)");
  const std::size_t na = to_a.points.size();
  const std::size_t nb = from_b.points.size();
  std::vector<PhasePoint> combined;
  combined.reserve(na + nb);
  combined.insert(combined.end(), to_a.points.begin(), to_a.points.end());
  combined.insert(combined.end(), from_b.points.begin(), from_b.points.end());
  OrbitTable table(sys, std::move(combined), to_a.n);
  std::vector<std::vector<std::int32_t>> adj(nb);  // b -> list of a
  table.for_each_conflict(to_a.eps, to_a.n, [&](std::uint32_t u, std::uint32_t v, double) {
    if (u < na && v >= na)
      adj[v - na].push_back(static_cast<std::int32_t>(u));
    else if (v < na && u >= na)
      adj[u - na].push_back(static_cast<std::int32_t>(v));
  });
  for (auto& row : adj) std::sort(row.begin(), row.end());

  // Hopcroft-Karp over B (left) and A (right)
  const std::int32_t NIL = -1;
  const std::int32_t INF = std::numeric_limits<std::int32_t>::max();
  std::vector<std::int32_t> match_b(nb, NIL), match_a(na, NIL), dist(nb, 0);
  auto bfs = [&]() {
    std::deque<std::int32_t> queue;
    for (std::size_t b = 0; b < nb; ++b) {
      if (match_b[b] == NIL) {
        dist[b] = 0;
        queue.push_back(static_cast<std::int32_t>(b));
      } else {
        dist[b] = INF;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      std::int32_t b = queue.front();
      queue.pop_front();
      for (std::int32_t a : adj[b]) {
        std::int32_t b2 = match_a[a];
        if (b2 == NIL) {
          found = true;
        } else if (dist[b2] == INF) {
          dist[b2] = dist[b] + 1;
          queue.push_back(b2);
        }
      }
    }
    return found;
  };
  std::function<bool(std::int32_t)> dfs = [&](std::int32_t b) {
    for (std::int32_t a : adj[b]) {
      std::int32_t b2 = match_a[a];
      if (b2 == NIL || (dist[b2] == dist[b] + 1 && dfs(b2))) {
        match_b[b] = a;
        match_a[a] = b;
        return true;
      }
    }
    dist[b] = INF;
    return false;
  };
  std::size_t matched = 0;
  while (bfs()) {
    for (std::size_t b = 0; b < nb; ++b)
      if (match_b[b] == NIL && dfs(static_cast<std::int32_t>(b))) ++matched;
  }

  InjectionResult out;
  if (matched == nb) {
    out.injection_found = true;
    out.matched = match_b;
    return out;
  }
  // Hall witness: alternating reachability from unmatched B vertices
  std::vector<std::uint8_t> seen_b(nb, 0), seen_a(na, 0);
  std::deque<std::int32_t> queue;
  for (std::size_t b = 0; b < nb; ++b)
    if (match_b[b] == NIL) {
      seen_b[b] = 1;
      queue.push_back(static_cast<std::int32_t>(b));
    }
  while (!queue.empty()) {
    std::int32_t b = queue.front();
    queue.pop_front();
    for (std::int32_t a : adj[b]) {
      if (seen_a[a]) continue;
      seen_a[a] = 1;
      std::int32_t b2 = match_a[a];
      if (b2 != NIL && !seen_b[b2]) {
        seen_b[b2] = 1;
        queue.push_back(b2);
      }
    }
  }
  for (std::size_t b = 0; b < nb; ++b)
    if (seen_b[b]) out.witness.push_back(static_cast<std::uint32_t>(b));
  out.witness_neighborhood = static_cast<std::size_t>(std::count(seen_a.begin(), seen_a.end(), 1));
  return out;
}

}  // namespace epsn
