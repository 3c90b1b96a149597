#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epsn/bowen.hpp"
#include "epsn/phase_space.hpp"

namespace epsn {

// Undirected graph on candidate indices; {u,v} is an edge iff d_n(u,v) < eps.
// Independent sets are exactly the (eps,n)-separated candidate subsets.
class ClosenessGraph {
 public:
  ClosenessGraph(std::uint32_t vertex_count, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                 double eps, int n);

  std::uint32_t vertex_count() const { return vertex_count_; }
  std::int64_t edge_count() const { return edge_count_; }
  double eps() const { return eps_; }
  int n() const { return n_; }
  bool adjacent(std::uint32_t u, std::uint32_t v) const;
  std::size_t degree(std::uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }
  const std::uint32_t* neighbors_begin(std::uint32_t v) const { return adj_.data() + offsets_[v]; }
  const std::uint32_t* neighbors_end(std::uint32_t v) const { return adj_.data() + offsets_[v + 1]; }

 private:
  std::uint32_t vertex_count_ = 0;
  std::int64_t edge_count_ = 0;
  double eps_ = 0.0;
  int n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adj_;
};

ClosenessGraph closeness_graph(const OrbitTable& table, double eps, int n);

enum class SetStatus { MaximalGreedy, MaximumExact, ClosedForm };

std::string set_status_name(SetStatus s);

struct SearchStats {
  std::int64_t nodes_explored = 0;
  bool completed = true;
};

// A certified (eps,n)-separated candidate subset.
struct SeparatedSet {
  std::vector<std::uint32_t> members;  // candidate indices, sorted
  std::vector<PhasePoint> points;
  double eps = 0.0;
  int n = 0;
  SetStatus status = SetStatus::MaximalGreedy;
  SearchStats stats;
};

SeparatedSet greedy_maximal(const ClosenessGraph& g, const OrbitTable& table,
                            const std::vector<std::uint32_t>& order);

// Branch-and-bound maximum independent set: branch on the highest-degree
// live vertex, bound by a greedy clique partition, deterministic order.
// When the node budget runs out the best incumbent is returned with
// status MaximalGreedy and stats.completed = false.
SeparatedSet exact_maximum(const ClosenessGraph& g, const OrbitTable& table,
                           std::int64_t node_budget);

// Post-condition gate: every pair of the set is (eps,n)-separated.
bool verify_separated(const SystemSpec& sys, const SeparatedSet& s);
bool verify_separated(const SystemSpec& sys, const std::vector<PhasePoint>& points, double eps,
                      int n);

struct InjectionResult {
  bool injection_found = false;
  // matched[i] = index into A for B point i (when injection_found)
  std::vector<std::int32_t> matched;
  // Hall violation witness: indices into B with |N(witness)| < |witness|
  std::vector<std::uint32_t> witness;
  std::size_t witness_neighborhood = 0;
};

// Prop 3 / Marriage Lemma: maximum bipartite matching between B and A with
// b ~ a iff d_n(b, a) < eps. Saturating B yields the injection; otherwise
// the alternating-reachability witness certifies A was not optimal.
InjectionResult hall_injection(const SystemSpec& sys, const SeparatedSet& from_b,
                               const SeparatedSet& to_a);

}  // namespace epsn
