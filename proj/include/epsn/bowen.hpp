#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epsn/phase_space.hpp"

namespace epsn {

// [p, f p, ..., f^{n-1} p]. Throws SingularOrbitError if the orbit enters S
// before the last entry.
std::vector<PhasePoint> orbit(const SystemSpec& sys, const PhasePoint& p, int n);

// d_n(x, y) = max_{0 <= i < n} d(f^i x, f^i y).
double bowen_distance(const SystemSpec& sys, const PhasePoint& x, const PhasePoint& y, int n);

// d_n(x, y) >= eps, non-strict.
bool is_separated(const SystemSpec& sys, const PhasePoint& x, const PhasePoint& y, double eps,
                  int n);

// Precomputed orbits for a candidate list. Immutable after construction;
// this is the hot path for every pairwise d_n query.
class OrbitTable {
 public:
  OrbitTable(const SystemSpec& sys, std::vector<PhasePoint> points, int n_max);

  const SystemSpec& system() const { return sys_; }
  int horizon() const { return n_max_; }
  std::size_t size() const { return points_.size(); }
  const PhasePoint& point(std::size_t i) const { return points_[i]; }
  const std::vector<PhasePoint>& points() const { return points_; }
  bool flagged(std::size_t i) const { return flagged_[i] != 0; }
  std::size_t flagged_count() const { return flagged_count_; }

  double base_distance(std::size_t i, std::size_t j) const;
  double bowen(std::size_t i, std::size_t j, int n) const;
  // Largest n in [1, n_max] with d_n <= eps; 0 if already d_1 > eps.
  int conflict_horizon(std::size_t i, std::size_t j, double eps) const;

  using PairFn = std::function<void(std::uint32_t, std::uint32_t, double)>;
  // Unordered pairs (i < j) of unflagged points with d < eps (strict) or
  // d <= eps; callback receives the base distance.
  void for_each_base_close(double eps, bool strict, const PairFn& fn) const;
  // Pairs with d_n < eps (the closeness relation). Exact: window/prefix
  // pruning only ever discards pairs with d >= eps >= ... > d_n bound.
  void for_each_conflict(double eps, int n, const PairFn& fn) const;

 private:
  void scan_real_pairs(double eps, bool strict, const PairFn& fn) const;
  void scan_word_pairs(int prefix, const PairFn& fn) const;

  SystemSpec sys_;
  std::vector<PhasePoint> points_;
  int n_max_ = 0;
  bool symbolic_ = false;
  std::vector<double> coords_;        // row-major [i * n_max + t]
  std::vector<std::int32_t> labels_;  // two-circle only
  std::vector<WordPoint> words_;
  std::vector<std::uint8_t> flagged_;
  std::size_t flagged_count_ = 0;
  std::vector<std::uint32_t> sorted_;  // unflagged indices sorted by base key
};

struct ExpansivityProfile {
  double eps = 0.0;
  std::vector<double> delta_hat;             // index n-1 -> delta_hat_n
  std::vector<std::int64_t> pairs_checked;   // pairs with d_n <= eps per n
  std::string sample;
};

// Sampled lower bound for the uniform-expansivity sequence delta_n:
// delta_hat_n = max{ d(x,y) : d_n(x,y) <= eps } over candidate pairs.
ExpansivityProfile expansivity_profile(const OrbitTable& table, double eps, int n_max);

struct ContinuityModulus {
  std::vector<std::pair<double, double>> eta;  // (sigma, eta_hat(sigma))
  std::int64_t pairs_checked = 0;
};

// eta_hat(sigma) = max d(fx, fy) over pairs with d(x,y) <= sigma and both
// points at distance >= delta from S.
ContinuityModulus continuity_modulus(const OrbitTable& table, const std::vector<double>& sigmas,
                                     double delta);

}  // namespace epsn
