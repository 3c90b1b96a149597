#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "epsn/errors.hpp"

namespace epsn {

enum class SystemKind { Doubling, Rotation, TwoCircle, Iet, Sft };

struct IetData {
  std::vector<double> breakpoints;   // a_0 = 0 < a_1 < ... < a_m = 1
  std::vector<double> translations;  // c_0 .. c_{m-1}
  int interval_count() const { return static_cast<int>(translations.size()); }
};

struct SftData {
  int alphabet = 0;
  std::vector<std::uint8_t> transitions;  // row-major p*p of {0,1}
  bool admissible(int from, int to) const {
    return transitions[static_cast<std::size_t>(from) * alphabet + to] != 0;
  }
};

// Tagged description of one of the five built-in dynamical systems.
class SystemSpec {
 public:
  static SystemSpec doubling();
  static SystemSpec rotation(double alpha);
  static SystemSpec two_circle();
  static SystemSpec iet(std::vector<double> breakpoints, std::vector<double> translations);
  static SystemSpec sft(int alphabet, std::vector<std::uint8_t> transitions);

  SystemKind kind() const { return kind_; }
  const IetData& iet_data() const { return iet_; }
  const SftData& sft_data() const { return sft_; }
  double rotation_alpha() const { return alpha_; }
  std::string describe() const;

  bool has_singular_set() const { return kind_ == SystemKind::Iet; }

 private:
  SystemSpec() = default;
  SystemKind kind_ = SystemKind::Doubling;
  IetData iet_;
  SftData sft_;
  double alpha_ = 0.0;
};

struct CirclePoint {
  double x;  // in [0,1)
};

struct LabeledPoint {
  int label;  // 0 or 1
  double x;   // in [0,1)
};

// Finite symbolic word with an explicit horizon. Shifting is O(1): the
// symbol storage is shared and immutable.
class WordPoint {
 public:
  WordPoint() = default;
  explicit WordPoint(std::vector<std::uint8_t> symbols);
  WordPoint(std::shared_ptr<const std::vector<std::uint8_t>> arena, std::uint32_t begin,
            std::uint32_t length);

  int horizon() const { return static_cast<int>(length_); }
  std::uint8_t symbol(int i) const { return (*arena_)[begin_ + i]; }
  WordPoint shifted() const;  // drops the first symbol; horizon decreases
  std::string str() const;

 private:
  std::shared_ptr<const std::vector<std::uint8_t>> arena_;
  std::uint32_t begin_ = 0;
  std::uint32_t length_ = 0;
};

using PhasePoint = std::variant<CirclePoint, LabeledPoint, WordPoint>;

std::string point_str(const PhasePoint& p);
bool points_equal(const SystemSpec& sys, const PhasePoint& a, const PhasePoint& b, double tol);

// f(p). Throws SingularPointError on an exact IET breakpoint hit and
// HorizonExhaustedError when a one-symbol word is shifted.
PhasePoint apply(const SystemSpec& sys, const PhasePoint& p);

// Base metric d. Circle systems use min(|x-y|, 1-|x-y|), the IET uses |x-y|,
// cross-circle distance is 1, words use 2^{-first difference}.
double distance(const SystemSpec& sys, const PhasePoint& p, const PhasePoint& q);

// Full preimage set f^{-1}p, deterministic order.
std::vector<PhasePoint> preimages(const SystemSpec& sys, const PhasePoint& p);

// d(p, S); +infinity when S is empty.
double singular_distance(const SystemSpec& sys, const PhasePoint& p);

// Points of S itself (IET interior breakpoints; empty otherwise).
std::vector<double> singular_set(const SystemSpec& sys);

// Sorted, deduplicated union of f^{-k}S for k = 0..depth (IET only; empty
// otherwise). depth < 0 yields an empty set.
std::vector<double> singular_preimages(const SystemSpec& sys, int depth);

struct CandidateOptions {
  int resolution = 0;   // grid points per circle / interval
  int n_max = 1;        // orbit depth the candidates must support
  std::uint64_t seed = 0;
  int k_max = 0;        // SFT: largest k of the eps = 2^{-k} list
  int guard = 1;        // SFT: extra symbols beyond n_max + k_max
  double exclusion_radius = 1e-9;
};

struct CandidateSet {
  std::vector<PhasePoint> points;
  std::string descriptor;
  double exclusion_radius = 0.0;
};

// Deterministic candidate generation: a seeded-phase uniform grid for the
// real systems (purged around preimages of S up to depth n_max-2), the
// complete admissible-word enumeration for SFTs.
CandidateSet candidates(const SystemSpec& sys, const CandidateOptions& opts);

// All admissible words of the given length in lexicographic order, sharing
// one symbol arena.
std::vector<WordPoint> enumerate_words(const SftData& sft, int length);

namespace detail {
double frac(double x);
double circle_dist(double x, double y);
// Index of the IET interval containing x; throws SingularPointError when x
// hits an interior breakpoint exactly.
int iet_interval(const IetData& iet, double x);
}  // namespace detail

}  // namespace epsn
