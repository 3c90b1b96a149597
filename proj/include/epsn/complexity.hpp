#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epsn/separated_sets.hpp"

namespace epsn {

using BigInt = boost::multiprecision::cpp_int;

// Number of admissible words of the given length (sum of entries of
// M^{length-1}); length 0 counts the empty word.
BigInt sft_word_count(const SftData& sft, int length);

// Exact C_{eps,n} for an SFT at eps = 2^{-k}: separation over n steps is
// distinctness of the first n+k symbols.
BigInt sft_complexity_exact(const SftData& sft, int k, int n);

// (m-1)(n-1)+1, valid for n above the measured n_0(eps).
std::int64_t iet_complexity_closed_form(int m, int n);

// Write eps as 2^{-k}; nullopt when eps is not an exact dyadic power.
std::optional<int> dyadic_exponent(double eps);

// ln of a positive big integer.
double big_log(const BigInt& v);

enum class CurveMethod { SftExact, IetClosedForm, MisExact, MisGreedy };
std::string curve_method_name(CurveMethod m);

struct CurveEntry {
  int n = 0;
  std::int64_t complexity = 0;
  CurveMethod method = CurveMethod::MisExact;
};

struct ComplexityCurve {
  double eps = 0.0;
  std::vector<CurveEntry> entries;  // consecutive n
  const CurveEntry& at(int n) const;
};

struct CurveOptions {
  std::int64_t node_budget = 500000;
  bool force_iet_closed_form = false;
};

// C_{eps,n} over an n range by the best available method: sft-exact for
// SFTs at dyadic eps, otherwise exact MIS over the candidate table with a
// flagged greedy fallback. Monotonicity violations throw (they indicate a
// candidate set too coarse), they are never clamped.
ComplexityCurve complexity_curve(const SystemSpec& sys, double eps, int n_min, int n_max,
                                 const OrbitTable* table, const CurveOptions& opts);

struct GrowthDiagnostics {
  std::vector<int> n;           // starts at curve n_min + 1
  std::vector<double> q;        // q_n = (C_n - C_{n-1}) / C_n
  std::vector<double> running_min;  // prefix min of q
  std::vector<double> running_max;  // prefix max of q
  double liminf_estimate = 0.0;     // min over the tail half
  double limsup_estimate = 0.0;     // max over the tail half
  std::vector<int> liminf_subsequence;  // indices n with q_n <= liminf + tol
  bool subexponential_consistent = false;
};

GrowthDiagnostics growth_diagnostic(const ComplexityCurve& curve, double tol = 1e-9,
                                    double subexp_threshold = 0.05);

struct EntropyFit {
  double eps = 0.0;
  double slope = 0.0;
  int window_begin = 0;  // first n of the fit window
  int window_end = 0;    // last n
};

struct EntropyEstimate {
  double value = 0.0;  // slope at the smallest eps
  std::vector<EntropyFit> per_eps;
};

// Least-squares slope of ln C vs n over the tail window of each curve
// (default: last half). The eps -> 0 limit is reported as a trend only.
EntropyEstimate entropy_estimate(const std::vector<ComplexityCurve>& curves,
                                 double tail_fraction = 0.5);

struct BoxDimensionEstimate {
  double slope = 0.0;
  std::vector<std::pair<double, std::int64_t>> counts;  // (eps, C)
};

// Least-squares slope of ln C_{eps,n} vs -ln eps at fixed n; the eps list
// must span at least one decade.
BoxDimensionEstimate box_dimension_estimate(const SystemSpec& sys, int n,
                                            const std::vector<double>& eps_list,
                                            const OrbitTable* table, const CurveOptions& opts);

// First n <= n_limit with every gap of D_n (plus the endpoints 0, 1) below
// eps; nullopt if no such n exists in range. IET only.
std::optional<int> iet_n0_measured(const SystemSpec& sys, double eps, int n_limit);

// Gaps of sorted {0} u D_n u {1} with D_n = union of f^{-k}S, k <= n-2.
struct IetGapStats {
  double min_gap = 0.0;
  double max_gap = 0.0;
  std::size_t point_count = 0;
};
IetGapStats iet_gap_stats(const SystemSpec& sys, int n);

}  // namespace epsn
