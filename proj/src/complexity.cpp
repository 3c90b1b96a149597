#include "epsn/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace epsn {

namespace {

std::vector<BigInt> mat_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b, int p) {
  std::vector<BigInt> c(static_cast<std::size_t>(p) * p, 0);
  for (int i = 0; i < p; ++i)
    for (int k = 0; k < p; ++k) {
      if (a[i * p + k] == 0) continue;
      for (int j = 0; j < p; ++j) c[i * p + j] += a[i * p + k] * b[k * p + j];
    }
  return c;
}

}  // namespace

BigInt sft_word_count(const SftData& sft, int length) {
  if (length < 0) throw Error("word length must be non-negative");
  if (length == 0) return 1;
  const int p = sft.alphabet;
  std::vector<BigInt> m(static_cast<std::size_t>(p) * p);
  for (int i = 0; i < p * p; ++i) m[i] = sft.transitions[i];
  // sum of entries of M^{length-1}
  std::vector<BigInt> acc(static_cast<std::size_t>(p) * p, 0);
  for (int i = 0; i < p; ++i) acc[i * p + i] = 1;
  int e = length - 1;
  while (e > 0) {
    if (e & 1) acc = mat_mul(acc, m, p);
    m = mat_mul(m, m, p);
    e >>= 1;
  }
  BigInt total = 0;
  for (const auto& v : acc) total += v;
  return total;
}

BigInt sft_complexity_exact(const SftData& sft, int k, int n) {
  if (k < 0) throw Error("sft_complexity_exact needs k >= 0");
  if (n < 1) throw Error("sft_complexity_exact needs n >= 1");
  return sft_word_count(sft, n + k);
}

std::int64_t iet_complexity_closed_form(int m, int n) {
  if (m < 2) throw Error("IET closed form needs m >= 2");
  if (n < 1) throw Error("IET closed form needs n >= 1");
  return static_cast<std::int64_t>(m - 1) * (n - 1) + 1;
}

std::optional<int> dyadic_exponent(double eps) {
  if (!(eps > 0.0) || eps > 1.0) return std::nullopt;
  for (int k = 0; k <= 1074; ++k) {
    double v = std::ldexp(1.0, -k);
    if (v == eps) return k;
    if (v < eps) return std::nullopt;
  }
  return std::nullopt;
}

double big_log(const BigInt& v) {
  if (v <= 0) throw Error("big_log needs a positive value");
  const unsigned bits = boost::multiprecision::msb(v);
  if (bits <= 52) return std::log(v.convert_to<double>());
  BigInt top = v >> (bits - 52);
  return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
}

const CurveEntry& ComplexityCurve::at(int n) const {
  if (entries.empty() || n < entries.front().n || n > entries.back().n)
    throw Error("curve entry out of range");
  return entries[static_cast<std::size_t>(n - entries.front().n)];
}

std::string curve_method_name(CurveMethod m) {
  switch (m) {
    case CurveMethod::SftExact:
      return "sft-exact";
    case CurveMethod::IetClosedForm:
      return "iet-closed-form";
    case CurveMethod::MisExact:
      return "mis-exact";
    case CurveMethod::MisGreedy:
      return "mis-greedy";
  }
  return "?";
}

ComplexityCurve complexity_curve(const SystemSpec& sys, double eps, int n_min, int n_max,
                                 const OrbitTable* table, const CurveOptions& opts) {
  if (n_min < 1 || n_max < n_min) throw Error("complexity curve needs 1 <= n_min <= n_max");
  if (!(eps > 0.0)) throw Error("complexity curve needs eps > 0");
  ComplexityCurve curve;
  curve.eps = eps;
  if (sys.kind() == SystemKind::Sft) {
    auto k = dyadic_exponent(eps);
    if (!k) throw Error("SFT complexity requires eps to be an exact power of two");
    for (int n = n_min; n <= n_max; ++n) {
      BigInt c = sft_complexity_exact(sys.sft_data(), *k, n);
      if (c > std::numeric_limits<std::int64_t>::max())
        throw Error("SFT complexity exceeds int64; shrink the n range");
      curve.entries.push_back({n, c.convert_to<std::int64_t>(), CurveMethod::SftExact});
    }
  } else if (opts.force_iet_closed_form) {
    if (sys.kind() != SystemKind::Iet) throw Error("closed-form curves need an IET system");
    int m = sys.iet_data().interval_count();
    for (int n = n_min; n <= n_max; ++n)
      curve.entries.push_back({n, iet_complexity_closed_form(m, n), CurveMethod::IetClosedForm});
  } else {
    if (!table) throw Error("candidate-based complexity needs an orbit table");
    if (n_max > table->horizon()) throw Error("curve range exceeds the orbit table depth");
    for (int n = n_min; n <= n_max; ++n) {
      auto graph = closeness_graph(*table, eps, n);
      auto set = exact_maximum(graph, *table, opts.node_budget);
      CurveMethod method = set.status == SetStatus::MaximumExact ? CurveMethod::MisExact
                                                                 : CurveMethod::MisGreedy;
      curve.entries.push_back({n, static_cast<std::int64_t>(set.members.size()), method});
    }
  }
  for (std::size_t i = 1; i < curve.entries.size(); ++i) {
    if (curve.entries[i].complexity < curve.entries[i - 1].complexity)
      throw MonotonicityViolationError(
          "C_{eps,n} decreased from n=" + std::to_string(curve.entries[i - 1].n) +
          " to n=" + std::to_string(curve.entries[i].n) +
          " (candidate set too coarse or budget too small)");
  }
  return curve;
}

GrowthDiagnostics growth_diagnostic(const ComplexityCurve& curve, double tol,
                                    double subexp_threshold) {
  if (curve.entries.size() < 2) throw Error("growth diagnostics need >= 2 consecutive entries");
  GrowthDiagnostics out;
  for (std::size_t i = 1; i < curve.entries.size(); ++i) {
    if (curve.entries[i].n != curve.entries[i - 1].n + 1)
      throw Error("growth diagnostics need consecutive n");
    double c = static_cast<double>(curve.entries[i].complexity);
    double c_prev = static_cast<double>(curve.entries[i - 1].complexity);
    out.n.push_back(curve.entries[i].n);
    out.q.push_back((c - c_prev) / c);
  }
  double run_min = out.q.front(), run_max = out.q.front();
  for (double q : out.q) {
    run_min = std::min(run_min, q);
    run_max = std::max(run_max, q);
    out.running_min.push_back(run_min);
    out.running_max.push_back(run_max);
  }
  std::size_t tail = out.q.size() / 2;  // finite liminf surrogate: the tail half
  double lim_min = out.q[tail], lim_max = out.q[tail];
  for (std::size_t i = tail; i < out.q.size(); ++i) {
    lim_min = std::min(lim_min, out.q[i]);
    lim_max = std::max(lim_max, out.q[i]);
  }
  out.liminf_estimate = lim_min;
  out.limsup_estimate = lim_max;
  for (std::size_t i = 0; i < out.q.size(); ++i)
    if (out.q[i] <= out.liminf_estimate + tol) out.liminf_subsequence.push_back(out.n[i]);
  out.subexponential_consistent = out.liminf_estimate <= subexp_threshold;
  return out;
}

namespace {

double ols_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  if (den == 0.0) throw InsufficientDataError("degenerate abscissa in least squares");
  return num / den;
}

}  // namespace

EntropyEstimate entropy_estimate(const std::vector<ComplexityCurve>& curves,
                                 double tail_fraction) {
  if (curves.empty()) throw InsufficientDataError("entropy estimate needs at least one curve");
  EntropyEstimate out;
  double best_eps = std::numeric_limits<double>::infinity();
  for (const auto& curve : curves) {
    std::size_t len = curve.entries.size();
    std::size_t window = std::max<std::size_t>(5, static_cast<std::size_t>(
                                                      std::ceil(tail_fraction * static_cast<double>(len))));
    if (len < window || window < 5)
      throw InsufficientDataError("entropy estimate needs a tail window of >= 5 entries");
    std::vector<double> xs, ys;
    for (std::size_t i = len - window; i < len; ++i) {
      xs.push_back(static_cast<double>(curve.entries[i].n));
      ys.push_back(std::log(static_cast<double>(curve.entries[i].complexity)));
    }
    EntropyFit fit;
    fit.eps = curve.eps;
    fit.slope = ols_slope(xs, ys);
    fit.window_begin = curve.entries[len - window].n;
    fit.window_end = curve.entries[len - 1].n;
    out.per_eps.push_back(fit);
    if (curve.eps < best_eps) {
      best_eps = curve.eps;
      out.value = fit.slope;
    }
  }
  return out;
}

BoxDimensionEstimate box_dimension_estimate(const SystemSpec& sys, int n,
                                            const std::vector<double>& eps_list,
                                            const OrbitTable* table, const CurveOptions& opts) {
  if (eps_list.size() < 2) throw InsufficientDataError("box dimension needs >= 2 eps values");
  double lo = eps_list.front(), hi = eps_list.front();
  for (double e : eps_list) {
    if (!(e > 0.0)) throw Error("box dimension needs positive eps");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (hi / lo < 10.0 * (1.0 - 1e-12))
    throw InsufficientDataError("box dimension eps list must span at least one decade");
  BoxDimensionEstimate out;
  std::vector<double> xs, ys;
  for (double eps : eps_list) {
    std::int64_t c = 0;
    if (sys.kind() == SystemKind::Sft) {
      auto k = dyadic_exponent(eps);
      if (!k) throw Error("SFT box dimension requires dyadic eps");
      BigInt big = sft_complexity_exact(sys.sft_data(), *k, n);
      if (big > std::numeric_limits<std::int64_t>::max()) throw Error("count exceeds int64");
      c = big.convert_to<std::int64_t>();
    } else {
      if (!table) throw Error("box dimension needs an orbit table");
      auto graph = closeness_graph(*table, eps, n);
      auto set = exact_maximum(graph, *table, opts.node_budget);
      c = static_cast<std::int64_t>(set.members.size());
    }
    out.counts.emplace_back(eps, c);
    xs.push_back(-std::log(eps));
    ys.push_back(std::log(static_cast<double>(c)));
  }
  out.slope = ols_slope(xs, ys);
  return out;
}

IetGapStats iet_gap_stats(const SystemSpec& sys, int n) {
  if (sys.kind() != SystemKind::Iet) throw Error("gap stats are IET-only");
  auto pts = singular_preimages(sys, n - 2);
  IetGapStats out;
  out.point_count = pts.size();
  std::vector<double> all;
  all.reserve(pts.size() + 2);
  all.push_back(0.0);
  all.insert(all.end(), pts.begin(), pts.end());
  all.push_back(1.0);
  out.min_gap = std::numeric_limits<double>::infinity();
  out.max_gap = 0.0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    double g = all[i] - all[i - 1];
    if (g <= 0.0) continue;  // duplicate of an endpoint
    out.min_gap = std::min(out.min_gap, g);
    out.max_gap = std::max(out.max_gap, g);
  }
  return out;
}

std::optional<int> iet_n0_measured(const SystemSpec& sys, double eps, int n_limit) {
  if (!(eps > 0.0)) throw Error("n_0 needs eps > 0");
  for (int n = 1; n <= n_limit; ++n) {
    if (iet_gap_stats(sys, n).max_gap < eps) return n;
  }
  return std::nullopt;
}

}  // namespace epsn
