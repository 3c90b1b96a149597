#include "epsn/bowen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace epsn {

std::vector<PhasePoint> orbit(const SystemSpec& sys, const PhasePoint& p, int n) {
  if (n < 1) throw Error("orbit length must be >= 1");
  std::vector<PhasePoint> out;
  out.reserve(static_cast<std::size_t>(n));
  out.push_back(p);
  for (int t = 1; t < n; ++t) {
    try {
      out.push_back(apply(sys, out.back()));
    } catch (const SingularPointError&) {
      throw SingularOrbitError("orbit enters the singular set at step " + std::to_string(t - 1));
    }
  }
  return out;
}

double bowen_distance(const SystemSpec& sys, const PhasePoint& x, const PhasePoint& y, int n) {
  if (n < 1) throw Error("bowen_distance needs n >= 1");
  auto ox = orbit(sys, x, n);
  auto oy = orbit(sys, y, n);
  double best = 0.0;
  for (int t = 0; t < n; ++t) best = std::max(best, distance(sys, ox[t], oy[t]));
  return best;
}

bool is_separated(const SystemSpec& sys, const PhasePoint& x, const PhasePoint& y, double eps,
                  int n) {
  return bowen_distance(sys, x, y, n) >= eps;
}

namespace {

// smallest j >= 0 with 2^{-j} < eps (strict) or 2^{-j} <= eps (non-strict)
int word_prefix_threshold(double eps, bool strict) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  int j = 0;
  while (j < 1100) {
    double v = std::ldexp(1.0, -j);
    if (strict ? v < eps : v <= eps) return j;
    ++j;
  }
  throw Error("eps too small for the word metric");
}

int first_difference(const WordPoint& a, const WordPoint& b, int from = 0) {
  int m = std::min(a.horizon(), b.horizon());
  for (int i = from; i < m; ++i)
    if (a.symbol(i) != b.symbol(i)) return i;
  return -1;  // equal on the shared horizon
}

}  // namespace

OrbitTable::OrbitTable(const SystemSpec& sys, std::vector<PhasePoint> points, int n_max)
    : sys_(sys), points_(std::move(points)), n_max_(n_max) {
  if (n_max_ < 1) throw Error("orbit table needs n_max >= 1");
  const std::size_t count = points_.size();
  flagged_.assign(count, 0);
  symbolic_ = sys_.kind() == SystemKind::Sft;
  if (symbolic_) {
    words_.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& w = std::get<WordPoint>(points_[i]);
      if (w.horizon() < n_max_)
        throw HorizonExhaustedError("word horizon below the orbit table depth");
      words_.push_back(w);
    }
  } else {
    coords_.assign(count * static_cast<std::size_t>(n_max_), 0.0);
    if (sys_.kind() == SystemKind::TwoCircle) labels_.assign(count, 0);
    for (std::size_t i = 0; i < count; ++i) {
      PhasePoint p = points_[i];
      if (const auto* l = std::get_if<LabeledPoint>(&p)) labels_[i] = l->label;
      try {
        for (int t = 0; t < n_max_; ++t) {
          if (t > 0) p = apply(sys_, p);
          double x = std::holds_alternative<CirclePoint>(p) ? std::get<CirclePoint>(p).x
                                                            : std::get<LabeledPoint>(p).x;
          coords_[i * n_max_ + t] = x;
        }
      } catch (const SingularPointError&) {
        flagged_[i] = 1;
        ++flagged_count_;
      }
    }
  }
  sorted_.reserve(count - flagged_count_);
  for (std::size_t i = 0; i < count; ++i)
    if (!flagged_[i]) sorted_.push_back(static_cast<std::uint32_t>(i));
  if (symbolic_) {
    std::sort(sorted_.begin(), sorted_.end(), [this](std::uint32_t a, std::uint32_t b) {
      const auto& wa = words_[a];
      const auto& wb = words_[b];
      int m = std::min(wa.horizon(), wb.horizon());
      for (int i = 0; i < m; ++i) {
        if (wa.symbol(i) != wb.symbol(i)) return wa.symbol(i) < wb.symbol(i);
      }
      if (wa.horizon() != wb.horizon()) return wa.horizon() < wb.horizon();
      return a < b;
    });
  } else {
    std::sort(sorted_.begin(), sorted_.end(), [this](std::uint32_t a, std::uint32_t b) {
      int la = labels_.empty() ? 0 : labels_[a];
      int lb = labels_.empty() ? 0 : labels_[b];
      if (la != lb) return la < lb;
      double xa = coords_[static_cast<std::size_t>(a) * n_max_];
      double xb = coords_[static_cast<std::size_t>(b) * n_max_];
      if (xa != xb) return xa < xb;
      return a < b;
    });
  }
}

double OrbitTable::base_distance(std::size_t i, std::size_t j) const {
  if (symbolic_) return distance(sys_, points_[i], points_[j]);
  if (!labels_.empty() && labels_[i] != labels_[j]) return 1.0;
  double xi = coords_[i * n_max_];
  double xj = coords_[j * n_max_];
  if (sys_.kind() == SystemKind::Iet) return std::fabs(xi - xj);
  return detail::circle_dist(xi, xj);
}

double OrbitTable::bowen(std::size_t i, std::size_t j, int n) const {
  if (n < 1 || n > n_max_) throw Error("bowen: n outside the table horizon");
  if (symbolic_) {
    const auto& a = words_[i];
    const auto& b = words_[j];
    int fd = first_difference(a, b);
    if (fd < 0) {
      if (a.horizon() == b.horizon()) return 0.0;
      throw HorizonExhaustedError("words agree on the shared horizon but differ in length");
    }
    return std::ldexp(1.0, -std::max(0, fd - n + 1));
  }
  if (flagged_[i] || flagged_[j]) throw SingularOrbitError("flagged point in bowen query");
  if (!labels_.empty() && labels_[i] != labels_[j]) return 1.0;
  double best = 0.0;
  const double* ri = coords_.data() + i * n_max_;
  const double* rj = coords_.data() + j * n_max_;
  const bool interval = sys_.kind() == SystemKind::Iet;
  for (int t = 0; t < n; ++t) {
    double d = interval ? std::fabs(ri[t] - rj[t]) : detail::circle_dist(ri[t], rj[t]);
    best = std::max(best, d);
  }
  return best;
}

int OrbitTable::conflict_horizon(std::size_t i, std::size_t j, double eps) const {
  if (symbolic_) {
    const auto& a = words_[i];
    const auto& b = words_[j];
    int fd = first_difference(a, b);
    if (fd < 0) {
      if (a.horizon() == b.horizon()) return n_max_;
      throw HorizonExhaustedError("words agree on the shared horizon but differ in length");
    }
    int t0 = word_prefix_threshold(eps, false);
    if (t0 == 0) return n_max_;  // eps >= 1 dominates the word metric
    // d_n <= eps  iff  max(0, fd-n+1) >= t0  iff  n <= fd - t0 + 1
    return std::max(0, std::min(n_max_, fd - t0 + 1));
  }
  if (flagged_[i] || flagged_[j]) return 0;
  if (!labels_.empty() && labels_[i] != labels_[j]) return 1.0 <= eps ? n_max_ : 0;
  const double* ri = coords_.data() + i * n_max_;
  const double* rj = coords_.data() + j * n_max_;
  const bool interval = sys_.kind() == SystemKind::Iet;
  for (int t = 0; t < n_max_; ++t) {
    double d = interval ? std::fabs(ri[t] - rj[t]) : detail::circle_dist(ri[t], rj[t]);
    if (d > eps) return t;
  }
  return n_max_;
}

void OrbitTable::scan_real_pairs(double eps, bool strict, const PairFn& fn) const {
  const std::size_t m = sorted_.size();
  const bool circle_metric = sys_.kind() != SystemKind::Iet;
  const bool needs_fallback = m <= 1024 || (circle_metric && eps >= 0.45) || eps >= 1.0;
  auto base = [this](std::uint32_t a, std::uint32_t b) { return base_distance(a, b); };
  auto accept = [eps, strict](double d) { return strict ? d < eps : d <= eps; };
  if (needs_fallback) {
    for (std::size_t si = 0; si < m; ++si)
      for (std::size_t sj = si + 1; sj < m; ++sj) {
        std::uint32_t a = sorted_[si], b = sorted_[sj];
        double d = base(a, b);
        if (accept(d)) fn(std::min(a, b), std::max(a, b), d);
      }
    return;
  }
  auto coord = [this](std::uint32_t v) { return coords_[static_cast<std::size_t>(v) * n_max_]; };
  auto label = [this](std::uint32_t v) { return labels_.empty() ? 0 : labels_[v]; };
  std::size_t block_begin = 0;
  while (block_begin < m) {
    std::size_t block_end = block_begin;
    while (block_end < m && label(sorted_[block_end]) == label(sorted_[block_begin])) ++block_end;
    // forward window within the sorted block
    for (std::size_t si = block_begin; si < block_end; ++si) {
      for (std::size_t sj = si + 1; sj < block_end; ++sj) {
        double dx = coord(sorted_[sj]) - coord(sorted_[si]);
        if (!accept(dx)) break;
        std::uint32_t a = sorted_[si], b = sorted_[sj];
        fn(std::min(a, b), std::max(a, b), dx);
      }
    }
    if (circle_metric) {
      // wrap pairs: tail of the block against its head
      for (std::size_t si = block_end; si-- > block_begin;) {
        double xi = coord(sorted_[si]);
        if (1.0 - xi > eps) break;
        for (std::size_t sj = block_begin; sj < si; ++sj) {
          double gap = coord(sorted_[sj]) + 1.0 - xi;
          if (!accept(gap)) break;
          std::uint32_t a = sorted_[si], b = sorted_[sj];
          fn(std::min(a, b), std::max(a, b), gap);
        }
      }
    }
    block_begin = block_end;
  }
}

void OrbitTable::scan_word_pairs(int prefix, const PairFn& fn) const {
  const std::size_t m = sorted_.size();
  if (m < 2) return;
  int horizon = words_[sorted_[0]].horizon();
  for (std::uint32_t idx : sorted_)
    if (words_[idx].horizon() != horizon)
      throw Error("word pair scan requires uniform horizons");
  if (prefix > horizon) return;  // distinct words cannot share more than full length
  auto same_prefix = [&](std::uint32_t a, std::uint32_t b) {
    const auto& wa = words_[a];
    const auto& wb = words_[b];
    for (int i = 0; i < prefix; ++i)
      if (wa.symbol(i) != wb.symbol(i)) return false;
    return true;
  };
  std::size_t begin = 0;
  while (begin < m) {
    std::size_t end = begin + 1;
    while (end < m && same_prefix(sorted_[begin], sorted_[end])) ++end;
    for (std::size_t si = begin; si < end; ++si)
      for (std::size_t sj = si + 1; sj < end; ++sj) {
        std::uint32_t a = sorted_[si], b = sorted_[sj];
        int fd = first_difference(words_[a], words_[b], prefix);
        double d = fd < 0 ? 0.0 : std::ldexp(1.0, -fd);
        fn(std::min(a, b), std::max(a, b), d);
      }
    begin = end;
  }
}

void OrbitTable::for_each_base_close(double eps, bool strict, const PairFn& fn) const {
  if (symbolic_) {
    scan_word_pairs(word_prefix_threshold(eps, strict), fn);
  } else {
    scan_real_pairs(eps, strict, fn);
  }
}

void OrbitTable::for_each_conflict(double eps, int n, const PairFn& fn) const {
  if (n < 1 || n > n_max_) throw Error("conflict scan: n outside the table horizon");
  if (symbolic_) {
    scan_word_pairs(n - 1 + word_prefix_threshold(eps, true), fn);
    return;
  }
  const bool interval = sys_.kind() == SystemKind::Iet;
  scan_real_pairs(eps, true, [&](std::uint32_t a, std::uint32_t b, double d) {
    const double* ra = coords_.data() + static_cast<std::size_t>(a) * n_max_;
    const double* rb = coords_.data() + static_cast<std::size_t>(b) * n_max_;
    for (int t = 1; t < n; ++t) {
      double dt = interval ? std::fabs(ra[t] - rb[t]) : detail::circle_dist(ra[t], rb[t]);
      if (dt >= eps) return;
    }
    fn(a, b, d);
  });
}

ExpansivityProfile expansivity_profile(const OrbitTable& table, double eps, int n_max) {
  if (n_max < 1 || n_max > table.horizon()) throw Error("profile: n_max outside table horizon");
  if (table.size() - table.flagged_count() < 2)
    throw EmptyCandidateSetError("expansivity profile needs at least two candidates");
  std::vector<double> best(static_cast<std::size_t>(n_max) + 1, 0.0);
  std::vector<std::int64_t> count(static_cast<std::size_t>(n_max) + 1, 0);
  table.for_each_base_close(eps, false, [&](std::uint32_t i, std::uint32_t j, double d) {
    int t = table.conflict_horizon(i, j, eps);
    if (t < 1) return;
    t = std::min(t, n_max);
    best[t] = std::max(best[t], d);
    ++count[t];
  });
  ExpansivityProfile out;
  out.eps = eps;
  out.delta_hat.assign(static_cast<std::size_t>(n_max), 0.0);
  out.pairs_checked.assign(static_cast<std::size_t>(n_max), 0);
  double running = 0.0;
  std::int64_t running_count = 0;
  for (int n = n_max; n >= 1; --n) {
    running = std::max(running, best[n]);
    running_count += count[n];
    out.delta_hat[n - 1] = running;
    out.pairs_checked[n - 1] = running_count;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "candidates=%zu flagged=%zu", table.size(),
                table.flagged_count());
  out.sample = buf;
  return out;
}

ContinuityModulus continuity_modulus(const OrbitTable& table, const std::vector<double>& sigmas,
                                     double delta) {
  if (table.horizon() < 2) throw Error("continuity modulus needs orbit depth >= 2");
  if (sigmas.empty()) throw Error("continuity modulus needs at least one sigma");
  double sigma_max = 0.0;
  for (double s : sigmas) {
    if (!(s > 0.0 && s < delta)) throw Error("continuity modulus requires 0 < sigma < delta");
    sigma_max = std::max(sigma_max, s);
  }
  const auto& sys = table.system();
  std::vector<std::uint8_t> keep(table.size(), 1);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    keep[i] = !table.flagged(i) && singular_distance(sys, table.point(i)) >= delta;
    kept += keep[i];
  }
  if (kept == 0) throw EmptyCandidateSetError("delta purge removed every candidate");
  std::vector<std::pair<double, double>> samples;  // (d(x,y), d(fx,fy))
  std::int64_t pairs = 0;
  table.for_each_base_close(sigma_max, false, [&](std::uint32_t i, std::uint32_t j, double d) {
    if (!keep[i] || !keep[j]) return;
    ++pairs;
    double dnext = distance(sys, apply(sys, table.point(i)), apply(sys, table.point(j)));
    samples.emplace_back(d, dnext);
  });
  std::sort(samples.begin(), samples.end());
  ContinuityModulus out;
  out.pairs_checked = pairs;
  std::vector<double> sorted_sigmas = sigmas;
  std::sort(sorted_sigmas.begin(), sorted_sigmas.end());
  double running = 0.0;
  std::size_t pos = 0;
  for (double s : sorted_sigmas) {
    while (pos < samples.size() && samples[pos].first <= s) {
      running = std::max(running, samples[pos].second);
      ++pos;
    }
    out.eta.emplace_back(s, running);
  }
  return out;
}

}  // namespace epsn
