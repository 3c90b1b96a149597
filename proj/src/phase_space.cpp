#include "epsn/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace epsn {

namespace detail {

double frac(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f = 0.0;  // x == -tiny rounds to 1.0
  return f;
}

double circle_dist(double x, double y) {
  double d = std::fabs(x - y);
  return std::min(d, 1.0 - d);
}

int iet_interval(const IetData& iet, double x) {
  if (x < 0.0 || x >= 1.0) throw Error("IET point outside [0,1)");
  const auto& a = iet.breakpoints;
  auto it = std::upper_bound(a.begin(), a.end(), x);
  int idx = static_cast<int>(it - a.begin()) - 1;
  // x == a[0] == 0 is the left endpoint, not in S
  if (idx >= 1 && x == a[idx]) throw SingularPointError("point is an IET breakpoint");
  return idx;
}

}  // namespace detail

SystemSpec SystemSpec::doubling() {
  SystemSpec s;
  s.kind_ = SystemKind::Doubling;
  return s;
}

SystemSpec SystemSpec::rotation(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("rotation alpha must lie in (0,1)");
  SystemSpec s;
  s.kind_ = SystemKind::Rotation;
  s.alpha_ = alpha;
  return s;
}

SystemSpec SystemSpec::two_circle() {
  SystemSpec s;
  s.kind_ = SystemKind::TwoCircle;
  return s;
}

SystemSpec SystemSpec::iet(std::vector<double> breakpoints, std::vector<double> translations) {
  const std::size_t m = translations.size();
  if (m < 2) throw Error("IET needs at least two intervals");
  if (breakpoints.size() != m + 1) throw Error("IET breakpoint count must be m+1");
  if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
    throw Error("IET breakpoints must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    if (!(breakpoints[i] < breakpoints[i + 1])) throw Error("IET breakpoints must increase");
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (translations[i] == translations[i + 1])
      throw Error("IET consecutive translations must differ");
  // the translated intervals must tile [0,1) disjointly (one-to-one map)
  std::vector<std::pair<double, double>> images(m);
  for (std::size_t i = 0; i < m; ++i)
    images[i] = {breakpoints[i] + translations[i], breakpoints[i + 1] + translations[i]};
  std::sort(images.begin(), images.end());
  const double tol = 1e-12;
  if (std::fabs(images.front().first) > tol) throw Error("IET images do not start at 0");
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (std::fabs(images[i].second - images[i + 1].first) > tol)
      throw Error("IET images do not tile [0,1)");
  if (std::fabs(images.back().second - 1.0) > tol) throw Error("IET images do not end at 1");
  SystemSpec s;
  s.kind_ = SystemKind::Iet;
  s.iet_.breakpoints = std::move(breakpoints);
  s.iet_.translations = std::move(translations);
  return s;
}

SystemSpec SystemSpec::sft(int alphabet, std::vector<std::uint8_t> transitions) {
  if (alphabet < 1) throw Error("SFT alphabet must be positive");
  if (transitions.size() != static_cast<std::size_t>(alphabet) * alphabet)
    throw Error("SFT transition matrix must be p*p");
  for (auto v : transitions)
    if (v != 0 && v != 1) throw Error("SFT transition entries must be 0/1");
  SystemSpec s;
  s.kind_ = SystemKind::Sft;
  s.sft_.alphabet = alphabet;
  s.sft_.transitions = std::move(transitions);
  return s;
}

std::string SystemSpec::describe() const {
  char buf[64];
  switch (kind_) {
    case SystemKind::Doubling:
      return "doubling";
    case SystemKind::Rotation:
      std::snprintf(buf, sizeof buf, "rotation(%.12g)", alpha_);
      return buf;
    case SystemKind::TwoCircle:
      return "two_circle";
    case SystemKind::Iet:
      std::snprintf(buf, sizeof buf, "iet(m=%d)", iet_.interval_count());
      return buf;
    case SystemKind::Sft:
      std::snprintf(buf, sizeof buf, "sft(p=%d)", sft_.alphabet);
      return buf;
  }
  return "?";
}

WordPoint::WordPoint(std::vector<std::uint8_t> symbols)
    : arena_(std::make_shared<const std::vector<std::uint8_t>>(std::move(symbols))),
      begin_(0),
      length_(static_cast<std::uint32_t>(arena_->size())) {
  if (length_ == 0) throw Error("empty word");
}

WordPoint::WordPoint(std::shared_ptr<const std::vector<std::uint8_t>> arena, std::uint32_t begin,
                     std::uint32_t length)
    : arena_(std::move(arena)), begin_(begin), length_(length) {
  if (length_ == 0) throw Error("empty word");
}

WordPoint WordPoint::shifted() const {
  if (length_ <= 1) throw HorizonExhaustedError("cannot shift a one-symbol word");
  return WordPoint(arena_, begin_ + 1, length_ - 1);
}

std::string WordPoint::str() const {
  std::string s;
  s.reserve(length_);
  for (int i = 0; i < horizon(); ++i) s.push_back(static_cast<char>('0' + symbol(i)));
  return s;
}

std::string point_str(const PhasePoint& p) {
  char buf[64];
  if (const auto* c = std::get_if<CirclePoint>(&p)) {
    std::snprintf(buf, sizeof buf, "%.17g", c->x);
    return buf;
  }
  if (const auto* l = std::get_if<LabeledPoint>(&p)) {
    std::snprintf(buf, sizeof buf, "(%d,%.17g)", l->label, l->x);
    return buf;
  }
  return std::get<WordPoint>(p).str();
}

bool points_equal(const SystemSpec& sys, const PhasePoint& a, const PhasePoint& b, double tol) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<WordPoint>(a)) {
    const auto& wa = std::get<WordPoint>(a);
    const auto& wb = std::get<WordPoint>(b);
    if (wa.horizon() != wb.horizon()) return false;
    for (int i = 0; i < wa.horizon(); ++i)
      if (wa.symbol(i) != wb.symbol(i)) return false;
    return true;
  }
  return distance(sys, a, b) <= tol;
}

namespace {

const CirclePoint& circle_of(const PhasePoint& p, const char* ctx) {
  const auto* c = std::get_if<CirclePoint>(&p);
  if (!c) throw Error(std::string("expected a circle point in ") + ctx);
  return *c;
}

const LabeledPoint& labeled_of(const PhasePoint& p, const char* ctx) {
  const auto* l = std::get_if<LabeledPoint>(&p);
  if (!l) throw Error(std::string("expected a labeled point in ") + ctx);
  return *l;
}

const WordPoint& word_of(const PhasePoint& p, const char* ctx) {
  const auto* w = std::get_if<WordPoint>(&p);
  if (!w) throw Error(std::string("expected a word point in ") + ctx);
  return *w;
}

double clamp_unit(double x) {
  if (x >= 1.0) return std::nextafter(1.0, 0.0);  // FP overshoot at the right edge
  if (x < 0.0) return 0.0;
  return x;
}

}  // namespace

PhasePoint apply(const SystemSpec& sys, const PhasePoint& p) {
  switch (sys.kind()) {
    case SystemKind::Doubling:
      return CirclePoint{detail::frac(2.0 * circle_of(p, "apply").x)};
    case SystemKind::Rotation:
      return CirclePoint{detail::frac(circle_of(p, "apply").x + sys.rotation_alpha())};
    case SystemKind::TwoCircle: {
      const auto& l = labeled_of(p, "apply");
      double factor = l.label == 0 ? 2.0 : 3.0;
      return LabeledPoint{l.label, detail::frac(factor * l.x)};
    }
    case SystemKind::Iet: {
      double x = circle_of(p, "apply").x;
      int i = detail::iet_interval(sys.iet_data(), x);
      return CirclePoint{clamp_unit(x + sys.iet_data().translations[i])};
    }
    case SystemKind::Sft:
      return word_of(p, "apply").shifted();
  }
  throw Error("unreachable");
}

double distance(const SystemSpec& sys, const PhasePoint& p, const PhasePoint& q) {
  switch (sys.kind()) {
    case SystemKind::Doubling:
    case SystemKind::Rotation:
      return detail::circle_dist(circle_of(p, "distance").x, circle_of(q, "distance").x);
    case SystemKind::Iet:
      return std::fabs(circle_of(p, "distance").x - circle_of(q, "distance").x);
    case SystemKind::TwoCircle: {
      const auto& a = labeled_of(p, "distance");
      const auto& b = labeled_of(q, "distance");
      if (a.label != b.label) return 1.0;
      return detail::circle_dist(a.x, b.x);
    }
    case SystemKind::Sft: {
      const auto& a = word_of(p, "distance");
      const auto& b = word_of(q, "distance");
      int m = std::min(a.horizon(), b.horizon());
      for (int i = 0; i < m; ++i)
        if (a.symbol(i) != b.symbol(i)) return std::ldexp(1.0, -i);
      if (a.horizon() == b.horizon()) return 0.0;
      throw HorizonExhaustedError("words agree on the shared horizon but differ in length");
    }
  }
  throw Error("unreachable");
}

std::vector<PhasePoint> preimages(const SystemSpec& sys, const PhasePoint& p) {
  switch (sys.kind()) {
    case SystemKind::Doubling: {
      double x = circle_of(p, "preimages").x;
      return {CirclePoint{x / 2.0}, CirclePoint{x / 2.0 + 0.5}};
    }
    case SystemKind::Rotation: {
      double x = circle_of(p, "preimages").x;
      return {CirclePoint{detail::frac(x - sys.rotation_alpha() + 1.0)}};
    }
    case SystemKind::TwoCircle: {
      const auto& l = labeled_of(p, "preimages");
      std::vector<PhasePoint> out;
      int q = l.label == 0 ? 2 : 3;
      for (int b = 0; b < q; ++b) out.push_back(LabeledPoint{l.label, (l.x + b) / q});
      return out;
    }
    case SystemKind::Iet: {
      double x = circle_of(p, "preimages").x;
      const auto& iet = sys.iet_data();
      for (int i = 0; i < iet.interval_count(); ++i) {
        double lo = iet.breakpoints[i] + iet.translations[i];
        double hi = iet.breakpoints[i + 1] + iet.translations[i];
        if (x >= lo && x < hi) return {CirclePoint{clamp_unit(x - iet.translations[i])}};
      }
      throw NotInImageError("IET point not covered by any image interval");
    }
    case SystemKind::Sft: {
      const auto& w = word_of(p, "preimages");
      const auto& sft = sys.sft_data();
      std::vector<PhasePoint> out;
      for (int s = 0; s < sft.alphabet; ++s) {
        if (!sft.admissible(s, w.symbol(0))) continue;
        std::vector<std::uint8_t> sym(static_cast<std::size_t>(w.horizon()) + 1);
        sym[0] = static_cast<std::uint8_t>(s);
        for (int i = 0; i < w.horizon(); ++i) sym[i + 1] = w.symbol(i);
        out.push_back(WordPoint(std::move(sym)));
      }
      if (out.empty()) throw NotInImageError("no admissible predecessor symbol");
      return out;
    }
  }
  throw Error("unreachable");
}

std::vector<double> singular_set(const SystemSpec& sys) {
  if (sys.kind() != SystemKind::Iet) return {};
  const auto& a = sys.iet_data().breakpoints;
  return std::vector<double>(a.begin() + 1, a.end() - 1);
}

double singular_distance(const SystemSpec& sys, const PhasePoint& p) {
  if (sys.kind() != SystemKind::Iet) return std::numeric_limits<double>::infinity();
  double x = circle_of(p, "singular_distance").x;
  double best = std::numeric_limits<double>::infinity();
  for (double a : singular_set(sys)) best = std::min(best, std::fabs(x - a));
  return best;
}

std::vector<double> singular_preimages(const SystemSpec& sys, int depth) {
  if (sys.kind() != SystemKind::Iet || depth < 0) return {};
  const auto& iet = sys.iet_data();
  std::vector<double> level = singular_set(sys);
  std::vector<double> all = level;
  for (int k = 1; k <= depth; ++k) {
    std::vector<double> next;
    next.reserve(level.size());
    for (double x : level) {
      // the IET is one-to-one: each point has exactly one preimage
      for (int i = 0; i < iet.interval_count(); ++i) {
        double lo = iet.breakpoints[i] + iet.translations[i];
        double hi = iet.breakpoints[i + 1] + iet.translations[i];
        if (x >= lo && x < hi) {
          next.push_back(x - iet.translations[i]);
          break;
        }
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    level = std::move(next);
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

std::vector<WordPoint> enumerate_words(const SftData& sft, int length) {
  if (length < 1) throw Error("word length must be positive");
  auto arena = std::make_shared<std::vector<std::uint8_t>>();
  std::vector<std::uint8_t> stack(static_cast<std::size_t>(length));
  std::size_t count = 0;
  auto emit = [&](auto&& self, int pos) -> void {
    if (pos == length) {
      arena->insert(arena->end(), stack.begin(), stack.end());
      ++count;
      return;
    }
    for (int s = 0; s < sft.alphabet; ++s) {
      if (pos > 0 && !sft.admissible(stack[pos - 1], s)) continue;
      stack[pos] = static_cast<std::uint8_t>(s);
      self(self, pos + 1);
    }
  };
  emit(emit, 0);
  std::shared_ptr<const std::vector<std::uint8_t>> frozen = std::move(arena);
  std::vector<WordPoint> words;
  words.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    words.emplace_back(frozen, static_cast<std::uint32_t>(i * length),
                       static_cast<std::uint32_t>(length));
  return words;
}

namespace {

double seeded_phase(std::uint64_t seed, int stream) {
  std::mt19937_64 eng(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(stream) + 1);
  eng.discard(3);
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::vector<double> purged_grid(int resolution, double phase, const std::vector<double>& excluded,
                                double radius) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    double x = detail::frac((i + 0.5) / resolution + phase);
    if (!excluded.empty()) {
      auto it = std::lower_bound(excluded.begin(), excluded.end(), x);
      bool close = false;
      if (it != excluded.end() && *it - x <= radius) close = true;
      if (it != excluded.begin() && x - *(it - 1) <= radius) close = true;
      if (close) continue;
    }
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

CandidateSet candidates(const SystemSpec& sys, const CandidateOptions& opts) {
  if (opts.n_max < 1) throw Error("candidates: n_max must be >= 1");
  CandidateSet out;
  out.exclusion_radius = opts.exclusion_radius;
  char buf[160];
  if (sys.kind() == SystemKind::Sft) {
    int length = opts.n_max + opts.k_max + opts.guard;
    auto words = enumerate_words(sys.sft_data(), length);
    if (words.empty()) throw EmptyCandidateSetError("no admissible words at this length");
    out.points.reserve(words.size());
    for (auto& w : words) out.points.emplace_back(std::move(w));
    std::snprintf(buf, sizeof buf, "words L=%d count=%zu", length, out.points.size());
    out.descriptor = buf;
    return out;
  }
  if (opts.resolution < 1) throw Error("candidates: resolution must be >= 1");
  const std::vector<double> excluded = singular_preimages(sys, opts.n_max - 2);
  if (sys.kind() == SystemKind::TwoCircle) {
    for (int label = 0; label < 2; ++label) {
      double phase = seeded_phase(opts.seed, label);
      for (double x : purged_grid(opts.resolution, phase, {}, 0.0))
        out.points.push_back(LabeledPoint{label, x});
    }
    std::snprintf(buf, sizeof buf, "grid res=%d/circle seed=%llu", opts.resolution,
                  static_cast<unsigned long long>(opts.seed));
    out.descriptor = buf;
    return out;
  }
  double phase = seeded_phase(opts.seed, 0);
  auto xs = purged_grid(opts.resolution, phase, excluded, opts.exclusion_radius);
  if (xs.empty()) throw EmptyCandidateSetError("exclusion radius purged every grid point");
  out.points.reserve(xs.size());
  for (double x : xs) out.points.push_back(CirclePoint{x});
  std::snprintf(buf, sizeof buf, "grid res=%d seed=%llu purge_depth=%d radius=%g kept=%zu",
                opts.resolution, static_cast<unsigned long long>(opts.seed),
                std::max(opts.n_max - 2, -1), opts.exclusion_radius, out.points.size());
  out.descriptor = buf;
  return out;
}

}  // namespace epsn
