#include "epsn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace epsn {

PartDescriptor PartDescriptor::interval(double lo, double hi) {
  if (!(lo < hi)) throw Error("interval part needs lo < hi");
  PartDescriptor p;
  p.kind = Kind::Interval;
  p.lo = lo;
  p.hi = hi;
  return p;
}

PartDescriptor PartDescriptor::labeled(int label, double lo, double hi) {
  if (!(lo < hi)) throw Error("interval part needs lo < hi");
  PartDescriptor p;
  p.kind = Kind::LabeledInterval;
  p.label = label;
  p.lo = lo;
  p.hi = hi;
  return p;
}

PartDescriptor PartDescriptor::cylinder(std::vector<std::uint8_t> word) {
  if (word.empty()) throw Error("cylinder part needs a non-empty word");
  PartDescriptor p;
  p.kind = Kind::Cylinder;
  p.word = std::move(word);
  return p;
}

bool PartDescriptor::contains(const PhasePoint& point) const {
  switch (kind) {
    case Kind::Interval: {
      const auto* c = std::get_if<CirclePoint>(&point);
      if (!c) return false;
      return c->x >= lo && c->x < hi;
    }
    case Kind::LabeledInterval: {
      const auto* l = std::get_if<LabeledPoint>(&point);
      if (!l) return false;
      return l->label == label && l->x >= lo && l->x < hi;
    }
    case Kind::Cylinder: {
      const auto* w = std::get_if<WordPoint>(&point);
      if (!w) return false;
      if (w->horizon() < static_cast<int>(word.size())) return false;
      for (std::size_t i = 0; i < word.size(); ++i)
        if (w->symbol(static_cast<int>(i)) != word[i]) return false;
      return true;
    }
  }
  return false;
}

std::string PartDescriptor::id() const {
  char buf[96];
  switch (kind) {
    case Kind::Interval:
      std::snprintf(buf, sizeof buf, "[%.12g,%.12g)", lo, hi);
      return buf;
    case Kind::LabeledInterval:
      std::snprintf(buf, sizeof buf, "circle%d[%.12g,%.12g)", label, lo, hi);
      return buf;
    case Kind::Cylinder: {
      std::string s = "[";
      for (auto v : word) s.push_back(static_cast<char>('0' + v));
      s.push_back(']');
      return s;
    }
  }
  return "?";
}

double point_coordinate(const PhasePoint& p, int word_base) {
  if (const auto* c = std::get_if<CirclePoint>(&p)) return c->x;
  if (const auto* l = std::get_if<LabeledPoint>(&p)) return l->x;
  const auto& w = std::get<WordPoint>(p);
  double v = 0.0;
  double scale = 1.0 / word_base;
  for (int i = 0; i < w.horizon(); ++i) {
    v += w.symbol(i) * scale;
    scale /= word_base;
  }
  return v;
}

TestFunction TestFunction::indicator(PartDescriptor part) {
  TestFunction f;
  f.kind_ = Kind::Indicator;
  f.part_ = part;
  f.lipschitz_ = std::nullopt;
  f.sup_norm_ = 1.0;
  f.id_ = "chi" + part.id();
  return f;
}

TestFunction TestFunction::trig(int frequency, int word_base) {
  if (frequency < 1) throw Error("trig frequency must be >= 1");
  TestFunction f;
  f.kind_ = Kind::Trig;
  f.frequency_ = frequency;
  f.word_base_ = word_base;
  f.lipschitz_ = 2.0 * M_PI * frequency;
  f.sup_norm_ = 1.0;
  f.id_ = "cos" + std::to_string(frequency);
  return f;
}

TestFunction TestFunction::coordinate(int word_base) {
  TestFunction f;
  f.kind_ = Kind::Coordinate;
  f.word_base_ = word_base;
  f.lipschitz_ = 1.0;
  f.sup_norm_ = 1.0;
  f.id_ = "x";
  return f;
}

double TestFunction::operator()(const PhasePoint& p) const {
  switch (kind_) {
    case Kind::Indicator:
      return part_.contains(p) ? 1.0 : 0.0;
    case Kind::Trig:
      return std::cos(2.0 * M_PI * frequency_ * point_coordinate(p, word_base_));
    case Kind::Coordinate:
      return point_coordinate(p, word_base_);
  }
  return 0.0;
}

double empirical_functional(const EmpiricalMeasure& m, const TestFunction& phi) {
  if (m.atoms.empty()) throw Error("empty measure");
  double sum = 0.0;
  for (const auto& a : m.atoms) sum += phi(a);
  return sum / static_cast<double>(m.atoms.size());
}

namespace {

bool parts_overlap(const PartDescriptor& a, const PartDescriptor& b) {
  using K = PartDescriptor::Kind;
  if (a.kind != b.kind) {
    // intervals vs labeled intervals live on different phase spaces; a
    // cylinder never overlaps an interval descriptor
    return false;
  }
  switch (a.kind) {
    case K::Interval:
      return a.lo < b.hi && b.lo < a.hi;
    case K::LabeledInterval:
      return a.label == b.label && a.lo < b.hi && b.lo < a.hi;
    case K::Cylinder: {
      const auto& s = a.word.size() <= b.word.size() ? a.word : b.word;
      const auto& t = a.word.size() <= b.word.size() ? b.word : a.word;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != t[i]) return false;
      return true;  // one prefix of the other
    }
  }
  return false;
}

}  // namespace

std::vector<double> partition_masses(const EmpiricalMeasure& m,
                                     const std::vector<PartDescriptor>& parts) {
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (parts_overlap(parts[i], parts[j]))
        throw OverlappingPartsError("parts " + parts[i].id() + " and " + parts[j].id() +
                                    " overlap");
  std::vector<double> masses;
  masses.reserve(parts.size());
  const double total = static_cast<double>(m.atoms.size());
  for (const auto& part : parts) {
    std::int64_t count = 0;
    for (const auto& a : m.atoms) count += part.contains(a) ? 1 : 0;
    masses.push_back(static_cast<double>(count) / total);
  }
  return masses;
}

std::vector<EmpiricalMeasure> measure_sequence(const SystemSpec& sys, double eps,
                                               const std::vector<int>& ns, const OrbitTable& table,
                                               const MeasureSequenceOptions& opts) {
  if (ns.empty()) throw Error("measure sequence needs at least one n");
  std::vector<EmpiricalMeasure> out;
  out.reserve(ns.size());
  for (int n : ns) {
    auto graph = closeness_graph(table, eps, n);
    auto set = exact_maximum(graph, table, opts.node_budget);
    if (set.status != SetStatus::MaximumExact && !opts.approximate)
      throw NotOptimalError("exact optimal set unavailable at n=" + std::to_string(n) +
                            " within the node budget");
    if (!verify_separated(sys, set)) throw Error("constructed set failed verify_separated");
    EmpiricalMeasure m;
    m.eps = eps;
    m.n = n;
    m.status = set.status;
    m.atoms = std::move(set.points);
    out.push_back(std::move(m));
  }
  return out;
}

InvarianceDefect invariance_defect(const SystemSpec& sys, const EmpiricalMeasure& m,
                                   const std::vector<TestFunction>& family) {
  if (family.empty()) throw Error("invariance defect needs a test family");
  for (const auto& a : m.atoms)
    if (sys.has_singular_set() && singular_distance(sys, a) == 0.0)
      throw SingularAtomError("measure atom lies in S");
  InvarianceDefect out;
  const double count = static_cast<double>(m.atoms.size());
  for (const auto& phi : family) {
    double sum = 0.0, sum_f = 0.0;
    for (const auto& a : m.atoms) {
      sum += phi(a);
      sum_f += phi(apply(sys, a));
    }
    InvarianceDefect::Row row;
    row.phi = phi.id();
    row.i_phi = sum / count;
    row.i_phi_f = sum_f / count;
    row.defect = std::fabs(row.i_phi - row.i_phi_f);
    out.per_phi.push_back(row);
    out.normalized_max = std::max(out.normalized_max, row.defect / (1.0 + phi.sup_norm()));
  }
  return out;
}

IndependenceCheck optimal_set_independence(const SystemSpec& sys, double eps, int n,
                                           const SeparatedSet& a, const SeparatedSet& b,
                                           const TestFunction& phi, double delta_hat_n) {
  if (a.eps != eps || b.eps != eps || a.n != n || b.n != n)
    throw MismatchedParametersError("independence check requires matching (eps, n)");
  if (a.status != SetStatus::MaximumExact || b.status != SetStatus::MaximumExact)
    throw NotOptimalError("independence check needs two exact optimal sets");
  if (!phi.lipschitz()) throw Error("independence bound needs a Lipschitz-tagged phi");
  EmpiricalMeasure ma{eps, n, a.status, a.points};
  EmpiricalMeasure mb{eps, n, b.status, b.points};
  IndependenceCheck out;
  out.gap = std::fabs(empirical_functional(ma, phi) - empirical_functional(mb, phi));
  out.bound = *phi.lipschitz() * delta_hat_n;
  (void)sys;
  return out;
}

SingularMass singular_mass(const SystemSpec& sys, const std::vector<EmpiricalMeasure>& ms,
                           const std::vector<double>& delta_hat) {
  SingularMass out;
  out.applicable = sys.has_singular_set();
  out.fraction.assign(ms.size(), 0.0);
  if (!out.applicable) return out;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const auto& m = ms[i];
    if (m.n < 1 || static_cast<std::size_t>(m.n) > delta_hat.size())
      throw Error("singular mass: no delta for n=" + std::to_string(m.n));
    double delta = delta_hat[static_cast<std::size_t>(m.n) - 1];
    std::int64_t inside = 0;
    for (const auto& a : m.atoms)
      if (singular_distance(sys, a) < delta) ++inside;
    out.fraction[i] = static_cast<double>(inside) / static_cast<double>(m.atoms.size());
  }
  return out;
}

double isometry_invariance_defect(const SystemSpec& sys, const EmpiricalMeasure& m, double omega,
                                  const std::vector<PartDescriptor>& parts) {
  if (sys.kind() != SystemKind::Doubling)
    throw UnsupportedSystemError("isometry invariance needs the doubling map");
  auto mass_of = [&](double lo, double hi) {
    // interval on the circle, possibly wrapping
    std::int64_t count = 0;
    lo = detail::frac(lo);
    hi = detail::frac(hi);
    for (const auto& a : m.atoms) {
      double x = std::get<CirclePoint>(a).x;
      bool in = lo <= hi ? (x >= lo && x < hi) : (x >= lo || x < hi);
      if (lo == hi) in = true;  // full circle
      count += in ? 1 : 0;
    }
    return static_cast<double>(count) / static_cast<double>(m.atoms.size());
  };
  double worst = 0.0;
  for (const auto& part : parts) {
    if (part.kind != PartDescriptor::Kind::Interval)
      throw Error("isometry invariance needs interval parts");
    double base = mass_of(part.lo, part.hi);
    double shifted = mass_of(part.lo + omega, part.hi + omega);
    worst = std::max(worst, std::fabs(base - shifted));
  }
  return worst;
}

PerronData perron(const SftData& sft, double tol, int max_iterations) {
  const int p = sft.alphabet;
  // primitivity: some power of M is entrywise positive (Wielandt bound)
  {
    std::vector<std::uint64_t> m(sft.transitions.begin(), sft.transitions.end());
    std::vector<std::uint64_t> acc = m;
    bool primitive = false;
    int limit = std::max(1, (p - 1) * (p - 1) + 1);
    for (int q = 1; q <= limit && !primitive; ++q) {
      bool positive = true;
      for (auto v : acc)
        if (v == 0) {
          positive = false;
          break;
        }
      if (positive) {
        primitive = true;
        break;
      }
      std::vector<std::uint64_t> next(static_cast<std::size_t>(p) * p, 0);
      for (int i = 0; i < p; ++i)
        for (int k = 0; k < p; ++k) {
          if (acc[i * p + k] == 0) continue;
          for (int j = 0; j < p; ++j) {
            next[i * p + j] += acc[i * p + k] * m[k * p + j];
            next[i * p + j] = std::min<std::uint64_t>(next[i * p + j], 1u << 20);  // saturate
          }
        }
      acc = std::move(next);
    }
    if (!primitive) throw NotPrimitiveError("transition matrix is not primitive");
  }
  std::vector<double> e(static_cast<std::size_t>(p), 1.0 / p);
  std::vector<double> next(static_cast<std::size_t>(p), 0.0);
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < max_iterations; ++it) {
    for (int i = 0; i < p; ++i) {
      double s = 0.0;
      for (int j = 0; j < p; ++j)
        if (sft.admissible(i, j)) s += e[j];
      next[i] = s;
    }
    double norm = 0.0;
    for (double v : next) norm += v;
    if (norm == 0.0) throw NotPrimitiveError("matrix power vanished");
    lambda = norm;  // e sums to 1, so |M e|_1 estimates lambda
    for (int i = 0; i < p; ++i) next[i] /= norm;
    residual = 0.0;
    for (int i = 0; i < p; ++i) {
      double me = 0.0;
      for (int j = 0; j < p; ++j)
        if (sft.admissible(i, j)) me += next[j];
      residual = std::max(residual, std::fabs(me - lambda * next[i]));
    }
    double step = 0.0;
    for (int i = 0; i < p; ++i) step = std::max(step, std::fabs(next[i] - e[i]));
    e = next;
    if (residual <= tol) break;
    (void)step;
  }
  if (residual > tol) throw NoConvergenceError("power iteration did not reach tolerance");
  // a primitive non-permutation 0/1 matrix has lambda > 1
  bool permutation = true;
  for (int i = 0; i < p && permutation; ++i) {
    int row = 0, col = 0;
    for (int j = 0; j < p; ++j) {
      row += sft.admissible(i, j) ? 1 : 0;
      col += sft.admissible(j, i) ? 1 : 0;
    }
    permutation = row == 1 && col == 1;
  }
  if (!permutation && !(lambda > 1.0))
    throw Error("primitive non-permutation matrix must have lambda > 1");
  PerronData pd;
  pd.lambda = lambda;
  pd.eigenvector = e;
  pd.residual = residual;
  pd.iterations = it + 1;
  pd.matrix = sft;
  return pd;
}

CylinderPrediction cylinder_prediction(const PerronData& pd,
                                       const std::vector<std::uint8_t>& word) {
  if (word.empty()) throw InadmissibleWordError("empty cylinder word");
  const int p = pd.matrix.alphabet;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] >= p) throw InadmissibleWordError("symbol outside the alphabet");
    if (i + 1 < word.size() && !pd.matrix.admissible(word[i], word[i + 1]))
      throw InadmissibleWordError("word violates the transition matrix");
  }
  const int t = static_cast<int>(word.size());
  const int last = word.back();
  CylinderPrediction out;
  out.length = t;
  out.last_symbol = last;
  out.absolute = std::pow(pd.lambda, -t) * pd.eigenvector[last];
  // normalization over all admissible length-t cylinders:
  // count_t(i) = number of admissible words of length t ending in i
  std::vector<double> count(static_cast<std::size_t>(p), 1.0);
  for (int step = 1; step < t; ++step) {
    std::vector<double> next(static_cast<std::size_t>(p), 0.0);
    for (int j = 0; j < p; ++j)
      for (int i = 0; i < p; ++i)
        if (pd.matrix.admissible(i, j)) next[j] += count[i];
    count = std::move(next);
  }
  double z = 0.0;
  for (int i = 0; i < p; ++i) z += count[i] * pd.eigenvector[i];
  out.normalized = pd.eigenvector[last] / z;
  return out;
}

double lebesgue_discrepancy(const EmpiricalMeasure& m, const std::vector<PartDescriptor>& parts) {
  auto masses = partition_masses(m, parts);
  double worst = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    worst = std::max(worst, std::fabs(masses[i] - parts[i].length()));
  return worst;
}

InvarianceBudget invariance_budget(const SystemSpec& sys, const EmpiricalMeasure& m,
                                   const TestFunction& phi, double delta_n, double eta_delta_n,
                                   double q_n) {
  InvarianceBudget out;
  double sup = phi.sup_norm();
  double omega = 2.0 * sup;  // trivial modulus
  if (phi.lipschitz()) omega = std::min(omega, *phi.lipschitz() * delta_n);
  out.omega_term = omega;
  out.eta_term = eta_delta_n;
  std::int64_t inside = 0;
  if (sys.has_singular_set()) {
    for (const auto& a : m.atoms)
      if (singular_distance(sys, a) < 2.0 * delta_n) ++inside;
  }
  out.singular_term =
      2.0 * sup * static_cast<double>(inside) / static_cast<double>(m.atoms.size());
  out.growth_term = 3.0 * sup * q_n;
  return out;
}

}  // namespace epsn
