#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "epsn/complexity.hpp"
#include "epsn/separated_sets.hpp"

namespace epsn {

// Equal-weight atomic measure on an optimal (eps,n)-separated set. Weights
// are 1/C by construction; masses are integer atom counts over C.
struct EmpiricalMeasure {
  double eps = 0.0;
  int n = 0;
  SetStatus status = SetStatus::MaximalGreedy;
  std::vector<PhasePoint> atoms;
  std::int64_t complexity() const { return static_cast<std::int64_t>(atoms.size()); }
};

// Measurable set descriptor with an exact membership predicate.
struct PartDescriptor {
  enum class Kind { Interval, LabeledInterval, Cylinder };
  Kind kind = Kind::Interval;
  double lo = 0.0, hi = 0.0;  // [lo, hi)
  int label = -1;             // LabeledInterval
  std::vector<std::uint8_t> word;  // Cylinder prefix

  static PartDescriptor interval(double lo, double hi);
  static PartDescriptor labeled(int label, double lo, double hi);
  static PartDescriptor cylinder(std::vector<std::uint8_t> word);
  bool contains(const PhasePoint& p) const;
  double length() const { return hi - lo; }
  std::string id() const;
};

// Test function family: indicators (set masses), trig cos(2*pi*j*x) and the
// coordinate map, both Lipschitz-tagged for error budgets. Word points are
// mapped to [0,1) by the base-p digit expansion (Lipschitz-1 for the word
// metric).
class TestFunction {
 public:
  static TestFunction indicator(PartDescriptor part);
  static TestFunction trig(int frequency, int word_base = 2);
  static TestFunction coordinate(int word_base = 2);

  double operator()(const PhasePoint& p) const;
  std::optional<double> lipschitz() const { return lipschitz_; }
  double sup_norm() const { return sup_norm_; }
  const std::string& id() const { return id_; }

 private:
  TestFunction() = default;
  enum class Kind { Indicator, Trig, Coordinate };
  Kind kind_ = Kind::Coordinate;
  PartDescriptor part_;
  int frequency_ = 0;
  int word_base_ = 2;
  std::optional<double> lipschitz_;
  double sup_norm_ = 1.0;
  std::string id_;
};

double point_coordinate(const PhasePoint& p, int word_base);

// I_{eps,n}(phi) = (1/C) sum over atoms of phi.
double empirical_functional(const EmpiricalMeasure& m, const TestFunction& phi);

// Atom fractions per part; parts must be pairwise disjoint.
std::vector<double> partition_masses(const EmpiricalMeasure& m,
                                     const std::vector<PartDescriptor>& parts);

struct MeasureSequenceOptions {
  std::int64_t node_budget = 500000;
  bool approximate = false;          // accept greedy-only sets, marked
  bool force_iet_closed_form = false;  // unused; closed form never builds atoms
};

// One empirical measure per n from exact-optimal sets; refuses greedy-only
// sets unless approximate is set.
std::vector<EmpiricalMeasure> measure_sequence(const SystemSpec& sys, double eps,
                                               const std::vector<int>& ns, const OrbitTable& table,
                                               const MeasureSequenceOptions& opts);

struct InvarianceDefect {
  double normalized_max = 0.0;  // max |I(phi) - I(phi o f)| / (1 + sup|phi|)
  struct Row {
    std::string phi;
    double i_phi = 0.0;
    double i_phi_f = 0.0;
    double defect = 0.0;  // un-normalized
  };
  std::vector<Row> per_phi;
};

InvarianceDefect invariance_defect(const SystemSpec& sys, const EmpiricalMeasure& m,
                                   const std::vector<TestFunction>& family);

struct IndependenceCheck {
  double gap = 0.0;
  double bound = 0.0;  // L * delta_hat_n for Lipschitz phi
};

// Thm 1: two optimal sets induce the same functional up to the modulus of
// continuity at delta_n.
IndependenceCheck optimal_set_independence(const SystemSpec& sys, double eps, int n,
                                           const SeparatedSet& a, const SeparatedSet& b,
                                           const TestFunction& phi, double delta_hat_n);

struct SingularMass {
  bool applicable = false;  // false when S is empty
  std::vector<double> fraction;  // per measure: atoms within delta_hat_n of S
};

SingularMass singular_mass(const SystemSpec& sys, const std::vector<EmpiricalMeasure>& ms,
                           const std::vector<double>& delta_hat);

// Max |mass(part) - mass(part + omega)| over an interval partition; only
// defined for the doubling map (it commutes with the rotation group).
double isometry_invariance_defect(const SystemSpec& sys, const EmpiricalMeasure& m, double omega,
                                  const std::vector<PartDescriptor>& parts);

struct PerronData {
  double lambda = 0.0;
  std::vector<double> eigenvector;  // entrywise positive, sums to 1
  double residual = 0.0;
  int iterations = 0;
  SftData matrix;
};

// Power iteration for the leading eigenpair of a primitive 0/1 matrix.
PerronData perron(const SftData& sft, double tol = 1e-12, int max_iterations = 1000000);

struct CylinderPrediction {
  double absolute = 0.0;    // lambda^{-t} e_i, the paper's form
  double normalized = 0.0;  // absolute / sum over admissible length-t cylinders
  int length = 0;
  int last_symbol = 0;
};

// mu(C) = lambda^{-t} e_i for an admissible cylinder of length t ending in
// i. The absolute form is not normalized over same-length cylinders; the
// normalized field divides by the total so ratio comparisons are exact.
CylinderPrediction cylinder_prediction(const PerronData& pd, const std::vector<std::uint8_t>& word);

// Max |mass(part) - length(part)| over equal-length interval parts.
double lebesgue_discrepancy(const EmpiricalMeasure& m, const std::vector<PartDescriptor>& parts);

struct InvarianceBudget {
  double omega_term = 0.0;     // modulus of continuity at delta_n
  double eta_term = 0.0;       // continuity modulus of f at delta_n
  double singular_term = 0.0;  // 2 sup|phi| * |A in O_{2 delta_n}(S)| / C
  double growth_term = 0.0;    // 3 sup|phi| * q_n
  double total() const { return omega_term + eta_term + singular_term + growth_term; }
};

// Thm 2 proof bound Delta(1) + Delta(2) evaluated from computable
// quantities; valid upper bound for |I(phi) - I(phi o f)| when delta_n
// dominates every d(x,y) with d_n(x,y) <= eps.
InvarianceBudget invariance_budget(const SystemSpec& sys, const EmpiricalMeasure& m,
                                   const TestFunction& phi, double delta_n, double eta_delta_n,
                                   double q_n);

}  // namespace epsn
