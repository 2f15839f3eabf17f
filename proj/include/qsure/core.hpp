#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsure/rational.hpp"

namespace qsure::core {

// Subset of a finite outcome space {0, ..., size-1}, stored as a bitmask.
// Spaces are capped at 64 outcomes; model constructors enforce the cap.
class OutcomeSet {
 public:
  OutcomeSet() : bits_(0), size_(0) {}
  OutcomeSet(std::uint64_t bits, int size) : bits_(bits), size_(size) {}

  static OutcomeSet none(int size) { return OutcomeSet(0, size); }
  static OutcomeSet all(int size) {
    return OutcomeSet(size == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << size) - 1), size);
  }
  static OutcomeSet of(int size, std::initializer_list<int> outcomes) {
    OutcomeSet s = none(size);
    for (int w : outcomes) s.add(w);
    return s;
  }

  int size() const { return size_; }
  std::uint64_t bits() const { return bits_; }
  bool contains(int w) const { return (bits_ >> w) & 1; }
  void add(int w) { bits_ |= std::uint64_t(1) << w; }
  void remove(int w) { bits_ &= ~(std::uint64_t(1) << w); }
  bool empty() const { return bits_ == 0; }
  int count() const { return __builtin_popcountll(bits_); }

  OutcomeSet complement() const { return OutcomeSet(all(size_).bits_ & ~bits_, size_); }
  OutcomeSet unite(const OutcomeSet& o) const { return OutcomeSet(bits_ | o.bits_, size_); }
  OutcomeSet intersect(const OutcomeSet& o) const { return OutcomeSet(bits_ & o.bits_, size_); }
  OutcomeSet minus(const OutcomeSet& o) const { return OutcomeSet(bits_ & ~o.bits_, size_); }
  bool subset_of(const OutcomeSet& o) const { return (bits_ & ~o.bits_) == 0; }

  friend bool operator==(const OutcomeSet& a, const OutcomeSet& b) {
    return a.bits_ == b.bits_ && a.size_ == b.size_;
  }

  std::vector<int> outcomes() const {
    std::vector<int> v;
    for (int w = 0; w < size_; ++w)
      if (contains(w)) v.push_back(w);
    return v;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int w : outcomes()) {
      if (!first) s += ",";
      s += std::to_string(w);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t bits_;
  int size_;
};

struct SignedMeasure {
  std::vector<Rat> mass;  // one signed mass per outcome
  int size() const { return static_cast<int>(mass.size()); }
};

struct ProbabilityMeasure {
  std::vector<Rat> mass;
  int size() const { return static_cast<int>(mass.size()); }
  Rat operator()(const OutcomeSet& a) const {
    Rat total = 0;
    for (int w : a.outcomes()) total += mass[w];
    return total;
  }
  friend bool operator==(const ProbabilityMeasure& p, const ProbabilityMeasure& q) {
    return p.mass == q.mass;
  }
};

// Validates non-negativity and total mass one.
ProbabilityMeasure make_probability(std::vector<Rat> mass);

OutcomeSet support_of(const ProbabilityMeasure& p);

// Finite robust model: an outcome space, a non-empty finite set of priors,
// and the derived support (union of prior supports) / polar complement.
// With `convex` set, the prior set is read as the convex hull of the listed
// priors; only the market-selector semantics consult the flag.
class RobustModel {
 public:
  RobustModel(int n_outcomes, std::vector<ProbabilityMeasure> priors, bool convex = false);

  int n_outcomes() const { return n_; }
  const std::vector<ProbabilityMeasure>& priors() const { return priors_; }
  bool convex() const { return convex_; }
  const OutcomeSet& support() const { return support_; }
  const OutcomeSet& polar() const { return polar_; }

 private:
  int n_;
  std::vector<ProbabilityMeasure> priors_;
  bool convex_;
  OutcomeSet support_;
  OutcomeSet polar_;
};

// Random variable in canonical form: values on polar outcomes are zeroed, so
// equality of canonical vectors is exactly quasi-sure equality.
struct Rv {
  std::vector<Rat> values;
  int size() const { return static_cast<int>(values.size()); }
  friend bool operator==(const Rv& a, const Rv& b) { return a.values == b.values; }
};

Rv make_rv(const RobustModel& model, std::vector<Rat> values);
Rv constant_rv(const RobustModel& model, const Rat& c);

// A probability measure absolutely continuous w.r.t. the model (no mass on
// polar outcomes), with its support cached. These are the views localization
// restricts along.
struct QView {
  ProbabilityMeasure measure;
  OutcomeSet support;
  friend bool operator==(const QView& a, const QView& b) { return a.measure == b.measure; }
};

// Rejects measures charging polar outcomes.
QView make_qview(const RobustModel& model, ProbabilityMeasure q);

// Total variation of mu on A. On a finite space this is the sum of absolute
// masses over A; the subset-supremum form is checked against it in tests.
Rat total_variation(const SignedMeasure& mu, const OutcomeSet& a);

// c(A) = max over priors of P(A).
Rat upper_probability(const RobustModel& model, const OutcomeSet& a);

// Quasi-sure order: X <= Y outside the polar set.
bool qs_leq(const RobustModel& model, const Rv& x, const Rv& y);

Rat expectation(const ProbabilityMeasure& p, const Rv& x);

// Restriction of X to supp(Q), in ascending outcome order.
std::vector<Rat> project_jQ(const RobustModel& model, const Rv& x, const QView& q);

bool agree_on(const Rv& x, const Rv& y, const OutcomeSet& s);

// Whether every null set of `dominating` (jointly, across the family) is a
// null set of `dominated`; on finite spaces this is support containment.
bool dominates(const std::vector<ProbabilityMeasure>& dominating,
               const std::vector<ProbabilityMeasure>& dominated);

bool equivalent_families(const std::vector<ProbabilityMeasure>& a,
                         const std::vector<ProbabilityMeasure>& b);

// Uniform mixture of the priors: a single measure equivalent to the whole
// prior set. Finite prior sets always admit one, so this cannot fail.
ProbabilityMeasure find_dominating_measure(const RobustModel& model);

}  // namespace qsure::core
