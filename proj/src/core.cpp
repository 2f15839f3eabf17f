#include "qsure/core.hpp"

#include <stdexcept>

namespace qsure::core {

ProbabilityMeasure make_probability(std::vector<Rat> mass) {
  if (mass.empty()) throw std::invalid_argument("probability measure: empty mass vector");
  Rat total = 0;
  for (const Rat& m : mass) {
    if (m < 0) throw std::invalid_argument("probability measure: negative mass");
    total += m;
  }
  if (total != 1) throw std::invalid_argument("probability measure: total mass is not 1");
  return ProbabilityMeasure{std::move(mass)};
}

OutcomeSet support_of(const ProbabilityMeasure& p) {
  OutcomeSet s = OutcomeSet::none(p.size());
  for (int w = 0; w < p.size(); ++w)
    if (p.mass[w] != 0) s.add(w);
  return s;
}

RobustModel::RobustModel(int n_outcomes, std::vector<ProbabilityMeasure> priors, bool convex)
    : n_(n_outcomes), priors_(std::move(priors)), convex_(convex) {
  if (n_ < 1 || n_ > 64) throw std::invalid_argument("model: outcome count must be in [1, 64]");
  if (priors_.empty()) throw std::invalid_argument("model: at least one prior required");
  support_ = OutcomeSet::none(n_);
  for (const auto& p : priors_) {
    if (p.size() != n_) throw std::invalid_argument("model: prior dimension mismatch");
    support_ = support_.unite(support_of(p));
  }
  polar_ = support_.complement();
}

Rv make_rv(const RobustModel& model, std::vector<Rat> values) {
  if (static_cast<int>(values.size()) != model.n_outcomes())
    throw std::invalid_argument("rv: dimension mismatch");
  for (int w : model.polar().outcomes()) values[w] = 0;
  return Rv{std::move(values)};
}

Rv constant_rv(const RobustModel& model, const Rat& c) {
  return make_rv(model, std::vector<Rat>(model.n_outcomes(), c));
}

QView make_qview(const RobustModel& model, ProbabilityMeasure q) {
  if (q.size() != model.n_outcomes()) throw std::invalid_argument("view: dimension mismatch");
  OutcomeSet supp = support_of(q);
  if (!supp.subset_of(model.support()))
    throw std::invalid_argument("view: measure charges a polar outcome");
  return QView{std::move(q), supp};
}

Rat total_variation(const SignedMeasure& mu, const OutcomeSet& a) {
  Rat total = 0;
  for (int w : a.outcomes()) total += abs(mu.mass[w]);
  return total;
}

Rat upper_probability(const RobustModel& model, const OutcomeSet& a) {
  Rat best = 0;
  for (const auto& p : model.priors()) {
    Rat v = p(a);
    if (v > best) best = v;
  }
  return best;
}

bool qs_leq(const RobustModel& model, const Rv& x, const Rv& y) {
  for (int w : model.support().outcomes())
    if (x.values[w] > y.values[w]) return false;
  return true;
}

Rat expectation(const ProbabilityMeasure& p, const Rv& x) {
  Rat total = 0;
  for (int w = 0; w < p.size(); ++w)
    if (p.mass[w] != 0) total += p.mass[w] * x.values[w];
  return total;
}

std::vector<Rat> project_jQ(const RobustModel& model, const Rv& x, const QView& q) {
  if (!q.support.subset_of(model.support()))
    throw std::invalid_argument("projection: view charges a polar outcome");
  std::vector<Rat> restricted;
  for (int w : q.support.outcomes()) restricted.push_back(x.values[w]);
  return restricted;
}

bool agree_on(const Rv& x, const Rv& y, const OutcomeSet& s) {
  for (int w : s.outcomes())
    if (x.values[w] != y.values[w]) return false;
  return true;
}

bool dominates(const std::vector<ProbabilityMeasure>& dominating,
               const std::vector<ProbabilityMeasure>& dominated) {
  if (dominating.empty() || dominated.empty())
    throw std::invalid_argument("dominates: empty family");
  int n = dominating.front().size();
  OutcomeSet dom = OutcomeSet::none(n);
  for (const auto& p : dominating) dom = dom.unite(support_of(p));
  OutcomeSet sub = OutcomeSet::none(n);
  for (const auto& p : dominated) sub = sub.unite(support_of(p));
  return sub.subset_of(dom);
}

bool equivalent_families(const std::vector<ProbabilityMeasure>& a,
                         const std::vector<ProbabilityMeasure>& b) {
  return dominates(a, b) && dominates(b, a);
}

ProbabilityMeasure find_dominating_measure(const RobustModel& model) {
  int k = static_cast<int>(model.priors().size());
  std::vector<Rat> mass(model.n_outcomes(), 0);
  for (const auto& p : model.priors())
    for (int w = 0; w < model.n_outcomes(); ++w) mass[w] += p.mass[w] / k;
  return make_probability(std::move(mass));
}

}  // namespace qsure::core
