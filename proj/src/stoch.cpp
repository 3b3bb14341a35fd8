// SPDX-License-Identifier: Apache-2.0

#include "opm/stoch.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "opm/error.hpp"

namespace opm {

Kernel::Kernel(std::vector<std::string> source, std::vector<KernelTarget> targets,
               std::vector<std::vector<Rational>> rows)
    : source_(std::move(source)), targets_(std::move(targets)), rows_(std::move(rows)) {
  std::set<std::string_view> labels;
  for (const auto& t : targets_) {
    if (!labels.insert(t.slot).second) throw ModelError("kernel target " + t.slot + " repeated");
  }
  if (rows_.size() != source_.size()) {
    throw ModelError("kernel has " + std::to_string(rows_.size()) + " rows for " +
                     std::to_string(source_.size()) + " source modes");
  }
  const std::size_t width = columns();
  for (std::size_t x = 0; x < rows_.size(); ++x) {
    if (rows_[x].size() != width) throw ModelError("kernel row " + source_[x] + " has the wrong width");
    Rational total = 0;
    for (const Rational& v : rows_[x]) {
      if (v < 0 || v > 1) throw ModelError("kernel entry " + to_string(v) + " outside [0, 1]");
      total += v;
    }
    if (total != 1) {
      throw ModelError("kernel row " + source_[x] + " sums to " + to_string(total) + ", not 1");
    }
  }
}

std::size_t Kernel::columns() const {
  std::size_t n = 0;
  for (const auto& t : targets_) n += t.modes.size();
  return n;
}

std::size_t Kernel::offset(std::size_t t) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < t; ++i) n += targets_[i].modes.size();
  return n;
}

const Rational& Kernel::at(std::size_t x, std::size_t t, std::size_t y) const {
  return rows_[x][offset(t) + y];
}

std::size_t Kernel::source_index(std::string_view mode) const {
  auto it = std::find(source_.begin(), source_.end(), mode);
  if (it == source_.end()) throw ModelError("kernel has no source mode " + std::string(mode));
  return static_cast<std::size_t>(it - source_.begin());
}

std::size_t Kernel::target_index(std::string_view slot) const {
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (targets_[i].slot == slot) return i;
  }
  throw ModelError("kernel has no target slot " + std::string(slot));
}

const Rational& Kernel::at(std::string_view x, std::string_view slot, std::string_view y) const {
  std::size_t t = target_index(slot);
  const auto& modes = targets_[t].modes;
  auto it = std::find(modes.begin(), modes.end(), y);
  if (it == modes.end()) throw ModelError("kernel slot " + std::string(slot) + " has no mode " + std::string(y));
  return at(source_index(x), t, static_cast<std::size_t>(it - modes.begin()));
}

Kernel identity_kernel(const std::vector<std::string>& modes) {
  std::vector<std::vector<Rational>> rows(modes.size(), std::vector<Rational>(modes.size(), 0));
  for (std::size_t i = 0; i < modes.size(); ++i) rows[i][i] = 1;
  return Kernel(modes, {KernelTarget{"", modes}}, std::move(rows));
}

Kernel compose_kernel(const Kernel& p, const std::map<std::string, Kernel>& qs) {
  for (const auto& [label, q] : qs) {
    std::size_t t = p.target_index(label);
    if (q.source() != p.targets()[t].modes) throw ModelError("mode-set mismatch at slot " + label);
  }
  std::vector<KernelTarget> targets;
  for (const KernelTarget& t : p.targets()) {
    auto it = qs.find(t.slot);
    if (it == qs.end()) {
      targets.push_back(t);
      continue;
    }
    for (const KernelTarget& sub : it->second.targets()) {
      targets.push_back(KernelTarget{join_label(t.slot, sub.slot), sub.modes});
    }
  }
  std::vector<std::vector<Rational>> rows;
  for (std::size_t x = 0; x < p.source().size(); ++x) {
    std::vector<Rational> row;
    for (std::size_t t = 0; t < p.targets().size(); ++t) {
      const KernelTarget& target = p.targets()[t];
      auto it = qs.find(target.slot);
      if (it == qs.end()) {
        for (std::size_t y = 0; y < target.modes.size(); ++y) row.push_back(p.at(x, t, y));
        continue;
      }
      const Kernel& q = it->second;
      std::vector<Rational> acc(q.columns(), 0);
      for (std::size_t y = 0; y < target.modes.size(); ++y) {
        const Rational& w = p.at(x, t, y);
        if (w == 0) continue;
        for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += w * q.rows()[y][c];
      }
      row.insert(row.end(), acc.begin(), acc.end());
    }
    rows.push_back(std::move(row));
  }
  return Kernel(p.source(), std::move(targets), std::move(rows));
}

ModeRelation supp(const Kernel& k) {
  ModeRelation rel{k.source(), {}};
  for (std::size_t t = 0; t < k.targets().size(); ++t) {
    const KernelTarget& target = k.targets()[t];
    SlotRelation slot{target.slot, target.modes, {}};
    for (std::size_t x = 0; x < k.source().size(); ++x) {
      for (std::size_t y = 0; y < target.modes.size(); ++y) {
        if (k.at(x, t, y) > 0) slot.pairs.emplace(target.modes[y], k.source()[x]);
      }
    }
    rel.slots.push_back(std::move(slot));
  }
  return rel;
}

PtKernel make_pt_kernel(Kernel kernel, Distribution source_prior,
                        std::vector<Distribution> slot_priors) {
  if (source_prior.labels() != kernel.source()) {
    throw ModelError("source prior " + to_string(source_prior) + " does not match the kernel's modes");
  }
  if (slot_priors.size() != kernel.targets().size()) {
    throw ModelError("expected one prior per kernel slot");
  }
  for (std::size_t i = 0; i < slot_priors.size(); ++i) {
    if (slot_priors[i].labels() != kernel.targets()[i].modes) {
      throw ModelError("prior for slot " + kernel.targets()[i].slot + " does not match its modes");
    }
  }
  return PtKernel{std::move(kernel), std::move(source_prior), std::move(slot_priors)};
}

namespace {

// weighted[t][y] = Σ_x r(x) p(x ↦ (t, y))
std::vector<std::vector<Rational>> weighted_targets(const PtKernel& k) {
  const Kernel& p = k.kernel;
  std::vector<std::vector<Rational>> out;
  for (std::size_t t = 0; t < p.targets().size(); ++t) {
    std::vector<Rational> col(p.targets()[t].modes.size(), 0);
    for (std::size_t x = 0; x < p.source().size(); ++x) {
      const Rational& r = k.source_prior.entries()[x].second.value();
      for (std::size_t y = 0; y < col.size(); ++y) col[y] += r * p.at(x, t, y);
    }
    out.push_back(std::move(col));
  }
  return out;
}

}  // namespace

PtConditionReport pt_condition(const PtKernel& k, const Rational& tolerance) {
  PtConditionReport report;
  report.max_residual = 0;
  auto weighted = weighted_targets(k);
  for (std::size_t t = 0; t < weighted.size(); ++t) {
    const KernelTarget& target = k.kernel.targets()[t];
    Rational mass = 0;
    for (const Rational& v : weighted[t]) mass += v;
    if (mass == 0) report.empty_slots.push_back(target.slot);
    for (std::size_t y = 0; y < weighted[t].size(); ++y) {
      Rational expected = mass * k.slot_priors[t].entries()[y].second.value();
      Rational residual = abs(weighted[t][y] - expected);
      if (residual > report.max_residual) report.max_residual = residual;
      if (residual > tolerance) {
        report.violations.push_back(
            PtResidual{target.slot, target.modes[y], weighted[t][y], expected, residual});
      }
    }
  }
  report.holds = report.violations.empty() && report.empty_slots.empty();
  return report;
}

Distribution aggr(const PtKernel& k) {
  auto weighted = weighted_targets(k);
  std::vector<std::pair<std::string, Probability>> out;
  for (std::size_t t = 0; t < weighted.size(); ++t) {
    Rational mass = 0;
    for (const Rational& v : weighted[t]) mass += v;
    out.emplace_back(k.kernel.targets()[t].slot, Probability(mass));
  }
  return Distribution(std::move(out));
}

PtKernel compose_pt(const PtKernel& outer, const std::map<std::string, PtKernel>& inners) {
  std::map<std::string, Kernel> qs;
  for (const auto& [label, inner] : inners) {
    std::size_t t = outer.kernel.target_index(label);
    if (!(inner.source_prior == outer.slot_priors[t])) {
      throw ModelError("prior mismatch at slot " + label);
    }
    qs.emplace(label, inner.kernel);
  }
  Kernel kernel = compose_kernel(outer.kernel, qs);
  std::vector<Distribution> priors;
  for (std::size_t t = 0; t < outer.kernel.targets().size(); ++t) {
    auto it = inners.find(outer.kernel.targets()[t].slot);
    if (it == inners.end()) {
      priors.push_back(outer.slot_priors[t]);
    } else {
      priors.insert(priors.end(), it->second.slot_priors.begin(), it->second.slot_priors.end());
    }
  }
  return PtKernel{std::move(kernel), outer.source_prior, std::move(priors)};
}

void StochFunctor::set_prior(std::string boundary, Distribution prior) {
  priors_.insert_or_assign(std::move(boundary), std::move(prior));
}

void StochFunctor::set_kernel(std::string generator, PtKernel kernel) {
  kernels_.insert_or_assign(std::move(generator), std::move(kernel));
}

const Distribution& StochFunctor::prior(std::string_view boundary) const {
  auto it = priors_.find(std::string(boundary));
  if (it == priors_.end()) {
    throw ModelError("functor " + name_ + " has no prior for " + std::string(boundary));
  }
  return it->second;
}

const PtKernel& StochFunctor::kernel(std::string_view generator) const {
  auto it = kernels_.find(std::string(generator));
  if (it == kernels_.end()) {
    throw ModelError("functor " + name_ + " has no kernel for " + std::string(generator));
  }
  return it->second;
}

PtKernel make_generator_kernel(
    const OperadPresentation& p, const StochFunctor& S, std::string_view generator,
    const std::vector<std::tuple<std::string, std::string, std::string, Rational>>& entries) {
  const Architecture& arch = p.generator(generator);
  const Distribution& source_prior = S.prior(arch.output().name());
  std::vector<KernelTarget> targets;
  std::vector<Distribution> slot_priors;
  for (const Slot& s : arch.inputs()) {
    const Distribution& prior = S.prior(s.boundary.name());
    targets.push_back(KernelTarget{s.label, prior.labels()});
    slot_priors.push_back(prior);
  }
  const auto source = source_prior.labels();
  std::size_t width = 0;
  for (const auto& t : targets) width += t.modes.size();
  std::vector<std::vector<Rational>> rows(source.size(), std::vector<Rational>(width, 0));
  for (const auto& [x, slot, y, value] : entries) {
    auto xi = std::find(source.begin(), source.end(), x);
    if (xi == source.end()) {
      throw ModelError("unknown mode " + x + " on " + arch.output().name());
    }
    std::size_t offset = 0;
    bool found = false;
    for (std::size_t t = 0; t < targets.size() && !found; ++t) {
      if (targets[t].slot == slot) {
        auto yi = std::find(targets[t].modes.begin(), targets[t].modes.end(), y);
        if (yi == targets[t].modes.end()) {
          throw ModelError("unknown mode " + y + " on " + arch.inputs()[t].boundary.name());
        }
        rows[xi - source.begin()][offset + (yi - targets[t].modes.begin())] = value;
        found = true;
      }
      offset += targets[t].modes.size();
    }
    if (!found) throw ModelError("generator " + std::string(generator) + " has no slot " + slot);
  }
  return make_pt_kernel(Kernel(source, std::move(targets), std::move(rows)), source_prior,
                        std::move(slot_priors));
}

PtKernel evaluate(const OperadPresentation& p, const StochFunctor& S, const Term& term) {
  const PtKernel& k = S.kernel(term.generator);
  std::map<std::string, PtKernel> inners;
  for (const Term& c : term.children) inners.emplace(c.slot, evaluate(p, S, c));
  return compose_pt(k, inners);
}

bool LiftingReport::passed() const {
  return problems.empty() &&
         std::all_of(generators.begin(), generators.end(),
                     [](const GeneratorLifting& g) { return g.passed(); }) &&
         std::all_of(equations.begin(), equations.end(),
                     [](const EquationLifting& e) { return e.passed(); });
}

namespace {

void diff_relations(const SlotRelation& a, const SlotRelation& b, const std::string& label,
                    std::vector<std::string>& only_a, std::vector<std::string>& only_b) {
  for (const auto& [y, x] : a.pairs) {
    if (!b.pairs.count({y, x})) only_a.push_back(label + ": " + y + " -> " + x);
  }
  for (const auto& [y, x] : b.pairs) {
    if (!a.pairs.count({y, x})) only_b.push_back(label + ": " + y + " -> " + x);
  }
}

bool same_modes(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return std::set<std::string>(a.begin(), a.end()) == std::set<std::string>(b.begin(), b.end());
}

}  // namespace

LiftingReport check_lifting(const OperadPresentation& p, const StochFunctor& S,
                            const ProbFunctor& P, const ModeFunctor& M,
                            const Rational& tolerance) {
  check_shape(p, P);
  check_shape(p, M);
  LiftingReport report;
  report.stoch = S.name();
  report.prob = P.name();
  report.modes = M.name();

  for (const auto& [boundary, set] : M.mode_sets()) {
    auto it = S.priors().find(boundary);
    if (it == S.priors().end()) {
      report.problems.push_back("no prior for boundary " + boundary);
    } else if (!same_modes(it->second.labels(), set.ids())) {
      report.problems.push_back("prior modes for " + boundary + " differ from the mode set");
    }
  }

  for (const auto& [gen, arch] : p.generators()) {
    GeneratorLifting g;
    g.generator = gen;
    const PtKernel& k = S.kernel(gen);
    g.pt = pt_condition(k, tolerance);

    Distribution a = aggr(k);
    g.aggr_value = to_string(a);
    const Distribution& expected = P.at(gen);
    g.aggr_ok = a.size() == expected.size();
    for (const auto& [slot, prob] : a.entries()) {
      if (!expected.contains(slot) || abs(prob.value() - expected.at(slot).value()) > tolerance) {
        g.aggr_ok = false;
      }
    }

    ModeRelation s = supp(k.kernel);
    const ModeRelation& rel = M.relation(gen);
    if (!same_modes(s.output_modes, rel.output_modes)) {
      g.problems.push_back("output modes differ between kernel and relation");
    }
    for (const SlotRelation& slot : s.slots) {
      const SlotRelation* other = rel.find(slot.slot);
      if (!other) {
        g.problems.push_back("relation misses slot " + slot.slot);
        continue;
      }
      diff_relations(slot, *other, slot.slot, g.only_kernel, g.only_relation);
    }
    g.supp_ok = g.only_kernel.empty() && g.only_relation.empty();
    report.generators.push_back(std::move(g));
  }

  for (std::size_t i = 0; i < p.equations().size(); ++i) {
    const CoherenceEquation& e = p.equations()[i];
    EquationLifting eq;
    eq.equation = i;
    eq.lhs = to_string(e.lhs);
    eq.rhs = to_string(e.rhs);
    eq.max_difference = 0;
    PtKernel left = evaluate(p, S, e.lhs);
    PtKernel right = evaluate(p, S, e.rhs);
    eq.priors_ok = left.source_prior == right.source_prior;
    eq.kernel_ok = same_modes(left.kernel.source(), right.kernel.source());
    if (!eq.kernel_ok) eq.differences.push_back("root modes differ");

    Distribution la = aggr(left);
    Distribution ra = aggr(right);
    ModeRelation ls = supp(left.kernel);
    ModeRelation rs = supp(right.kernel);
    eq.aggr_ok = true;
    eq.supp_ok = true;
    for (std::size_t t = 0; t < left.kernel.targets().size() && eq.kernel_ok; ++t) {
      const KernelTarget& lt = left.kernel.targets()[t];
      auto target = e.corr.map(lt.slot);
      if (!target) throw ModelError("equation correspondence misses leaf " + lt.slot);
      std::size_t rt = right.kernel.target_index(*target);
      if (!(left.slot_priors[t] == right.slot_priors[rt])) {
        eq.priors_ok = false;
        eq.differences.push_back("leaf prior differs at " + lt.slot);
      }
      if (abs(la.at(lt.slot).value() - ra.at(*target).value()) > tolerance) eq.aggr_ok = false;
      std::vector<std::string> only_l;
      std::vector<std::string> only_r;
      diff_relations(*ls.find(lt.slot), *rs.find(*target), lt.slot, only_l, only_r);
      if (!only_l.empty() || !only_r.empty()) eq.supp_ok = false;

      for (const auto& x : left.kernel.source()) {
        for (const auto& y : lt.modes) {
          Rational d = abs(left.kernel.at(x, lt.slot, y) - right.kernel.at(x, *target, y));
          if (d > eq.max_difference) eq.max_difference = d;
          if (d > tolerance) {
            eq.kernel_ok = false;
            eq.differences.push_back(x + " -> " + lt.slot + ":" + y + " differs by " + to_string(d));
          }
        }
      }
    }
    report.equations.push_back(std::move(eq));
  }
  return report;
}

Distribution diagnose(const OperadPresentation& p, const StochFunctor& S, const Term& term,
                      std::string_view observed_mode) {
  PtKernel k = evaluate(p, S, term);
  const auto& source = k.kernel.source();
  auto it = std::find(source.begin(), source.end(), observed_mode);
  if (it == source.end()) {
    throw ModelError("unsupported observation: " + output_boundary(p, term) + " has no mode " +
                     std::string(observed_mode));
  }
  std::size_t x = static_cast<std::size_t>(it - source.begin());
  if (k.source_prior.entries()[x].second.value() == 0) {
    throw ModelError("unsupported observation: " + std::string(observed_mode) +
                     " has zero prior probability");
  }
  std::vector<std::pair<std::string, Probability>> out;
  for (std::size_t t = 0; t < k.kernel.targets().size(); ++t) {
    const KernelTarget& target = k.kernel.targets()[t];
    for (std::size_t y = 0; y < target.modes.size(); ++y) {
      out.emplace_back(target.slot + ":" + target.modes[y], Probability(k.kernel.at(x, t, y)));
    }
  }
  return Distribution(std::move(out));
}

}  // namespace opm
