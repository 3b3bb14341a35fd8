// SPDX-License-Identifier: Apache-2.0

#include "oracles.hpp"

#include <deque>
#include <functional>
#include <sstream>

#include "opm/rates.hpp"
#include "support.hpp"

namespace opm::testing {
namespace {

#define ORACLE_REQUIRE(cond, what)                     \
  do {                                                 \
    if (!(cond)) {                                     \
      std::ostringstream msg_;                         \
      msg_ << what << " (case " << i << ")";           \
      return msg_.str();                               \
    }                                                  \
  } while (false)

Rational q(long a, long b = 1) { return Rational(a) / b; }

// ---- port graphs

struct Nest {
  Architecture arch;
  std::vector<std::pair<std::string, Nest>> children;
};

// Connected components over every port of every level, with a substituted
// slot's ports glued to its filler's outer ports; intermediate ports are then
// erased.
std::set<std::set<std::string>> oracle_blocks(const Nest& root) {
  std::map<std::string, std::vector<std::string>> adj;
  std::map<std::string, std::string> final_name;
  auto link = [&](const std::string& a, const std::string& b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  std::function<void(const Nest&, const std::string&)> walk = [&](const Nest& n, const std::string& path) {
    auto node = [&](const PortRef& r) { return path + "|" + to_string(r); };
    std::set<std::string> substituted;
    for (const auto& [s, child] : n.children) substituted.insert(s);
    for (const Wire& w : n.arch.wires()) {
      for (const PortRef& r : w.ports) {
        adj[node(r)];
        link(node(w.ports.front()), node(r));
        if (r.outer && path.empty()) final_name[node(r)] = "out." + r.port;
        if (!r.outer && !substituted.count(r.slot)) {
          final_name[node(r)] = join_label(path, r.slot) + "." + r.port;
        }
      }
    }
    for (const auto& [s, child] : n.children) {
      std::string sub = join_label(path, s);
      for (const Port& p : n.arch.find_slot(s)->boundary.ports()) {
        link(node(PortRef::internal(s, p.name)), sub + "|" + to_string(PortRef::external(p.name)));
      }
      walk(child, sub);
    }
  };
  walk(root, "");
  std::set<std::string> seen;
  std::set<std::set<std::string>> out;
  for (const auto& [start, _] : adj) {
    if (seen.count(start)) continue;
    std::set<std::string> block;
    std::deque<std::string> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      std::string v = queue.front();
      queue.pop_front();
      if (auto it = final_name.find(v); it != final_name.end()) block.insert(it->second);
      for (const auto& u : adj[v]) {
        if (seen.insert(u).second) queue.push_back(u);
      }
    }
    if (!block.empty()) out.insert(std::move(block));
  }
  return out;
}

std::size_t port_count(const Architecture& a) {
  std::size_t n = a.output().size();
  for (const Slot& s : a.inputs()) n += s.boundary.size();
  return n;
}

std::size_t pick_arity(Rng& rng, int lo, int hi) { return static_cast<std::size_t>(rng.uniform(lo, hi)); }

// ---- relations

using Slots = std::vector<std::pair<std::string, std::vector<std::string>>>;

CausePairs witness_pairs(const SlotRelation& outer_slot, const SlotRelation& inner_slot) {
  CausePairs out;
  for (const auto& z : inner_slot.input_modes) {
    for (const auto& y : outer_slot.input_modes) {
      if (!inner_slot.pairs.count({z, y})) continue;
      for (const auto& [yy, x] : outer_slot.pairs) {
        if (yy == y) out.emplace(z, x);
      }
    }
  }
  return out;
}

// ---- kernels

std::vector<KernelTarget> random_targets(Rng& rng, const std::string& prefix) {
  std::vector<KernelTarget> ts;
  int n = rng.uniform(1, 3);
  for (int k = 0; k < n; ++k) {
    std::string slot = prefix + std::to_string(k);
    ts.push_back({slot, mode_names(slot + "m", pick_arity(rng, 1, 3))});
  }
  return ts;
}

bool every_slot_fed(const Kernel& k, const Distribution& r) {
  for (std::size_t t = 0; t < k.targets().size(); ++t) {
    Rational mass = 0;
    for (std::size_t x = 0; x < k.source().size(); ++x) {
      for (std::size_t y = 0; y < k.targets()[t].modes.size(); ++y) {
        mass += r.entries()[x].second.value() * k.at(x, t, y);
      }
    }
    if (mass == 0) return false;
  }
  return true;
}

struct PtCase {
  PtKernel outer;
  std::map<std::string, PtKernel> inners;
};

PtCase random_pt_case(Rng& rng) {
  auto xs = mode_names("x", pick_arity(rng, 1, 3));
  Distribution r = random_distribution(rng, xs, true);
  PtCase c{consistent_pt(random_kernel(rng, xs, random_targets(rng, "s")), r), {}};
  for (std::size_t t = 0; t < c.outer.kernel.targets().size(); ++t) {
    if (!rng.coin(0.7)) continue;
    const KernelTarget& slot = c.outer.kernel.targets()[t];
    const Distribution& prior = c.outer.slot_priors[t];
    while (true) {
      Kernel k = random_kernel(rng, slot.modes, random_targets(rng, "t"));
      if (!every_slot_fed(k, prior)) continue;
      c.inners.emplace(slot.slot, consistent_pt(k, prior));
      break;
    }
  }
  return c;
}

Rational path_sum(const Kernel& outer, const Kernel& inner, const std::string& x,
                  const KernelTarget& slot, const std::string& sub, const std::string& z) {
  Rational total = 0;
  for (const auto& y : slot.modes) total += outer.at(x, slot.slot, y) * inner.at(y, sub, z);
  return total;
}

void chain(const StochFunctor& s, const Term& term, const std::string& prefix, const std::string& x,
           const Rational& weight, std::map<std::string, Rational>& out) {
  const Kernel& k = s.kernel(term.generator).kernel;
  for (const KernelTarget& t : k.targets()) {
    std::string path = join_label(prefix, t.slot);
    for (const auto& y : t.modes) {
      Rational w = weight * k.at(x, t.slot, y);
      if (const Term* child = term.child(t.slot)) {
        chain(s, *child, path, y, w, out);
      } else {
        out[path + ":" + y] += w;
      }
    }
  }
}

Rational random_positive(Rng& rng) { return q(rng.uniform(1, 40), rng.uniform(1, 12)); }

template <class F>
Failure guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return std::string("unexpected exception: ") + e.what();
  }
}

}  // namespace

Failure portgraph_unit_laws(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      auto pool = random_boundaries(rng, 4);
      Architecture f = random_architecture(rng, pool, rng.pick(pool), pick_arity(rng, 0, 3));
      std::map<std::string, Architecture> ids;
      for (const Slot& s : f.inputs()) ids.emplace(s.label, identity(s.boundary));
      ORACLE_REQUIRE(compose(f, ids) == f, "right unit");
      ORACLE_REQUIRE(compose(identity(f.output()), {{"", f}}) == f, "left unit");
    }
    return std::nullopt;
  });
}

Failure portgraph_associativity(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      auto pool = random_boundaries(rng, 4);
      Nest root{random_architecture(rng, pool, rng.pick(pool), pick_arity(rng, 1, 3)), {}};
      std::map<std::string, Architecture> gs;
      std::map<std::string, Architecture> hs_flat;      // keyed i.j
      std::map<std::string, Architecture> inner_first;  // g_i(h_i)
      for (const Slot& s : root.arch.inputs()) {
        if (!rng.coin(0.7)) continue;
        Nest g{random_architecture(rng, pool, s.boundary, pick_arity(rng, 0, 3)), {}};
        std::map<std::string, Architecture> hs;
        for (const Slot& t : g.arch.inputs()) {
          if (!rng.coin(0.5)) continue;
          Architecture h = random_architecture(rng, pool, t.boundary, pick_arity(rng, 0, 2));
          hs.emplace(t.label, h);
          hs_flat.emplace(join_label(s.label, t.label), h);
          g.children.emplace_back(t.label, Nest{h, {}});
        }
        gs.emplace(s.label, g.arch);
        inner_first.emplace(s.label, compose(g.arch, hs));
        root.children.emplace_back(s.label, std::move(g));
      }
      Architecture left = compose(compose(root.arch, gs), hs_flat);
      Architecture right = compose(root.arch, inner_first);
      ORACLE_REQUIRE(left == right, "associativity");
      ORACLE_REQUIRE(blocks(left) == oracle_blocks(root), "component oracle");
      ORACLE_REQUIRE(validation_errors(left).empty(), "composite does not validate");
      std::size_t wired = 0;
      for (const Wire& w : left.wires()) wired += w.ports.size();
      ORACLE_REQUIRE(wired == port_count(left), "port conservation");
    }
    return std::nullopt;
  });
}

Failure portgraph_renaming(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      auto pool = random_boundaries(rng, 5);
      Architecture f = random_architecture(rng, pool, rng.pick(pool), pick_arity(rng, 1, 4));
      // rename s_k -> t_k and reverse slot order
      std::vector<Slot> slots;
      std::vector<std::pair<std::string, std::string>> pairs;
      for (auto it = f.inputs().rbegin(); it != f.inputs().rend(); ++it) {
        slots.push_back({"t" + it->label, it->boundary});
        pairs.emplace_back(it->label, "t" + it->label);
      }
      std::vector<Wire> wires;
      for (const Wire& w : f.wires()) {
        Wire r{w.type, {}};
        for (const PortRef& p : w.ports) r.ports.push_back(p.outer ? p : PortRef::internal("t" + p.slot, p.port));
        wires.push_back(std::move(r));
      }
      Architecture g = canonicalize(Architecture(std::move(slots), f.output(), std::move(wires)));
      ComponentCorrespondence corr(pairs);
      ORACLE_REQUIRE(equal(f, g, corr).equal, "renamed copy compares unequal");
      ORACLE_REQUIRE(equal(g, f, corr.inverse()).equal, "inverse renaming compares unequal");
    }
    return std::nullopt;
  });
}

Failure prob_composition(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      auto top = mode_names("i", pick_arity(rng, 1, 4));
      Distribution p = random_distribution(rng, top);
      std::map<std::string, Distribution> qs;
      std::map<std::string, Distribution> rs_flat;
      std::map<std::string, Distribution> inner_first;
      // product of the three factors along each path
      std::map<std::string, Rational> expected;
      for (const auto& a : top) {
        auto mid = mode_names("j", pick_arity(rng, 1, 3));
        Distribution qa = random_distribution(rng, mid);
        qs.emplace(a, qa);
        std::map<std::string, Distribution> rs;
        for (const auto& b : mid) {
          Distribution r = random_distribution(rng, mode_names("k", pick_arity(rng, 1, 3)));
          rs.emplace(b, r);
          rs_flat.emplace(a + "." + b, r);
          for (const auto& [c, v] : r.entries()) {
            expected[a + "." + b + "." + c] = p.at(a).value() * qa.at(b).value() * v.value();
          }
        }
        inner_first.emplace(a, compose_dist(qa, rs));
      }
      Distribution left = compose_dist(compose_dist(p, qs), rs_flat);
      Distribution right = compose_dist(p, inner_first);
      ORACLE_REQUIRE(left == right, "associativity");
      ORACLE_REQUIRE(left.size() == expected.size(), "entry count");
      Rational total = 0;
      for (const auto& [l, v] : left.entries()) {
        total += v.value();
        ORACLE_REQUIRE(expected.count(l) && v.value() == expected.at(l), "path product at " << l);
      }
      ORACLE_REQUIRE(total == 1, "composite sums to " << to_string(total));
    }
    return std::nullopt;
  });
}

Failure rel_composition(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      auto out = mode_names("x", pick_arity(rng, 1, 4));
      Slots outer_slots;
      std::map<std::string, ModeRelation> inners;
      int n = rng.uniform(1, 3);
      for (int s = 0; s < n; ++s) {
        std::string label = "s" + std::to_string(s);
        auto ys = mode_names("y", pick_arity(rng, 1, 4));
        outer_slots.emplace_back(label, ys);
        if (rng.coin(0.7)) {
          Slots inner_slots;
          int m = rng.uniform(1, 3);
          for (int t = 0; t < m; ++t) {
            inner_slots.emplace_back("t" + std::to_string(t), mode_names("z", pick_arity(rng, 1, 4)));
          }
          inners.emplace(label, random_relation(rng, ys, inner_slots));
        }
      }
      ModeRelation outer = random_relation(rng, out, outer_slots);
      ModeRelation c = compose_rel(outer, inners);
      ORACLE_REQUIRE(c.output_modes == out, "output modes");
      std::size_t k = 0;
      for (const SlotRelation& os : outer.slots) {
        auto it = inners.find(os.slot);
        if (it == inners.end()) {
          ORACLE_REQUIRE(k < c.slots.size() && c.slots[k++] == os, "untouched slot " << os.slot);
          continue;
        }
        for (const SlotRelation& is : it->second.slots) {
          ORACLE_REQUIRE(k < c.slots.size(), "missing slot");
          const SlotRelation& got = c.slots[k++];
          ORACLE_REQUIRE(got.slot == os.slot + "." + is.slot, "slot label " << got.slot);
          ORACLE_REQUIRE(got.input_modes == is.input_modes, "slot modes " << got.slot);
          ORACLE_REQUIRE(got.pairs == witness_pairs(os, is), "witness pairs at " << got.slot);
        }
      }
      ORACLE_REQUIRE(k == c.slots.size(), "extra slots");
    }
    return std::nullopt;
  });
}

Failure kernel_composition(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      auto xs = mode_names("x", pick_arity(rng, 1, 3));
      Kernel outer = random_kernel(rng, xs, random_targets(rng, "s"));
      std::map<std::string, Kernel> inners;
      for (const KernelTarget& t : outer.targets()) {
        if (rng.coin(0.7)) inners.emplace(t.slot, random_kernel(rng, t.modes, random_targets(rng, "t")));
      }
      Kernel c = compose_kernel(outer, inners);
      for (std::size_t x = 0; x < c.source().size(); ++x) {
        Rational row = 0;
        for (const Rational& v : c.rows()[x]) row += v;
        ORACLE_REQUIRE(row == 1, "row " << c.source()[x] << " sums to " << to_string(row));
      }
      for (const KernelTarget& slot : outer.targets()) {
        auto it = inners.find(slot.slot);
        for (const auto& x : xs) {
          if (it == inners.end()) {
            for (const auto& y : slot.modes) {
              ORACLE_REQUIRE(c.at(x, slot.slot, y) == outer.at(x, slot.slot, y), "kept entry");
            }
            continue;
          }
          for (const KernelTarget& sub : it->second.targets()) {
            for (const auto& z : sub.modes) {
              ORACLE_REQUIRE(c.at(x, slot.slot + "." + sub.slot, z) ==
                                 path_sum(outer, it->second, x, slot, sub.slot, z),
                             "path sum");
            }
          }
        }
      }
    }
    return std::nullopt;
  });
}

Failure pt_projections(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      PtCase c = random_pt_case(rng);
      PtKernel composite = compose_pt(c.outer, c.inners);
      const Kernel& k = composite.kernel;
      ORACLE_REQUIRE(pt_condition(c.outer).holds, "generator is not aggr-consistent");

      std::map<std::string, Rational> oracle_mass;
      std::map<std::string, CausePairs> oracle_pairs;
      for (const KernelTarget& slot : c.outer.kernel.targets()) {
        auto it = c.inners.find(slot.slot);
        for (const auto& [x, rx] : c.outer.source_prior.entries()) {
          if (it == c.inners.end()) {
            for (const auto& y : slot.modes) {
              Rational v = c.outer.kernel.at(x, slot.slot, y);
              oracle_mass[slot.slot] += rx.value() * v;
              if (v > 0) oracle_pairs[slot.slot].emplace(y, x);
            }
            continue;
          }
          const Kernel& inner = it->second.kernel;
          for (const KernelTarget& sub : inner.targets()) {
            std::string label = slot.slot + "." + sub.slot;
            for (const auto& z : sub.modes) {
              Rational v = path_sum(c.outer.kernel, inner, x, slot, sub.slot, z);
              ORACLE_REQUIRE(k.at(x, label, z) == v, "path sum at " << label);
              oracle_mass[label] += rx.value() * v;
              for (const auto& y : slot.modes) {
                if (c.outer.kernel.at(x, slot.slot, y) > 0 && inner.at(y, sub.slot, z) > 0) {
                  oracle_pairs[label].emplace(z, x);
                }
              }
            }
          }
        }
      }

      ORACLE_REQUIRE(pt_condition(composite).holds, "pt condition lost under composition");

      std::map<std::string, Distribution> inner_aggr;
      for (const auto& [label, in] : c.inners) inner_aggr.emplace(label, aggr(in));
      Distribution a = aggr(composite);
      ORACLE_REQUIRE(a == compose_dist(aggr(c.outer), inner_aggr), "aggr is not functorial");
      for (const auto& [label, p] : a.entries()) {
        ORACLE_REQUIRE(p.value() == oracle_mass[label], "slot mass at " << label);
      }

      std::map<std::string, ModeRelation> inner_supp;
      for (const auto& [label, in] : c.inners) inner_supp.emplace(label, supp(in.kernel));
      ModeRelation s = supp(k);
      ORACLE_REQUIRE(s == compose_rel(supp(c.outer.kernel), inner_supp), "supp does not commute");
      for (const SlotRelation& slot : s.slots) {
        ORACLE_REQUIRE(slot.pairs == oracle_pairs[slot.slot], "witness pairs at " << slot.slot);
      }
    }
    return std::nullopt;
  });
}

Failure rates_laws(unsigned seed, int cases) {
  return guarded([&]() -> Failure {
    Rng rng(seed);
    for (int i = 0; i < cases; ++i) {
      MeanTime t = rng.coin(0.1) ? MeanTime::infinite() : MeanTime(random_positive(rng));
      ORACLE_REQUIRE(invert(invert(t)) == t, "mean time involution");
      Rate r(rng.coin(0.1) ? q(0) : random_positive(rng));
      ORACLE_REQUIRE(invert(invert(r)) == r, "rate involution");

      std::vector<MeanTime> ts;
      Rational rate_sum = 0;
      int n = rng.uniform(1, 6);
      for (int k = 0; k < n; ++k) {
        Rational v = random_positive(rng);
        ts.emplace_back(v);
        rate_sum += 1 / v;
      }
      MeanTime combined = combine_meantime(ts);
      ORACLE_REQUIRE(invert(combined).value() == rate_sum, "harmonic mean is not the rate sum");
      ORACLE_REQUIRE(combined.value() == 1 / rate_sum, "combined mean time");

      // normalizing per level and composing equals normalizing the leaf rates
      std::vector<std::pair<std::string, Rate>> top;
      std::map<std::string, Distribution> children;
      std::vector<std::pair<std::string, Rate>> flat;
      int groups = rng.uniform(1, 4);
      for (int a = 0; a < groups; ++a) {
        std::string label = "c" + std::to_string(a);
        std::vector<std::pair<std::string, Rate>> kids;
        Rational sum = 0;
        int m = rng.uniform(1, 4);
        for (int b = 0; b < m; ++b) {
          Rational v = (b == 0 || rng.coin(0.8)) ? random_positive(rng) : q(0);
          kids.emplace_back("l" + std::to_string(b), Rate(v));
          flat.emplace_back(label + ".l" + std::to_string(b), Rate(v));
          sum += v;
        }
        top.emplace_back(label, Rate(sum));
        children.emplace(label, normalize(kids));
      }
      ORACLE_REQUIRE(compose_dist(normalize(top), children) == normalize(flat), "normalization square");
      Rational scale = random_positive(rng);
      std::vector<std::pair<std::string, Rate>> scaled;
      for (const auto& [l, v] : flat) scaled.emplace_back(l, Rate(v.value() * scale));
      ORACLE_REQUIRE(normalize(scaled) == normalize(flat), "normalization is not scale invariant");
    }
    return std::nullopt;
  });
}

Failure lifting_mutations(const Model& m, const std::string& stoch, std::size_t& variants) {
  variants = 0;
  return guarded([&]() -> Failure {
    const StochFunctor& S = *m.find_stoch(stoch);
    const ProbFunctor& P = m.prob.front();
    const ModeFunctor& M = m.modes.front();
    if (!check_lifting(m.presentation, S, P, M).passed()) return std::string("unmutated functor fails");
    for (const auto& [gen, pk] : S.kernels()) {
      const Kernel& k = pk.kernel;
      for (std::size_t x = 0; x < k.source().size(); ++x) {
        for (std::size_t t = 0; t < k.targets().size(); ++t) {
          for (std::size_t y = 0; y < k.targets()[t].modes.size(); ++y) {
            if (k.at(x, t, y) == 0) continue;
            if (!M.relation(gen).find(k.targets()[t].slot)->pairs.count({k.targets()[t].modes[y], k.source()[x]})) {
              continue;
            }
            StochFunctor broken = S;
            broken.set_kernel(gen, zero_entry(pk, x, t, y));
            ++variants;
            if (check_lifting(m.presentation, broken, P, M).passed()) {
              return gen + ": zeroing " + k.source()[x] + " -> " + k.targets()[t].slot + ":" +
                     k.targets()[t].modes[y] + " still lifts";
            }
          }
        }
      }
    }
    return std::nullopt;
  });
}

StochFunctor singleton_stoch(const OperadPresentation& p, const ProbFunctor& prob) {
  StochFunctor single("One");
  for (const Boundary& b : p.boundaries()) single.set_prior(b.name(), Distribution::unit("f"));
  for (const auto& [gen, d] : prob.values()) {
    std::vector<std::tuple<std::string, std::string, std::string, Rational>> entries;
    for (const auto& [slot, v] : d.entries()) entries.emplace_back("f", slot, "f", v.value());
    single.set_kernel(gen, make_generator_kernel(p, single, gen, entries));
  }
  return single;
}

std::map<std::string, Rational> chain_rule(const StochFunctor& s, const Term& term,
                                           const std::string& observed) {
  std::map<std::string, Rational> out;
  chain(s, term, "", observed, 1, out);
  return out;
}

#undef ORACLE_REQUIRE

}  // namespace opm::testing
