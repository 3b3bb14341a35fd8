// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace opm::testing {

const Model& corpus() {
  static const Model model = load_model(corpus_path());
  return model;
}

std::vector<Rational> random_simplex(Rng& rng, std::size_t n, bool positive) {
  std::vector<Rational> w(n);
  Rational total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) {
      x = positive ? rng.uniform(1, 6) : (rng.coin(0.3) ? 0 : rng.uniform(1, 6));
      total += x;
    }
  }
  for (auto& x : w) x /= total;
  return w;
}

Distribution random_distribution(Rng& rng, const std::vector<std::string>& labels, bool positive) {
  auto w = random_simplex(rng, labels.size(), positive);
  std::vector<std::pair<std::string, Probability>> entries;
  for (std::size_t i = 0; i < labels.size(); ++i) entries.emplace_back(labels[i], Probability(w[i]));
  return Distribution(std::move(entries));
}

std::vector<Boundary> random_boundaries(Rng& rng, std::size_t count) {
  static const std::vector<std::string> types{"a", "b", "c"};
  std::vector<Boundary> out;
  for (std::size_t b = 0; b < count; ++b) {
    std::vector<Port> ports;
    int n = rng.uniform(1, 4);
    for (int i = 0; i < n; ++i) ports.push_back({"p" + std::to_string(i), rng.pick(types)});
    out.emplace_back("B" + std::to_string(b), std::move(ports));
  }
  return out;
}

Architecture random_wiring(Rng& rng, std::vector<Slot> slots, const Boundary& output) {
  std::map<std::string, std::vector<PortRef>> by_type;
  for (const Slot& s : slots) {
    for (const Port& p : s.boundary.ports()) by_type[p.type].push_back(PortRef::internal(s.label, p.name));
  }
  for (const Port& p : output.ports()) by_type[p.type].push_back(PortRef::external(p.name));
  std::vector<Wire> wires;
  for (auto& [type, refs] : by_type) {
    int k = rng.uniform(1, static_cast<int>(refs.size()));
    std::vector<Wire> groups(static_cast<std::size_t>(k), Wire{type, {}});
    for (const PortRef& r : refs) groups[static_cast<std::size_t>(rng.uniform(0, k - 1))].ports.push_back(r);
    for (auto& g : groups) {
      if (!g.ports.empty()) wires.push_back(std::move(g));
    }
  }
  return canonicalize(Architecture(std::move(slots), output, std::move(wires)));
}

Architecture random_architecture(Rng& rng, const std::vector<Boundary>& pool,
                                 const Boundary& output, std::size_t arity) {
  std::vector<Slot> slots;
  for (std::size_t i = 0; i < arity; ++i) slots.push_back({"s" + std::to_string(i), rng.pick(pool)});
  return random_wiring(rng, std::move(slots), output);
}

std::set<std::set<std::string>> blocks(const Architecture& arch) {
  std::set<std::set<std::string>> out;
  for (const Wire& w : arch.wires()) {
    std::set<std::string> b;
    for (const PortRef& r : w.ports) b.insert(to_string(r));
    out.insert(std::move(b));
  }
  return out;
}

OperadPresentation with_generator(const OperadPresentation& p, const std::string& name,
                                  const Architecture& arch) {
  OperadPresentation q;
  for (const auto& [t, k] : p.types().entries()) q.types().add(t, k);
  for (const Boundary& b : p.boundaries()) q.add_boundary(b);
  for (const auto& [g, a] : p.generators()) q.add_generator(g, g == name ? arch : a);
  for (const CoherenceEquation& e : p.equations()) q.add_equation(e);
  return q;
}

ArchFixture read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  ArchFixture f;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::string head;
    if (!(words >> head) || head[0] == '#') continue;
    if (head == "output") {
      words >> f.output;
    } else if (head == "slot") {
      std::string label, boundary;
      words >> label >> boundary;
      f.slots.emplace_back(label, boundary);
    } else if (head == "block") {
      std::set<std::string> block;
      for (std::string w; words >> w;) block.insert(w);
      f.blocks.insert(std::move(block));
    }
  }
  return f;
}

std::vector<std::string> mode_names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

ModeRelation random_relation(Rng& rng, const std::vector<std::string>& out,
                             const std::vector<std::pair<std::string, std::vector<std::string>>>& slots,
                             double density) {
  ModeRelation rel{out, {}};
  for (const auto& [label, modes] : slots) {
    SlotRelation s{label, modes, {}};
    for (const auto& y : modes) {
      for (const auto& x : out) {
        if (rng.coin(density)) s.pairs.emplace(y, x);
      }
    }
    rel.slots.push_back(std::move(s));
  }
  return rel;
}

Kernel random_kernel(Rng& rng, const std::vector<std::string>& source,
                     const std::vector<KernelTarget>& targets, bool sparse) {
  std::size_t columns = 0;
  for (const auto& t : targets) columns += t.modes.size();
  while (true) {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t x = 0; x < source.size(); ++x) rows.push_back(random_simplex(rng, columns, !sparse));
    // every slot must receive mass from some row
    bool covered = true;
    std::size_t offset = 0;
    for (const auto& t : targets) {
      bool hit = false;
      for (const auto& row : rows) {
        for (std::size_t c = offset; c < offset + t.modes.size(); ++c) hit = hit || row[c] > 0;
      }
      covered = covered && hit;
      offset += t.modes.size();
    }
    if (covered) return Kernel(source, targets, std::move(rows));
  }
}

PtKernel consistent_pt(const Kernel& k, const Distribution& source_prior) {
  std::vector<Distribution> priors;
  std::size_t offset = 0;
  for (const KernelTarget& t : k.targets()) {
    std::vector<Rational> mass(t.modes.size(), 0);
    Rational total = 0;
    for (std::size_t x = 0; x < k.source().size(); ++x) {
      const Rational& r = source_prior.at(k.source()[x]).value();
      for (std::size_t y = 0; y < t.modes.size(); ++y) {
        Rational v = r * k.rows()[x][offset + y];
        mass[y] += v;
        total += v;
      }
    }
    std::vector<std::pair<std::string, Probability>> entries;
    for (std::size_t y = 0; y < t.modes.size(); ++y) {
      entries.emplace_back(t.modes[y], Probability(mass[y] / total));
    }
    priors.emplace_back(std::move(entries));
    offset += t.modes.size();
  }
  return PtKernel{k, source_prior, std::move(priors)};
}

PtKernel zero_entry(const PtKernel& k, std::size_t x, std::size_t t, std::size_t y) {
  auto rows = k.kernel.rows();
  std::size_t col = k.kernel.offset(t) + y;
  Rational v = rows[x][col];
  rows[x][col] = 0;
  if (v == 1) {
    rows[x][col == 0 ? 1 : 0] = 1;
  } else {
    for (auto& e : rows[x]) e /= (1 - v);
  }
  return PtKernel{Kernel(k.kernel.source(), k.kernel.targets(), std::move(rows)), k.source_prior,
                  k.slot_priors};
}

}  // namespace opm::testing
