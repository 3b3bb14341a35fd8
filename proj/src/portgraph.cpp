// SPDX-License-Identifier: Apache-2.0

#include "opm/portgraph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "opm/error.hpp"

namespace opm {

std::string_view to_string(InterfaceKind kind) {
  return kind == InterfaceKind::physical ? "physical" : "digital";
}

void TypeTable::add(std::string name, InterfaceKind kind) {
  if (contains(name)) throw ModelError("interface type " + name + " declared twice");
  entries_.emplace_back(std::move(name), kind);
}

bool TypeTable::contains(std::string_view name) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& e) { return e.first == name; });
}

InterfaceKind TypeTable::kind(std::string_view name) const {
  for (const auto& [n, k] : entries_) {
    if (n == name) return k;
  }
  throw ModelError("unknown interface type " + std::string(name));
}

Boundary::Boundary(std::string name, std::vector<Port> ports)
    : name_(std::move(name)), ports_(std::move(ports)) {
  std::set<std::string_view> seen;
  for (const auto& p : ports_) {
    if (!seen.insert(p.name).second) {
      throw ModelError("duplicate port " + p.name + " on boundary " + name_);
    }
  }
}

const Port* Boundary::find(std::string_view port) const {
  auto it = std::find_if(ports_.begin(), ports_.end(),
                         [&](const Port& p) { return p.name == port; });
  return it == ports_.end() ? nullptr : &*it;
}

std::string to_string(const PortRef& ref) {
  if (ref.outer) return "out." + ref.port;
  return join_label(ref.slot, ref.port);
}

bool operator<(const Wire& a, const Wire& b) {
  if (a.ports != b.ports) return a.ports < b.ports;
  return a.type < b.type;
}

std::string to_string(const Wire& wire) {
  std::string out = "{";
  for (std::size_t i = 0; i < wire.ports.size(); ++i) {
    if (i) out += ", ";
    out += to_string(wire.ports[i]);
  }
  out += "}";
  if (!wire.type.empty()) out += ": " + wire.type;
  return out;
}

Architecture::Architecture(std::vector<Slot> inputs, Boundary output,
                           std::vector<Wire> wires)
    : inputs_(std::move(inputs)), output_(std::move(output)), wires_(std::move(wires)) {
  std::set<std::string_view> labels;
  for (const auto& s : inputs_) {
    if (!labels.insert(s.label).second) throw ModelError("duplicate slot label " + s.label);
  }
}

const Slot* Architecture::find_slot(std::string_view label) const {
  auto it = std::find_if(inputs_.begin(), inputs_.end(),
                         [&](const Slot& s) { return s.label == label; });
  return it == inputs_.end() ? nullptr : &*it;
}

const Port* Architecture::resolve(const PortRef& ref) const {
  if (ref.outer) return output_.find(ref.port);
  const Slot* slot = find_slot(ref.slot);
  return slot ? slot->boundary.find(ref.port) : nullptr;
}

std::string join_label(std::string_view prefix, std::string_view label) {
  if (prefix.empty()) return std::string(label);
  if (label.empty()) return std::string(prefix);
  std::string out(prefix);
  out += '.';
  out += label;
  return out;
}

namespace {

std::string describe_unknown(const Architecture& arch, const PortRef& ref) {
  if (ref.outer) {
    return "unknown port " + ref.port + " on " + arch.output().name();
  }
  const Slot* slot = arch.find_slot(ref.slot);
  if (!slot) return "unknown slot " + ref.slot;
  return "unknown port " + ref.port + " on " + slot->boundary.name();
}

// Canonical wires plus every problem found along the way. `attached` receives
// the set of ports that appear in some wire.
std::vector<Wire> analyse(const Architecture& arch, std::vector<std::string>& errors,
                          std::set<PortRef>* attached) {
  std::map<PortRef, std::size_t> owner;
  std::vector<Wire> out;
  for (std::size_t w = 0; w < arch.wires().size(); ++w) {
    const Wire& wire = arch.wires()[w];
    if (wire.ports.empty()) continue;
    Wire canon;
    canon.type = wire.type;
    std::set<PortRef> members(wire.ports.begin(), wire.ports.end());
    bool conflict = false;
    for (const PortRef& ref : members) {
      const Port* port = arch.resolve(ref);
      if (!port) {
        errors.push_back(describe_unknown(arch, ref));
        continue;
      }
      auto [it, fresh] = owner.emplace(ref, w);
      if (!fresh) {
        errors.push_back("port " + to_string(ref) + " attached to two wires");
        continue;
      }
      if (canon.type.empty()) {
        canon.type = port->type;
      } else if (canon.type != port->type) {
        conflict = true;
      }
      canon.ports.push_back(ref);
    }
    if (conflict) {
      Wire shown{wire.type, std::vector<PortRef>(members.begin(), members.end())};
      std::string types;
      for (const PortRef& ref : members) {
        if (const Port* p = arch.resolve(ref)) {
          if (!types.empty()) types += ", ";
          types += to_string(ref) + ":" + p->type;
        }
      }
      errors.push_back("type conflict in wire " + to_string(shown) + " (" + types + ")");
    }
    if (!canon.ports.empty()) out.push_back(std::move(canon));
  }
  std::sort(out.begin(), out.end());
  if (attached) {
    for (const auto& [ref, w] : owner) attached->insert(ref);
  }
  return out;
}

std::string join_errors(const std::vector<std::string>& errors) {
  std::string msg;
  for (const auto& e : errors) {
    if (!msg.empty()) msg += "; ";
    msg += e;
  }
  return msg;
}

}  // namespace

Architecture canonicalize(const Architecture& arch) {
  std::vector<std::string> errors;
  auto wires = analyse(arch, errors, nullptr);
  if (!errors.empty()) throw ModelError(join_errors(errors));
  return Architecture(arch.inputs(), arch.output(), std::move(wires));
}

std::vector<std::string> validation_errors(const Architecture& arch) {
  std::vector<std::string> errors;
  std::set<PortRef> attached;
  analyse(arch, errors, &attached);
  for (const Slot& slot : arch.inputs()) {
    for (const Port& port : slot.boundary.ports()) {
      PortRef ref = PortRef::internal(slot.label, port.name);
      if (!attached.count(ref)) {
        errors.push_back("port " + to_string(ref) + " is not attached to any wire");
      }
    }
  }
  for (const Port& port : arch.output().ports()) {
    PortRef ref = PortRef::external(port.name);
    if (!attached.count(ref)) {
      errors.push_back("port " + to_string(ref) + " is not attached to any wire");
    }
  }
  return errors;
}

void validate(const Architecture& arch) {
  auto errors = validation_errors(arch);
  if (!errors.empty()) throw ModelError(join_errors(errors));
}

Architecture identity(const Boundary& boundary) {
  std::vector<Wire> wires;
  for (const Port& p : boundary.ports()) {
    wires.push_back(Wire{p.type, {PortRef::internal("", p.name), PortRef::external(p.name)}});
  }
  return canonicalize(Architecture({Slot{"", boundary}}, boundary, std::move(wires)));
}

namespace {

class UnionFind {
 public:
  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Architecture compose(const Architecture& outer_in,
                     const std::map<std::string, Architecture>& inner_in) {
  const Architecture outer = canonicalize(outer_in);
  std::map<std::string, Architecture> inner;
  for (const auto& [label, arch] : inner_in) {
    const Slot* slot = outer.find_slot(label);
    if (!slot) throw ModelError("compose: no slot " + label);
    if (!(arch.output() == slot->boundary)) {
      throw ModelError("boundary mismatch at slot " + label + ": expected " +
                       slot->boundary.name() + ", got " + arch.output().name());
    }
    inner.emplace(label, canonicalize(arch));
  }

  std::vector<Slot> slots;
  for (const Slot& s : outer.inputs()) {
    auto it = inner.find(s.label);
    if (it == inner.end()) {
      slots.push_back(s);
      continue;
    }
    for (const Slot& t : it->second.inputs()) {
      slots.push_back(Slot{join_label(s.label, t.label), t.boundary});
    }
  }
  std::set<std::string_view> labels;
  for (const Slot& s : slots) {
    if (!labels.insert(s.label).second) {
      throw ModelError("compose: composite slot label " + s.label + " is ambiguous");
    }
  }

  // Nodes are composite ports plus the intermediate ports of substituted
  // slots; both carry a type so glued wires can be checked.
  UnionFind uf;
  std::map<PortRef, std::size_t> port_node;
  std::map<std::pair<std::string, std::string>, std::size_t> mid_node;
  std::vector<std::string> node_type;
  auto port_id = [&](const PortRef& ref, const std::string& type) {
    auto [it, fresh] = port_node.emplace(ref, 0);
    if (fresh) {
      it->second = uf.add();
      node_type.push_back(type);
    }
    return it->second;
  };
  auto mid_id = [&](const std::string& slot, const std::string& port, const std::string& type) {
    auto [it, fresh] = mid_node.emplace(std::make_pair(slot, port), 0);
    if (fresh) {
      it->second = uf.add();
      node_type.push_back(type);
    }
    return it->second;
  };

  for (const Wire& w : outer.wires()) {
    std::optional<std::size_t> first;
    for (const PortRef& ref : w.ports) {
      std::size_t id = (!ref.outer && inner.count(ref.slot)) ? mid_id(ref.slot, ref.port, w.type)
                                                             : port_id(ref, w.type);
      if (first) uf.unite(*first, id);
      else first = id;
    }
  }
  for (const auto& [label, arch] : inner) {
    for (const Wire& w : arch.wires()) {
      std::optional<std::size_t> first;
      for (const PortRef& ref : w.ports) {
        std::size_t id = ref.outer
                             ? mid_id(label, ref.port, w.type)
                             : port_id(PortRef::internal(join_label(label, ref.slot), ref.port),
                                       w.type);
        if (first) uf.unite(*first, id);
        else first = id;
      }
    }
  }

  std::map<std::size_t, Wire> blocks;
  std::map<std::size_t, std::set<std::string>> block_types;
  for (const auto& [ref, id] : port_node) {
    std::size_t root = uf.find(id);
    blocks[root].ports.push_back(ref);
    block_types[root].insert(node_type[id]);
  }
  for (const auto& [key, id] : mid_node) {
    block_types[uf.find(id)].insert(node_type[id]);
  }
  std::vector<Wire> wires;
  for (auto& [root, wire] : blocks) {
    const auto& types = block_types[root];
    if (types.size() != 1) {
      throw ModelError("compose: type conflict in glued wire " + to_string(wire));
    }
    wire.type = *types.begin();
    wires.push_back(std::move(wire));
  }
  return canonicalize(Architecture(std::move(slots), outer.output(), std::move(wires)));
}

Architecture disconnect_wire(const Architecture& arch, std::size_t wire_index) {
  std::vector<Wire> wires;
  for (std::size_t i = 0; i < arch.wires().size(); ++i) {
    const Wire& w = arch.wires()[i];
    if (i != wire_index) {
      wires.push_back(w);
      continue;
    }
    for (const PortRef& ref : w.ports) wires.push_back(Wire{w.type, {ref}});
  }
  return canonicalize(Architecture(arch.inputs(), arch.output(), std::move(wires)));
}

ComponentCorrespondence ComponentCorrespondence::identity(const Architecture& arch) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Slot& s : arch.inputs()) pairs.emplace_back(s.label, s.label);
  return ComponentCorrespondence(std::move(pairs));
}

ComponentCorrespondence ComponentCorrespondence::by_boundary(const Architecture& lhs,
                                                             const Architecture& rhs) {
  std::map<std::string, std::vector<std::string>> left;
  std::map<std::string, std::vector<std::string>> right;
  for (const Slot& s : lhs.inputs()) left[s.boundary.name()].push_back(s.label);
  for (const Slot& s : rhs.inputs()) right[s.boundary.name()].push_back(s.label);
  if (left.size() != right.size()) {
    throw ModelError("cannot match components: boundary multisets differ");
  }
  for (const auto& [name, labels] : left) {
    auto it = right.find(name);
    if (it == right.end() || it->second.size() != labels.size()) {
      throw ModelError("cannot match components: boundary " + name +
                       " occurs a different number of times on each side");
    }
    if (labels.size() > 1) {
      throw ModelError("ambiguous correspondence: boundary " + name + " occurs " +
                       std::to_string(labels.size()) + " times; give an explicit matching");
    }
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Slot& s : lhs.inputs()) {
    pairs.emplace_back(s.label, right[s.boundary.name()].front());
  }
  return ComponentCorrespondence(std::move(pairs));
}

std::optional<std::string> ComponentCorrespondence::map(std::string_view lhs_label) const {
  for (const auto& [a, b] : pairs_) {
    if (a == lhs_label) return b;
  }
  return std::nullopt;
}

ComponentCorrespondence ComponentCorrespondence::inverse() const {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& [a, b] : pairs_) pairs.emplace_back(b, a);
  return ComponentCorrespondence(std::move(pairs));
}

void check_correspondence(const Architecture& lhs, const Architecture& rhs,
                          const ComponentCorrespondence& corr) {
  std::set<std::string> sources;
  std::set<std::string> targets;
  for (const auto& [a, b] : corr.pairs()) {
    const Slot* sa = lhs.find_slot(a);
    const Slot* sb = rhs.find_slot(b);
    if (!sa) throw ModelError("correspondence: no slot " + a + " on the left");
    if (!sb) throw ModelError("correspondence: no slot " + b + " on the right");
    if (!sources.insert(a).second) throw ModelError("correspondence: slot " + a + " mapped twice");
    if (!targets.insert(b).second) throw ModelError("correspondence: slot " + b + " hit twice");
    if (!(sa->boundary == sb->boundary)) {
      throw ModelError("correspondence: " + a + ":" + sa->boundary.name() + " paired with " + b +
                       ":" + sb->boundary.name());
    }
  }
  if (sources.size() != lhs.arity() || targets.size() != rhs.arity()) {
    throw ModelError("correspondence is not a bijection between the components");
  }
}

EqualityReport equal(const Architecture& lhs, const Architecture& rhs,
                     const ComponentCorrespondence& corr) {
  check_correspondence(lhs, rhs, corr);
  std::vector<Slot> slots;
  for (const Slot& s : lhs.inputs()) slots.push_back(Slot{*corr.map(s.label), s.boundary});
  std::vector<Wire> wires = lhs.wires();
  for (Wire& w : wires) {
    for (PortRef& ref : w.ports) {
      if (!ref.outer) ref.slot = *corr.map(ref.slot);
    }
  }
  const Architecture left = canonicalize(Architecture(std::move(slots), lhs.output(), std::move(wires)));
  const Architecture right = canonicalize(rhs);

  EqualityReport report;
  if (!(left.output() == right.output())) {
    report.problems.push_back("output boundaries differ: " + left.output().name() + " vs " +
                              right.output().name());
  }
  std::set_difference(left.wires().begin(), left.wires().end(), right.wires().begin(),
                      right.wires().end(), std::back_inserter(report.only_lhs));
  std::set_difference(right.wires().begin(), right.wires().end(), left.wires().begin(),
                      left.wires().end(), std::back_inserter(report.only_rhs));
  for (const Wire& w : report.only_lhs) report.problems.push_back("only on left: " + to_string(w));
  for (const Wire& w : report.only_rhs) report.problems.push_back("only on right: " + to_string(w));
  report.equal = report.problems.empty();
  return report;
}

}  // namespace opm
