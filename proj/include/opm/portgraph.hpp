// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opm {

enum class InterfaceKind { physical, digital };

std::string_view to_string(InterfaceKind kind);

/// The set of interface types, each tagged physical or digital.
class TypeTable {
 public:
  /// Throws ModelError if `name` is already declared.
  void add(std::string name, InterfaceKind kind);

  bool contains(std::string_view name) const;
  /// Throws ModelError for an undeclared type.
  InterfaceKind kind(std::string_view name) const;

  const std::vector<std::pair<std::string, InterfaceKind>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const TypeTable&, const TypeTable&) = default;

 private:
  std::vector<std::pair<std::string, InterfaceKind>> entries_;
};

struct Port {
  std::string name;
  std::string type;

  friend bool operator==(const Port&, const Port&) = default;
};

/// A named, ordered set of typed ports.
class Boundary {
 public:
  Boundary() = default;
  /// Throws ModelError on duplicate port names.
  Boundary(std::string name, std::vector<Port> ports);

  const std::string& name() const { return name_; }
  const std::vector<Port>& ports() const { return ports_; }
  std::size_t size() const { return ports_.size(); }
  const Port* find(std::string_view port) const;

  friend bool operator==(const Boundary&, const Boundary&) = default;

 private:
  std::string name_;
  std::vector<Port> ports_;
};

/// Either a port on one of the input slots or a port on the outer boundary.
/// Ordering puts internal references before outer ones.
struct PortRef {
  bool outer = false;
  std::string slot;
  std::string port;

  static PortRef external(std::string port) { return {true, {}, std::move(port)}; }
  static PortRef internal(std::string slot, std::string port) {
    return {false, std::move(slot), std::move(port)};
  }

  friend auto operator<=>(const PortRef&, const PortRef&) = default;
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

/// `slot.port`, or `out.port` for the outer boundary.
std::string to_string(const PortRef& ref);

/// A hyperwire: a typed set of ports. Canonical wires have sorted, nonempty
/// port lists.
struct Wire {
  std::string type;
  std::vector<PortRef> ports;

  friend bool operator==(const Wire&, const Wire&) = default;
};

bool operator<(const Wire& a, const Wire& b);

/// `{bt.heat1, ba.heat}: heat`
std::string to_string(const Wire& wire);

struct Slot {
  std::string label;
  Boundary boundary;

  friend bool operator==(const Slot&, const Slot&) = default;
};

/// A typed port-graph operation (Q_1..Q_n) -> P. Construction only checks
/// that slot labels are unique; use canonicalize/validate for the rest.
class Architecture {
 public:
  Architecture() = default;
  Architecture(std::vector<Slot> inputs, Boundary output, std::vector<Wire> wires);

  const std::vector<Slot>& inputs() const { return inputs_; }
  const Boundary& output() const { return output_; }
  const std::vector<Wire>& wires() const { return wires_; }
  std::size_t arity() const { return inputs_.size(); }

  const Slot* find_slot(std::string_view label) const;
  /// Port a reference points at, or nullptr when the slot or port is unknown.
  const Port* resolve(const PortRef& ref) const;

  friend bool operator==(const Architecture&, const Architecture&) = default;

 private:
  std::vector<Slot> inputs_;
  Boundary output_;
  std::vector<Wire> wires_;
};

/// Joins slot labels with '.'; the empty label is the unit.
std::string join_label(std::string_view prefix, std::string_view label);

/// Normal form: empty wires dropped, ports sorted within each wire, wires
/// sorted by their smallest port, wire types filled in from the ports.
/// Throws ModelError on unknown ports, a port attached to two wires, or a wire
/// whose ports disagree on type.
Architecture canonicalize(const Architecture& arch);

/// Every structural problem, including ports not attached to any wire.
std::vector<std::string> validation_errors(const Architecture& arch);

/// Throws ModelError listing validation_errors when there are any.
void validate(const Architecture& arch);

/// One slot (with the empty label) whose ports are each wired to the
/// same-named outer port.
Architecture identity(const Boundary& boundary);

/// Operadic substitution. `inner` maps outer slot labels to architectures
/// whose output boundary equals that slot's boundary; missing slots are
/// left in place. Result slots are labelled `join_label(slot, inner_slot)`.
Architecture compose(const Architecture& outer,
                     const std::map<std::string, Architecture>& inner);

/// Disconnects one wire: each of its ports becomes a singleton wire.
Architecture disconnect_wire(const Architecture& arch, std::size_t wire_index);

/// A bijection from the slots of one architecture to those of another.
class ComponentCorrespondence {
 public:
  ComponentCorrespondence() = default;
  explicit ComponentCorrespondence(std::vector<std::pair<std::string, std::string>> pairs)
      : pairs_(std::move(pairs)) {}

  static ComponentCorrespondence identity(const Architecture& arch);

  /// Matches slots by boundary name. Throws ModelError when the boundary
  /// multisets differ or a boundary occurs more than once.
  static ComponentCorrespondence by_boundary(const Architecture& lhs,
                                             const Architecture& rhs);

  const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
  std::optional<std::string> map(std::string_view lhs_label) const;
  ComponentCorrespondence inverse() const;

  friend bool operator==(const ComponentCorrespondence&,
                         const ComponentCorrespondence&) = default;

 private:
  std::vector<std::pair<std::string, std::string>> pairs_;
};

/// Throws ModelError unless `corr` is a total, injective, boundary-preserving
/// map from lhs slots onto rhs slots.
void check_correspondence(const Architecture& lhs, const Architecture& rhs,
                          const ComponentCorrespondence& corr);

struct EqualityReport {
  bool equal = false;
  std::vector<std::string> problems;
  /// Wire blocks (relabelled into rhs slot names) present on one side only.
  std::vector<Wire> only_lhs;
  std::vector<Wire> only_rhs;

  explicit operator bool() const { return equal; }
};

/// Compares two architectures after relabelling lhs slots through `corr`.
EqualityReport equal(const Architecture& lhs, const Architecture& rhs,
                     const ComponentCorrespondence& corr);

}  // namespace opm
