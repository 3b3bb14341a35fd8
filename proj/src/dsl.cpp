// SPDX-License-Identifier: Apache-2.0

#include "opm/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "opm/error.hpp"

namespace opm {

namespace {

enum class Tok { ident, number, string, punct, end };

struct Token {
  Tok kind;
  std::string text;
  SourceLocation at;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  auto is_ident_start = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
  };
  auto is_ident = [&](char c) { return is_ident_start(c) || is_digit(c); };

  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance();
      continue;
    }
    SourceLocation at{line, col};
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && is_ident(src[i])) advance();
      out.push_back({Tok::ident, std::string(src.substr(start, i - start)), at});
      continue;
    }
    bool negative = c == '-' && i + 1 < src.size() && is_digit(src[i + 1]);
    if (is_digit(c) || negative) {
      std::size_t start = i;
      if (negative) advance();
      while (i < src.size() && is_digit(src[i])) advance();
      if (i + 1 < src.size() && src[i] == '.' && is_digit(src[i + 1])) {
        advance();
        while (i < src.size() && is_digit(src[i])) advance();
      }
      out.push_back({Tok::number, std::string(src.substr(start, i - start)), at});
      continue;
    }
    if (c == '"') {
      advance();
      std::string text;
      while (true) {
        if (i >= src.size() || src[i] == '\n') throw ParseError(at, "unterminated string");
        char d = src[i];
        if (d == '"') {
          advance();
          break;
        }
        if (d == '\\' && i + 1 < src.size()) {
          char e = src[i + 1];
          text += e == 'n' ? '\n' : e;
          advance(2);
          continue;
        }
        text += d;
        advance();
      }
      out.push_back({Tok::string, std::move(text), at});
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::punct, "->", at});
      advance(2);
      continue;
    }
    if (std::string_view("{}()[],:;=./~").find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), at});
      advance();
      continue;
    }
    throw ParseError(at, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::end, "", {line, col}});
  return out;
}

struct RefAst {
  std::vector<std::string> path;  // slot components then the port
  SourceLocation at;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Model parse_model();
  Term parse_term_only() {
    Term t = term();
    if (peek().kind != Tok::end) fail("unexpected '" + peek().text + "' after term");
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().at, msg); }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end:
        return "end of input";
      case Tok::string:
        return "string \"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  bool is_punct(std::string_view p) const {
    return peek().kind == Tok::punct && peek().text == p;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()));
  }
  bool is_keyword(std::string_view k) const {
    return peek().kind == Tok::ident && peek().text == k;
  }
  void expect_keyword(std::string_view k) {
    if (!is_keyword(k)) fail("expected '" + std::string(k) + "', found " + describe(peek()));
    next();
  }
  std::string ident(std::string_view what) {
    if (peek().kind != Tok::ident) fail("expected " + std::string(what) + ", found " + describe(peek()));
    return next().text;
  }
  void separator() {
    while (accept(",") || accept(";")) {
    }
  }

  std::vector<std::string> dotted(std::string_view what) {
    std::vector<std::string> parts{ident(what)};
    while (accept(".")) parts.push_back(ident(what));
    return parts;
  }
  static std::string join(const std::vector<std::string>& parts, std::size_t count = SIZE_MAX) {
    std::string out;
    for (std::size_t k = 0; k < std::min(count, parts.size()); ++k) out = join_label(out, parts[k]);
    return out;
  }

  Rational rational() {
    SourceLocation at = peek().at;
    if (peek().kind != Tok::number) fail("expected a number, found " + describe(peek()));
    std::string text = next().text;
    if (accept("/")) {
      if (peek().kind != Tok::number) fail("expected a denominator, found " + describe(peek()));
      text += "/" + next().text;
    }
    try {
      return parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(at, e.what());
    }
  }

  Term term() {
    Term t = Term::leaf(ident("generator name"));
    if (!accept("(")) return t;
    std::set<std::string> seen;
    while (!accept(")")) {
      SourceLocation at = peek().at;
      std::string slot = ident("slot label");
      expect("->");
      if (!seen.insert(slot).second) throw ParseError(at, "slot " + slot + " filled twice");
      t.with(slot, term());
      if (!is_punct(")")) expect(",");
    }
    return t;
  }

  template <typename F>
  static auto located(SourceLocation at, F&& f) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const ModelError& e) {
      throw ParseError(at, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(at, e.what());
    }
  }

  void interface_item();
  void boundary_item();
  void architecture_item();
  void equation_item();
  void prob_item();
  void modes_item();
  void stoch_item();
  void history_item();

  const Boundary& boundary_ref(const std::string& name, SourceLocation at) const {
    const Boundary* b = model_.presentation.find_boundary(name);
    if (!b) throw ParseError(at, "unknown boundary " + name);
    return *b;
  }
  const Architecture& generator_ref(const std::string& name, SourceLocation at) const {
    const Architecture* a = model_.presentation.find_generator(name);
    if (!a) throw ParseError(at, "unknown generator " + name);
    return *a;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Model model_;
  std::set<std::string> functor_names_;
};

Model Parser::parse_model() {
  while (peek().kind != Tok::end) {
    if (peek().kind != Tok::ident) fail("expected a declaration, found " + describe(peek()));
    const std::string& k = peek().text;
    if (k == "interface") {
      interface_item();
    } else if (k == "boundary") {
      boundary_item();
    } else if (k == "architecture") {
      architecture_item();
    } else if (k == "equation") {
      equation_item();
    } else if (k == "prob") {
      prob_item();
    } else if (k == "modes") {
      modes_item();
    } else if (k == "stoch") {
      stoch_item();
    } else if (k == "history") {
      history_item();
    } else {
      fail("unknown declaration '" + k + "'");
    }
    separator();
  }
  return std::move(model_);
}

void Parser::interface_item() {
  SourceLocation at = next().at;
  std::string name = ident("interface name");
  SourceLocation kind_at = peek().at;
  std::string kind = ident("'physical' or 'digital'");
  InterfaceKind k;
  if (kind == "physical") {
    k = InterfaceKind::physical;
  } else if (kind == "digital") {
    k = InterfaceKind::digital;
  } else {
    throw ParseError(kind_at, "expected 'physical' or 'digital', found '" + kind + "'");
  }
  located(at, [&] {
    model_.presentation.types().add(name, k);
    return 0;
  });
}

void Parser::boundary_item() {
  SourceLocation at = next().at;
  std::string name = ident("boundary name");
  expect("{");
  std::vector<Port> ports;
  separator();
  while (!accept("}")) {
    std::string port = ident("port name");
    expect(":");
    std::string type = ident("interface type");
    ports.push_back({std::move(port), std::move(type)});
    separator();
  }
  located(at, [&] {
    model_.presentation.add_boundary(Boundary(name, std::move(ports)));
    return 0;
  });
}

void Parser::architecture_item() {
  SourceLocation at = next().at;
  std::string name = ident("generator name");
  if (model_.presentation.find_generator(name)) {
    throw ParseError(at, "duplicate generator " + name);
  }
  expect(":");
  expect("(");
  std::vector<Slot> slots;
  std::set<std::string> labels;
  while (!accept(")")) {
    SourceLocation slot_at = peek().at;
    std::string label = join(dotted("slot label"));
    if (label == "out") throw ParseError(slot_at, "slot label 'out' is reserved");
    if (!labels.insert(label).second) throw ParseError(slot_at, "duplicate slot " + label);
    expect(":");
    SourceLocation b_at = peek().at;
    std::string b = ident("boundary name");
    slots.push_back({label, boundary_ref(b, b_at)});
    if (!is_punct(")")) expect(",");
  }
  expect("->");
  SourceLocation out_at = peek().at;
  const Boundary& output = boundary_ref(ident("boundary name"), out_at);

  auto resolve = [&](const RefAst& r) {
    if (r.path.size() < 2) throw ParseError(r.at, "expected slot.port");
    std::string slot = join(r.path, r.path.size() - 1);
    const std::string& port = r.path.back();
    if (slot == "out") {
      if (!output.find(port)) {
        throw ParseError(r.at, "unknown port " + port + " on " + output.name());
      }
      return PortRef::external(port);
    }
    auto it = std::find_if(slots.begin(), slots.end(),
                           [&](const Slot& s) { return s.label == slot; });
    if (it == slots.end()) throw ParseError(r.at, "unknown slot " + slot + " in " + name);
    if (!it->boundary.find(port)) {
      throw ParseError(r.at, "unknown port " + port + " on " + it->boundary.name());
    }
    return PortRef::internal(slot, port);
  };
  auto ref = [&] {
    SourceLocation r_at = peek().at;
    return RefAst{dotted("port reference"), r_at};
  };

  std::vector<std::vector<PortRef>> groups;
  auto group_of = [&](const PortRef& p) -> std::ptrdiff_t {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (std::find(groups[g].begin(), groups[g].end(), p) != groups[g].end()) {
        return static_cast<std::ptrdiff_t>(g);
      }
    }
    return -1;
  };

  expect("{");
  separator();
  while (!accept("}")) {
    if (is_keyword("wire")) {
      next();
      std::vector<PortRef> group{resolve(ref())};
      while (accept("=")) group.push_back(resolve(ref()));
      groups.push_back(std::move(group));
    } else if (is_keyword("expose")) {
      next();
      PortRef inner = resolve(ref());
      if (inner.outer) fail("expose takes an inner port");
      expect("->");
      SourceLocation o_at = peek().at;
      std::string outer = ident("outer port");
      PortRef ext = resolve(RefAst{{"out", outer}, o_at});
      std::ptrdiff_t gi = group_of(inner);
      std::ptrdiff_t go = group_of(ext);
      if (gi < 0 && go < 0) {
        groups.push_back({inner, ext});
      } else if (gi < 0) {
        groups[go].push_back(inner);
      } else if (go < 0) {
        groups[gi].push_back(ext);
      } else if (gi != go) {
        auto moved = std::move(groups[go]);
        groups[gi].insert(groups[gi].end(), moved.begin(), moved.end());
        groups.erase(groups.begin() + go);
      }
    } else {
      fail("expected 'wire' or 'expose', found " + describe(peek()));
    }
    separator();
  }

  // Auto-exposure: an unmentioned outer port takes the unique unmentioned
  // inner port of the same name.
  std::set<PortRef> mentioned;
  for (const auto& g : groups) mentioned.insert(g.begin(), g.end());
  for (const Port& op : output.ports()) {
    PortRef ext = PortRef::external(op.name);
    if (mentioned.count(ext)) continue;
    std::vector<PortRef> candidates;
    for (const Slot& s : slots) {
      PortRef r = PortRef::internal(s.label, op.name);
      if (s.boundary.find(op.name) && !mentioned.count(r)) candidates.push_back(r);
    }
    if (candidates.size() > 1) {
      std::string names;
      for (const PortRef& c : candidates) names += (names.empty() ? "" : ", ") + to_string(c);
      throw ParseError(at, "ambiguous auto-exposure of " + op.name + " in " + name + " (" +
                               names + "); use expose");
    }
    if (candidates.size() == 1) groups.push_back({candidates.front(), ext});
  }

  std::vector<Wire> wires;
  for (auto& g : groups) {
    Wire w{{}, std::move(g)};
    for (const Slot& s : slots) {
      if (!w.ports.front().outer && s.label == w.ports.front().slot) {
        w.type = s.boundary.find(w.ports.front().port)->type;
      }
    }
    if (w.ports.front().outer) w.type = output.find(w.ports.front().port)->type;
    wires.push_back(std::move(w));
  }
  Architecture arch(std::move(slots), output, std::move(wires));
  try {
    arch = canonicalize(arch);
  } catch (const ModelError&) {
    // kept as written; compile() reports it
  }
  model_.presentation.add_generator(name, std::move(arch));
}

void Parser::equation_item() {
  SourceLocation at = next().at;
  Term lhs = term();
  expect("=");
  Term rhs = term();
  std::vector<std::pair<std::string, std::string>> pairs;
  if (is_keyword("matching")) {
    next();
    expect("{");
    separator();
    while (!accept("}")) {
      std::string a = join(dotted("leaf path"));
      expect("~");
      std::string b = join(dotted("leaf path"));
      pairs.emplace_back(std::move(a), std::move(b));
      separator();
    }
  }
  located(at, [&] {
    auto corr = derive_correspondence(model_.presentation, lhs, rhs, pairs);
    model_.presentation.add_equation({std::move(lhs), std::move(rhs), std::move(corr)});
    return 0;
  });
}

void Parser::prob_item() {
  SourceLocation at = next().at;
  std::string name = ident("functor name");
  if (!functor_names_.insert(name).second) throw ParseError(at, "duplicate functor " + name);
  ProbFunctor F(name);
  expect("{");
  separator();
  while (!accept("}")) {
    SourceLocation g_at = peek().at;
    std::string gen = ident("generator name");
    const Architecture& arch = generator_ref(gen, g_at);
    if (F.values().count(gen)) throw ParseError(g_at, "duplicate value for " + gen);
    expect("=");
    expect("(");
    std::vector<std::pair<std::string, Probability>> entries;
    while (!accept(")")) {
      SourceLocation s_at = peek().at;
      std::string slot = ident("slot label");
      if (!arch.find_slot(slot)) throw ParseError(s_at, "unknown slot " + slot + " of " + gen);
      expect(":");
      SourceLocation v_at = peek().at;
      Rational v = rational();
      entries.emplace_back(slot, located(v_at, [&] { return Probability(v); }));
      if (!is_punct(")")) expect(",");
    }
    located(g_at, [&] {
      F.set(gen, Distribution(std::move(entries)));
      return 0;
    });
    separator();
  }
  model_.prob.push_back(std::move(F));
}

void Parser::modes_item() {
  SourceLocation at = next().at;
  std::string name = ident("functor name");
  if (!functor_names_.insert(name).second) throw ParseError(at, "duplicate functor " + name);
  ModeFunctor M(name);
  struct RelAst {
    std::string generator;
    SourceLocation at;
    std::vector<std::tuple<std::string, std::string, std::string>> pairs;
  };
  std::vector<RelAst> rels;
  std::set<std::string> rel_names;
  expect("{");
  separator();
  while (!accept("}")) {
    if (is_keyword("modes")) {
      SourceLocation m_at = next().at;
      SourceLocation b_at = peek().at;
      std::string b = ident("boundary name");
      boundary_ref(b, b_at);
      if (M.mode_sets().count(b)) throw ParseError(m_at, "duplicate mode set for " + b);
      expect("=");
      expect("{");
      std::vector<FailureMode> modes;
      separator();
      while (!accept("}")) {
        FailureMode m{ident("mode name"), {}};
        if (peek().kind == Tok::string) m.predicate = next().text;
        modes.push_back(std::move(m));
        separator();
      }
      located(m_at, [&] {
        M.add_mode_set(ModeSet(b, std::move(modes)));
        return 0;
      });
    } else if (is_keyword("rel")) {
      next();
      RelAst rel{{}, peek().at, {}};
      rel.generator = ident("generator name");
      generator_ref(rel.generator, rel.at);
      if (!rel_names.insert(rel.generator).second) {
        throw ParseError(rel.at, "duplicate relation for " + rel.generator);
      }
      expect("{");
      separator();
      while (!accept("}")) {
        auto lhs = dotted("slot.mode");
        if (lhs.size() < 2) fail("expected slot.mode");
        std::string mode = lhs.back();
        lhs.pop_back();
        expect("->");
        std::string out = ident("output mode");
        rel.pairs.emplace_back(join(lhs), std::move(mode), std::move(out));
        separator();
      }
      rels.push_back(std::move(rel));
    } else {
      fail("expected 'modes' or 'rel', found " + describe(peek()));
    }
    separator();
  }
  for (const RelAst& r : rels) {
    located(r.at, [&] {
      M.set_relation(r.generator, make_relation(model_.presentation, M, r.generator, r.pairs));
      return 0;
    });
  }
  model_.modes.push_back(std::move(M));
}

void Parser::stoch_item() {
  SourceLocation at = next().at;
  std::string name = ident("functor name");
  if (!functor_names_.insert(name).second) throw ParseError(at, "duplicate functor " + name);
  StochFunctor S(name);
  struct KernelAst {
    std::string generator;
    SourceLocation at;
    std::vector<std::tuple<std::string, std::string, std::string, Rational>> entries;
  };
  std::vector<KernelAst> kernels;
  std::set<std::string> kernel_names;
  expect("{");
  separator();
  while (!accept("}")) {
    if (is_keyword("prior")) {
      SourceLocation p_at = next().at;
      SourceLocation b_at = peek().at;
      std::string b = ident("boundary name");
      boundary_ref(b, b_at);
      if (S.priors().count(b)) throw ParseError(p_at, "duplicate prior for " + b);
      expect("=");
      expect("(");
      std::vector<std::pair<std::string, Probability>> entries;
      while (!accept(")")) {
        std::string mode = ident("mode name");
        expect(":");
        SourceLocation v_at = peek().at;
        Rational v = rational();
        entries.emplace_back(mode, located(v_at, [&] { return Probability(v); }));
        if (!is_punct(")")) expect(",");
      }
      located(p_at, [&] {
        S.set_prior(b, Distribution(std::move(entries)));
        return 0;
      });
    } else if (is_keyword("kernel")) {
      next();
      KernelAst k{{}, peek().at, {}};
      k.generator = ident("generator name");
      generator_ref(k.generator, k.at);
      if (!kernel_names.insert(k.generator).second) {
        throw ParseError(k.at, "duplicate kernel for " + k.generator);
      }
      expect("{");
      separator();
      while (!accept("}")) {
        std::string x = ident("source mode");
        expect("->");
        auto target = dotted("slot.mode");
        if (target.size() < 2) fail("expected slot.mode");
        std::string y = target.back();
        target.pop_back();
        expect(":");
        Rational v = rational();
        k.entries.emplace_back(std::move(x), join(target), std::move(y), std::move(v));
        separator();
      }
      kernels.push_back(std::move(k));
    } else {
      fail("expected 'prior' or 'kernel', found " + describe(peek()));
    }
    separator();
  }
  for (const KernelAst& k : kernels) {
    located(k.at, [&] {
      S.set_kernel(k.generator,
                   make_generator_kernel(model_.presentation, S, k.generator, k.entries));
      return 0;
    });
  }
  model_.stoch.push_back(std::move(S));
}

void Parser::history_item() {
  SourceLocation at = next().at;
  std::string path = join(dotted("leaf path"));
  if (model_.histories.count(path)) throw ParseError(at, "duplicate history for " + path);
  expect_keyword("interval");
  expect("[");
  Rational start = rational();
  expect(",");
  Rational end = rational();
  expect("]");
  expect("{");
  std::vector<Rational> ts;
  separator();
  while (!accept("}")) {
    ts.push_back(rational());
    separator();
  }
  located(at, [&] {
    model_.histories.emplace(path, FailureHistory(start, end, std::move(ts)));
    return 0;
  });
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

template <typename Map, typename Emit>
void in_declared_order(const std::vector<std::string>& order, const Map& m, Emit&& emit) {
  std::set<std::string> done;
  for (const std::string& k : order) {
    if (auto it = m.find(k); it != m.end()) {
      emit(it->first, it->second);
      done.insert(k);
    }
  }
  for (const auto& [k, v] : m) {
    if (!done.count(k)) emit(k, v);
  }
}

std::string render_distribution(const Distribution& d) {
  std::string out = "(";
  bool first = true;
  for (const auto& [label, p] : d.entries()) {
    out += (first ? "" : ", ") + label + ": " + to_string(p.value());
    first = false;
  }
  return out + ")";
}

}  // namespace

const ProbFunctor* Model::find_prob(std::string_view name) const {
  for (const auto& F : prob) {
    if (F.name() == name) return &F;
  }
  return nullptr;
}

const ModeFunctor* Model::find_modes(std::string_view name) const {
  for (const auto& M : modes) {
    if (M.name() == name) return &M;
  }
  return nullptr;
}

const StochFunctor* Model::find_stoch(std::string_view name) const {
  for (const auto& S : stoch) {
    if (S.name() == name) return &S;
  }
  return nullptr;
}

Model parse_model(std::string_view text) { return Parser(text).parse_model(); }

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

Term parse_term(std::string_view text) { return Parser(text).parse_term_only(); }

std::string render_architecture(std::string_view name, const Architecture& arch) {
  std::ostringstream out;
  out << "architecture " << name << " : (";
  for (std::size_t i = 0; i < arch.inputs().size(); ++i) {
    const Slot& s = arch.inputs()[i];
    out << (i ? ", " : "") << s.label << ": " << s.boundary.name();
  }
  out << ") -> " << arch.output().name() << " {\n";
  for (const Wire& w : arch.wires()) {
    out << "  wire ";
    for (std::size_t i = 0; i < w.ports.size(); ++i) {
      out << (i ? " = " : "") << to_string(w.ports[i]);
    }
    out << "\n";
  }
  out << "}\n";
  return out.str();
}

std::string serialize(const Model& model) {
  const OperadPresentation& p = model.presentation;
  std::ostringstream out;
  for (const auto& [name, kind] : p.types().entries()) {
    out << "interface " << name << " " << to_string(kind) << "\n";
  }
  if (p.types().size()) out << "\n";

  for (const Boundary& b : p.boundaries()) {
    out << "boundary " << b.name() << " {";
    for (std::size_t i = 0; i < b.ports().size(); ++i) {
      out << (i ? ", " : " ") << b.ports()[i].name << ": " << b.ports()[i].type;
    }
    out << " }\n";
  }
  if (!p.boundaries().empty()) out << "\n";

  std::vector<std::string> generator_order;
  for (const auto& [name, arch] : p.generators()) {
    generator_order.push_back(name);
    out << render_architecture(name, canonicalize(arch)) << "\n";
  }

  for (const CoherenceEquation& e : p.equations()) {
    out << "equation " << to_string(e.lhs) << " = " << to_string(e.rhs) << " matching {";
    for (std::size_t i = 0; i < e.corr.pairs().size(); ++i) {
      const auto& [a, b] = e.corr.pairs()[i];
      out << (i ? ", " : " ") << a << " ~ " << b;
    }
    out << " }\n";
  }
  if (!p.equations().empty()) out << "\n";

  std::vector<std::string> boundary_order;
  for (const Boundary& b : p.boundaries()) boundary_order.push_back(b.name());

  for (const ProbFunctor& F : model.prob) {
    out << "prob " << F.name() << " {\n";
    in_declared_order(generator_order, F.values(), [&](const std::string& g, const Distribution& d) {
      out << "  " << g << " = " << render_distribution(d) << "\n";
    });
    out << "}\n\n";
  }

  for (const ModeFunctor& M : model.modes) {
    out << "modes " << M.name() << " {\n";
    in_declared_order(boundary_order, M.mode_sets(), [&](const std::string& b, const ModeSet& s) {
      out << "  modes " << b << " = {";
      for (const FailureMode& m : s.modes()) {
        out << " " << m.id;
        if (!m.predicate.empty()) out << " " << quote(m.predicate);
      }
      out << " }\n";
    });
    in_declared_order(generator_order, M.relations(),
                      [&](const std::string& g, const ModeRelation& r) {
                        out << "  rel " << g << " {";
                        for (const SlotRelation& s : r.slots) {
                          for (const auto& [x, y] : s.pairs) {
                            out << "\n    " << s.slot << "." << x << " -> " << y;
                          }
                        }
                        out << "\n  }\n";
                      });
    out << "}\n\n";
  }

  for (const StochFunctor& S : model.stoch) {
    out << "stoch " << S.name() << " {\n";
    in_declared_order(boundary_order, S.priors(), [&](const std::string& b, const Distribution& d) {
      out << "  prior " << b << " = " << render_distribution(d) << "\n";
    });
    in_declared_order(generator_order, S.kernels(), [&](const std::string& g, const PtKernel& k) {
      out << "  kernel " << g << " {";
      const Kernel& K = k.kernel;
      for (std::size_t x = 0; x < K.source().size(); ++x) {
        for (std::size_t t = 0; t < K.targets().size(); ++t) {
          const KernelTarget& tgt = K.targets()[t];
          for (std::size_t y = 0; y < tgt.modes.size(); ++y) {
            const Rational& v = K.at(x, t, y);
            if (v == 0) continue;
            out << "\n    " << K.source()[x] << " -> " << tgt.slot << "." << tgt.modes[y] << ": "
                << to_string(v);
          }
        }
      }
      out << "\n  }\n";
    });
    out << "}\n\n";
  }

  for (const auto& [path, h] : model.histories) {
    out << "history " << path << " interval [" << to_string(h.start()) << ", "
        << to_string(h.end()) << "] {";
    for (const Rational& t : h.timestamps()) out << " " << to_string(t);
    out << " }\n";
  }
  return out.str();
}

}  // namespace opm
