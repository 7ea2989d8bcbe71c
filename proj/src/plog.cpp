#include "lpmln/plog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "lpmln/ground.hpp"

namespace lpmln::plog {

namespace {

// ---------------------------------------------------------------- tokenizer

struct PTok {
  enum Kind { Ident, Number, Sym, End };
  Kind kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<PTok> lex(const std::string& text) {
  std::vector<PTok> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](PTok::Kind k, std::string s, int l, int c) {
    PTok t;
    t.kind = k;
    t.text = std::move(s);
    t.line = l;
    t.col = c;
    out.push_back(std::move(t));
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++col;
      ++i;
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int l = line, cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                 text[j] == '_'))
        ++j;
      push(PTok::Ident, text.substr(i, j - i), l, cl);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    auto digit = [&](std::size_t k) {
      return k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]));
    };
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '-' && digit(i + 1))) {
      std::size_t j = i + 1;
      while (digit(j)) ++j;
      if (j < text.size() && text[j] == '/' && digit(j + 1)) {
        ++j;
        while (digit(j)) ++j;
      } else if (j < text.size() && text[j] == '.' && digit(j + 1)) {
        ++j;
        while (digit(j)) ++j;
      }
      push(PTok::Number, text.substr(i, j - i), l, cl);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(PTok::Sym, "->", l, cl);
      i += 2;
      col += 2;
      continue;
    }
    if (c == ':' && i + 1 < text.size() && text[i + 1] == '-') {
      push(PTok::Sym, ":-", l, cl);
      i += 2;
      col += 2;
      continue;
    }
    if (c == '!' && i + 1 < text.size() && text[i + 1] == '=') {
      push(PTok::Sym, "!=", l, cl);
      i += 2;
      col += 2;
      continue;
    }
    static const std::string singles = ".,(){}[]:=|~";
    if (singles.find(c) != std::string::npos) {
      push(PTok::Sym, std::string(1, c), l, cl);
      ++i;
      ++col;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
  push(PTok::End, "", line, col);
  return out;
}

// ------------------------------------------------------------------ parser

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  PlogProgram run() {
    collect_declarations();
    pos_ = 0;
    while (peek().kind != PTok::End) {
      if (is_decl_start()) {
        skip_statement();
        continue;
      }
      parse_statement();
    }
    finalize();
    return std::move(p_);
  }

 private:
  std::vector<PTok> toks_;
  std::size_t pos_ = 0;
  PlogProgram p_;
  int auto_rule_ = 0;

  const PTok& peek() const { return toks_[pos_]; }
  const PTok& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  bool accept(const std::string& sym) {
    if (peek().kind == PTok::Sym && peek().text == sym) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& sym) {
    if (!accept(sym)) fail("expected '" + sym + "'");
  }
  std::string ident(const std::string& what) {
    if (peek().kind != PTok::Ident) fail("expected " + what);
    return next().text;
  }

  bool is_decl_start() const {
    return peek().kind == PTok::Ident &&
           (peek().text == "sort" || peek().text == "attr" || peek().text == "var");
  }

  void skip_statement() {
    while (peek().kind != PTok::End && !(peek().kind == PTok::Sym && peek().text == "."))
      ++pos_;
    if (peek().kind == PTok::End) fail("unterminated statement");
    ++pos_;
  }

  void collect_declarations() {
    pos_ = 0;
    while (peek().kind != PTok::End) {
      if (!is_decl_start()) {
        skip_statement();
        continue;
      }
      std::string kw = next().text;
      if (kw == "sort") {
        std::string name = ident("sort name");
        expect("=");
        expect("{");
        std::vector<Term> vals;
        if (!accept("}")) {
          do {
            vals.push_back(parse_ground_elem());
          } while (accept(","));
          expect("}");
        }
        if (!p_.sorts.emplace(name, std::move(vals)).second)
          fail("duplicate sort '" + name + "'");
      } else if (kw == "attr") {
        Attribute a;
        a.name = ident("attribute name");
        expect(":");
        while (peek().kind == PTok::Ident) {
          a.arg_sorts.push_back(next().text);
          if (!accept(",")) break;
        }
        expect("->");
        a.range_sort = ident("range sort");
        if (!p_.attributes.emplace(a.name, a).second)
          fail("duplicate attribute '" + a.name + "'");
      } else {  // var
        std::string name = ident("variable name");
        expect(":");
        std::string sort = ident("sort name");
        if (!p_.var_sorts.emplace(name, sort).second)
          fail("duplicate variable '" + name + "'");
      }
      expect(".");
    }
  }

  Term parse_ground_elem() {
    if (peek().kind == PTok::Number) return Term::rational(Rational::parse(next().text));
    if (peek().kind == PTok::Ident) return Term::sym(next().text);
    fail("expected sort element");
  }

  // Identifiers starting with an upper-case letter are variables; a 'var'
  // declaration fixes their sort, otherwise it is inferred from use.
  Term parse_term() {
    if (peek().kind == PTok::Number) return Term::rational(Rational::parse(next().text));
    if (peek().kind == PTok::Ident) {
      std::string n = next().text;
      auto it = p_.var_sorts.find(n);
      if (it != p_.var_sorts.end()) return Term::var(n, it->second);
      if (std::isupper(static_cast<unsigned char>(n[0]))) return Term::var(n, "");
      return Term::sym(n);
    }
    fail("expected term");
  }

  bool is_attribute(const std::string& n) const { return p_.attributes.count(n) > 0; }

  AttrRef parse_ref(const std::string& name) {
    AttrRef r;
    r.attr = name;
    if (accept("(")) {
      do {
        r.args.push_back(parse_term());
      } while (accept(","));
      expect(")");
    }
    return r;
  }

  // '~'a  |  a  |  a = t ; bool attributes default to value t.
  void parse_attr_lit(AttrRef& ref, Term& value) {
    bool neg = accept("~");
    std::string name = ident("attribute name");
    if (!is_attribute(name)) fail("'" + name + "' is not a declared attribute");
    ref = parse_ref(name);
    const Attribute& a = p_.attributes.at(name);
    if (neg) {
      if (a.range_sort != "bool") fail("'~' applies only to boolean attributes");
      value = Term::sym("f");
      return;
    }
    if (accept("=")) {
      value = parse_term();
      return;
    }
    if (a.range_sort != "bool") fail("attribute '" + name + "' requires '= value'");
    value = Term::sym("t");
  }

  Literal parse_literal() {
    Literal l;
    while (peek().kind == PTok::Ident && peek().text == "not") {
      ++pos_;
      l.naf = !l.naf;
    }
    if ((peek().kind == PTok::Sym && peek().text == "~") ||
        (peek().kind == PTok::Ident && is_attribute(peek().text))) {
      l.kind = Literal::Kind::Attr;
      parse_attr_lit(l.ref, l.value);
      return l;
    }
    l.kind = Literal::Kind::Cmp;
    l.lhs = parse_term();
    if (accept("="))
      l.op = CmpOp::Eq;
    else if (accept("!="))
      l.op = CmpOp::Ne;
    else
      fail("expected '=' or '!=' in comparison");
    l.rhs = parse_term();
    return l;
  }

  std::vector<Literal> parse_body() {
    std::vector<Literal> body;
    do {
      body.push_back(parse_literal());
    } while (accept(","));
    return body;
  }

  void parse_statement() {
    if (peek().kind == PTok::Sym && peek().text == "[") {
      parse_random();
      return;
    }
    if (peek().kind == PTok::Ident) {
      const std::string& w = peek().text;
      if (w == "random") {
        parse_random();
        return;
      }
      if (w == "pr") {
        parse_pr();
        return;
      }
      if (w == "obs") {
        parse_obs();
        return;
      }
      if (w == "do") {
        parse_do();
        return;
      }
    }
    parse_rule();
  }

  void parse_rule() {
    NormalRule r;
    if (accept(":-")) {
      r.body = parse_body();
      expect(".");
      p_.rules.push_back(std::move(r));
      return;
    }
    parse_attr_lit(r.head, r.head_value);
    if (accept(":-")) r.body = parse_body();
    expect(".");
    p_.rules.push_back(std::move(r));
  }

  void parse_random() {
    RandomRule r;
    if (accept("[")) {
      r.id = ident("rule name");
      expect("]");
    } else {
      r.id = "r" + std::to_string(++auto_rule_);
    }
    if (ident("'random'") != "random") fail("expected 'random'");
    expect("(");
    std::string name = ident("attribute name");
    if (!is_attribute(name)) fail("'" + name + "' is not a declared attribute");
    r.target = parse_ref(name);
    if (accept(":")) {
      expect("{");
      std::string binder = ident("binder variable");
      expect(":");
      std::string pred = ident("range predicate");
      expect("(");
      std::string inner = ident("binder variable");
      expect(")");
      expect("}");
      if (inner != binder) fail("range predicate must use the binder variable");
      r.range_pred = pred;
    }
    expect(")");
    if (accept(":-")) r.body = parse_body();
    expect(".");
    p_.selections.push_back(std::move(r));
  }

  void parse_pr() {
    ++pos_;  // 'pr'
    PrAtom pr;
    expect("[");
    pr.rule_id = ident("rule name");
    expect("]");
    expect("(");
    parse_attr_lit(pr.target, pr.value);
    if (accept("|")) pr.condition = parse_body();
    expect(")");
    expect("=");
    if (peek().kind != PTok::Number) fail("expected probability");
    pr.p = Rational::parse(next().text);
    expect(".");
    pr.index = static_cast<int>(p_.pr_atoms.size()) + 1;
    p_.pr_atoms.push_back(std::move(pr));
  }

  void parse_obs() {
    ++pos_;  // 'obs'
    expect("(");
    ObsFact o;
    bool neg = peek().kind == PTok::Sym && peek().text == "~";
    if (neg) {
      parse_attr_lit(o.target, o.value);
    } else {
      std::string name = ident("attribute name");
      if (!is_attribute(name)) fail("'" + name + "' is not a declared attribute");
      o.target = parse_ref(name);
      const Attribute& a = p_.attributes.at(name);
      if (accept("=")) {
        o.value = parse_term();
      } else if (accept("!=")) {
        o.value = parse_term();
        o.negated = true;
      } else if (a.range_sort == "bool") {
        o.value = Term::sym("t");
      } else {
        fail("observation of '" + name + "' requires '= value'");
      }
    }
    expect(")");
    expect(".");
    p_.obs.push_back(std::move(o));
  }

  void parse_do() {
    ++pos_;  // 'do'
    expect("(");
    DoFact d;
    parse_attr_lit(d.target, d.value);
    expect(")");
    expect(".");
    p_.acts.push_back(std::move(d));
  }

  void finalize();
};

void Parser::finalize() {
  bool need_bool = false;
  for (const auto& [n, a] : p_.attributes) {
    if (a.range_sort == "bool") need_bool = true;
    for (const auto& s : a.arg_sorts)
      if (s == "bool") need_bool = true;
  }
  if (need_bool && !p_.sorts.count("bool"))
    p_.sorts["bool"] = {Term::sym("t"), Term::sym("f")};

  auto sort_of = [&](const std::string& s) -> const std::vector<Term>& {
    auto it = p_.sorts.find(s);
    if (it == p_.sorts.end()) throw ParseError("undeclared sort '" + s + "'", 0, 0);
    return it->second;
  };
  auto member = [&](const std::vector<Term>& dom, const Term& t) {
    return std::find(dom.begin(), dom.end(), t) != dom.end();
  };
  auto check_ref = [&](const AttrRef& r, const Term* value) {
    const Attribute& a = p_.attributes.at(r.attr);
    if (r.args.size() != a.arg_sorts.size())
      throw ParseError("attribute '" + r.attr + "' expects " +
                           std::to_string(a.arg_sorts.size()) + " argument(s)",
                       0, 0);
    for (std::size_t i = 0; i < r.args.size(); ++i)
      if (r.args[i].is_ground() && !member(sort_of(a.arg_sorts[i]), r.args[i]))
        throw ParseError("'" + r.args[i].str() + "' is not in sort '" + a.arg_sorts[i] + "'",
                         0, 0);
    if (value && value->is_ground() && !member(sort_of(a.range_sort), *value))
      throw ParseError(
          "value '" + value->str() + "' is outside the range of '" + r.attr + "'", 0, 0);
  };
  auto check_lits = [&](const std::vector<Literal>& ls) {
    for (const auto& l : ls)
      if (l.kind == Literal::Kind::Attr) check_ref(l.ref, &l.value);
  };

  for (const auto& [n, a] : p_.attributes) {
    sort_of(a.range_sort);
    for (const auto& s : a.arg_sorts) sort_of(s);
  }
  for (const auto& r : p_.rules) {
    if (!r.head.attr.empty()) check_ref(r.head, &r.head_value);
    check_lits(r.body);
  }
  std::set<std::string> ids;
  for (const auto& r : p_.selections) {
    if (!ids.insert(r.id).second)
      throw ParseError("duplicate selection rule '" + r.id + "'", 0, 0);
    check_ref(r.target, nullptr);
    if (sort_of(p_.attributes.at(r.target.attr).range_sort).empty())
      throw ParseError("random attribute '" + r.target.attr + "' has an empty range", 0, 0);
    check_lits(r.body);
    if (!r.range_pred.empty()) {
      auto it = p_.attributes.find(r.range_pred);
      if (it == p_.attributes.end())
        throw ParseError("'" + r.range_pred + "' is not a declared attribute", 0, 0);
      const Attribute& rp = it->second;
      if (rp.range_sort != "bool" || rp.arg_sorts.size() != 1 ||
          rp.arg_sorts[0] != p_.attributes.at(r.target.attr).range_sort)
        throw ParseError("range predicate '" + r.range_pred +
                             "' must be a boolean attribute over the range of '" +
                             r.target.attr + "'",
                         0, 0);
    }
  }
  for (const auto& pr : p_.pr_atoms) {
    const RandomRule* sel = nullptr;
    for (const auto& r : p_.selections)
      if (r.id == pr.rule_id) sel = &r;
    if (!sel) throw ParseError("pr-atom references unknown rule '" + pr.rule_id + "'", 0, 0);
    if (sel->target.attr != pr.target.attr)
      throw ParseError(
          "pr-atom for '" + pr.target.attr + "' does not match rule '" + pr.rule_id + "'", 0,
          0);
    check_ref(pr.target, &pr.value);
    check_lits(pr.condition);
    if (pr.p < Rational(0) || Rational(1) < pr.p)
      throw ParseError("probability " + pr.p.str() + " is outside [0, 1]", 0, 0);
  }
  auto check_ground_fact = [&](const AttrRef& r, const Term& v) {
    check_ref(r, &v);
    for (const auto& t : r.args)
      if (!t.is_ground()) throw ParseError("obs/do statements must be ground", 0, 0);
    if (!v.is_ground()) throw ParseError("obs/do statements must be ground", 0, 0);
  };
  for (const auto& o : p_.obs) check_ground_fact(o.target, o.value);
  for (const auto& d : p_.acts) check_ground_fact(d.target, d.value);
}

// --------------------------------------------------------------- grounding

using Subst = std::map<std::string, Term>;
using VarMap = std::map<std::string, std::string>;

void note_var(VarMap& m, const std::string& name, const std::string& sort) {
  auto [it, fresh] = m.emplace(name, sort);
  if (!fresh && it->second != sort)
    throw ParseError("conflicting sorts for variable " + name, 0, 0);
}

void scan_ref(const PlogProgram& p, const AttrRef& r, const Term* value, VarMap& m) {
  const Attribute& a = p.attributes.at(r.attr);
  for (std::size_t i = 0; i < r.args.size(); ++i)
    if (r.args[i].kind == Term::Kind::Var) note_var(m, r.args[i].name, a.arg_sorts[i]);
  if (value && value->kind == Term::Kind::Var) note_var(m, value->name, a.range_sort);
}

void scan_lits(const PlogProgram& p, const std::vector<Literal>& ls, VarMap& m,
               std::set<std::string>& loose) {
  for (const auto& l : ls) {
    if (l.kind == Literal::Kind::Attr) {
      scan_ref(p, l.ref, &l.value, m);
    } else {
      for (const Term* t : {&l.lhs, &l.rhs})
        if (t->kind == Term::Kind::Var) loose.insert(t->name);
    }
  }
}

void resolve_vars(const PlogProgram& p, const std::set<std::string>& loose, VarMap& m) {
  for (const auto& n : loose) {
    if (m.count(n)) continue;
    auto it = p.var_sorts.find(n);
    if (it == p.var_sorts.end())
      throw ParseError("cannot infer a sort for variable " + n, 0, 0);
    m[n] = it->second;
  }
  for (const auto& [n, s] : m) {
    auto it = p.var_sorts.find(n);
    if (it != p.var_sorts.end() && it->second != s)
      throw ParseError("variable " + n + " declared as '" + it->second +
                           "' but used as '" + s + "'",
                       0, 0);
  }
}

void for_each_subst(const PlogProgram& p, const VarMap& m,
                    const std::function<void(const Subst&)>& fn) {
  std::vector<std::pair<std::string, const std::vector<Term>*>> domains;
  for (const auto& [name, sort] : m) {
    auto it = p.sorts.find(sort);
    if (it == p.sorts.end()) throw ParseError("undeclared sort '" + sort + "'", 0, 0);
    if (it->second.empty()) return;  // empty domain: no instances
    domains.emplace_back(name, &it->second);
  }
  std::vector<std::size_t> idx(domains.size(), 0);
  while (true) {
    Subst s;
    for (std::size_t i = 0; i < domains.size(); ++i)
      s[domains[i].first] = (*domains[i].second)[idx[i]];
    fn(s);
    std::size_t i = 0;
    for (; i < domains.size(); ++i) {
      if (++idx[i] < domains[i].second->size()) break;
      idx[i] = 0;
    }
    if (i == domains.size()) break;
  }
}

Term subst_term(const Term& t, const Subst& s) {
  if (t.kind != Term::Kind::Var) return t;
  return s.at(t.name);
}

AttrRef subst_ref(const AttrRef& r, const Subst& s) {
  AttrRef out;
  out.attr = r.attr;
  for (const auto& t : r.args) out.args.push_back(subst_term(t, s));
  return out;
}

bool eval_ground_cmp(const Term& l, CmpOp op, const Term& r) {
  if (l.is_numeric() && r.is_numeric()) {
    Rational a = l.numeric_value();
    Rational b = r.numeric_value();
    switch (op) {
      case CmpOp::Eq: return a == b;
      case CmpOp::Ne: return a != b;
      case CmpOp::Lt: return a < b;
      case CmpOp::Le: return a <= b;
      case CmpOp::Gt: return b < a;
      case CmpOp::Ge: return b <= a;
    }
  }
  if (op == CmpOp::Eq) return l == r;
  if (op == CmpOp::Ne) return !(l == r);
  throw std::runtime_error("ordering comparison on non-numeric terms: " + l.str() +
                           " vs " + r.str());
}

// Instantiates a body and folds away constant comparisons; nullopt marks a
// body made unsatisfiable by a false comparison.
std::optional<std::vector<Literal>> subst_body(const std::vector<Literal>& body,
                                               const Subst& s) {
  std::vector<Literal> out;
  for (const auto& l : body) {
    Literal g = l;
    if (l.kind == Literal::Kind::Attr) {
      g.ref = subst_ref(l.ref, s);
      g.value = subst_term(l.value, s);
      out.push_back(std::move(g));
      continue;
    }
    g.lhs = subst_term(l.lhs, s);
    g.rhs = subst_term(l.rhs, s);
    bool v = eval_ground_cmp(g.lhs, g.op, g.rhs);
    if (g.naf) v = !v;
    if (!v) return std::nullopt;
  }
  return out;
}

struct GRandom {
  const RandomRule* src = nullptr;
  std::vector<Term> args;
  std::vector<Literal> body;
};

struct GPrInst {
  const PrAtom* src = nullptr;
  std::vector<Term> args;
  Term value;
  std::vector<Literal> cond;
};

struct GroundPlog {
  std::vector<NormalRule> rules;
  std::vector<GRandom> randoms;
  std::vector<GPrInst> prs;
};

std::string lit_key(const Literal& l) {
  std::string s = l.naf ? "not " : "";
  if (l.kind == Literal::Kind::Attr)
    return s + Atom(l.ref.attr, l.ref.args).str() + "=" + l.value.str();
  return s + l.lhs.str() + cmp_op_str(l.op) + l.rhs.str();
}

std::string body_key(const std::vector<Literal>& b) {
  std::string s;
  for (const auto& l : b) s += lit_key(l) + ";";
  return s;
}

GroundPlog ground_plog(const PlogProgram& p) {
  GroundPlog g;
  for (const auto& r : p.rules) {
    VarMap m;
    std::set<std::string> loose;
    if (!r.head.attr.empty()) scan_ref(p, r.head, &r.head_value, m);
    scan_lits(p, r.body, m, loose);
    resolve_vars(p, loose, m);
    for_each_subst(p, m, [&](const Subst& s) {
      auto body = subst_body(r.body, s);
      if (!body) return;
      NormalRule gr;
      if (!r.head.attr.empty()) {
        gr.head = subst_ref(r.head, s);
        gr.head_value = subst_term(r.head_value, s);
      }
      gr.body = std::move(*body);
      g.rules.push_back(std::move(gr));
    });
  }
  std::set<std::string> seen;
  for (const auto& r : p.selections) {
    VarMap m;
    std::set<std::string> loose;
    scan_ref(p, r.target, nullptr, m);
    scan_lits(p, r.body, m, loose);
    resolve_vars(p, loose, m);
    for_each_subst(p, m, [&](const Subst& s) {
      auto body = subst_body(r.body, s);
      if (!body) return;
      GRandom gr;
      gr.src = &r;
      gr.args = subst_ref(r.target, s).args;
      gr.body = std::move(*body);
      std::string key = "R|" + r.id + "|" + Atom(r.target.attr, gr.args).str() + "|" +
                        body_key(gr.body);
      if (seen.insert(key).second) g.randoms.push_back(std::move(gr));
    });
  }
  for (const auto& pr : p.pr_atoms) {
    VarMap m;
    std::set<std::string> loose;
    scan_ref(p, pr.target, &pr.value, m);
    scan_lits(p, pr.condition, m, loose);
    resolve_vars(p, loose, m);
    for_each_subst(p, m, [&](const Subst& s) {
      auto cond = subst_body(pr.condition, s);
      if (!cond) return;
      GPrInst gp;
      gp.src = &pr;
      gp.args = subst_ref(pr.target, s).args;
      gp.value = subst_term(pr.value, s);
      gp.cond = std::move(*cond);
      std::string key = "P|" + std::to_string(pr.index) + "|" +
                        Atom(pr.target.attr, gp.args).str() + "=" + gp.value.str() + "|" +
                        body_key(gp.cond);
      if (seen.insert(key).second) g.prs.push_back(std::move(gp));
    });
  }
  return g;
}

// --------------------------------------------------------------- semantics

const std::vector<Term>& range_of(const PlogProgram& p, const std::string& attr) {
  return p.sorts.at(p.attributes.at(attr).range_sort);
}

std::vector<std::vector<Term>> arg_tuples(const PlogProgram& p, const Attribute& a) {
  std::vector<std::vector<Term>> out{{}};
  for (const auto& s : a.arg_sorts) {
    const auto& dom = p.sorts.at(s);
    std::vector<std::vector<Term>> next;
    for (const auto& prefix : out)
      for (const auto& v : dom) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

bool lit_sat(const Literal& l, const std::set<Atom>& W) {
  bool v;
  if (l.kind == Literal::Kind::Attr)
    v = W.count(eq_atom(l.ref.attr, l.ref.args, l.value)) > 0;
  else
    v = eval_ground_cmp(l.lhs, l.op, l.rhs);
  return l.naf ? !v : v;
}

bool body_sat(const std::vector<Literal>& b, const std::set<Atom>& W) {
  for (const auto& l : b)
    if (!lit_sat(l, W)) return false;
  return true;
}

bool possible_due(const PlogProgram& p, const GRandom& g, const Term& v,
                  const std::set<Atom>& W) {
  const std::string& attr = g.src->target.attr;
  if (W.count(intervene_atom(attr, g.args))) return false;
  if (!g.src->range_pred.empty() &&
      !W.count(eq_atom(g.src->range_pred, {v}, Term::sym("t"))))
    return false;
  return body_sat(g.body, W);
}

using Key = std::pair<std::string, std::vector<Term>>;

struct InstInfo {
  const GRandom* active = nullptr;
  std::set<Term> possible;
  std::map<Term, Rational> assigned;  // values with an applied pr-atom
  bool has_pr = false;                // the active rule carries pr-atoms
};

std::map<Key, InstInfo> world_info(const PlogProgram& p, const GroundPlog& g,
                                   const std::set<Atom>& W) {
  std::map<Key, InstInfo> out;
  for (const auto& r : g.randoms) {
    if (!body_sat(r.body, W)) continue;
    Key k{r.src->target.attr, r.args};
    auto& info = out[k];
    info.active = &r;
    for (const auto& v : range_of(p, k.first))
      if (possible_due(p, r, v, W)) info.possible.insert(v);
  }
  for (const auto& pr : g.prs) {
    auto it = out.find(Key{pr.src->target.attr, pr.args});
    if (it == out.end()) continue;
    auto& info = it->second;
    if (!info.active || info.active->src->id != pr.src->rule_id) continue;
    info.has_pr = true;
    if (!possible_due(p, *info.active, pr.value, W)) continue;
    if (!body_sat(pr.cond, W)) continue;
    info.assigned[pr.value] = pr.src->p;
  }
  return out;
}

Rational value_prob(const InstInfo& info, const Term& v) {
  auto it = info.assigned.find(v);
  if (it != info.assigned.end()) return it->second;
  Rational sum(0);
  for (const auto& [val, q] : info.assigned) sum += q;
  auto ndef =
      static_cast<std::int64_t>(info.possible.size()) -
      static_cast<std::int64_t>(info.assigned.size());
  Rational def = (Rational(1) - sum) / Rational(ndef);
  if (def < Rational(0)) def = Rational(0);
  return def;
}

std::vector<FormulaPtr> body_formulas(const std::vector<Literal>& body) {
  std::vector<FormulaPtr> out;
  for (const auto& l : body) {
    if (l.kind != Literal::Kind::Attr)
      throw std::runtime_error("unexpected comparison in ground body");
    FormulaPtr a = f_atom(eq_atom(l.ref.attr, l.ref.args, l.value));
    out.push_back(l.naf ? f_not(a) : a);
  }
  return out;
}

}  // namespace

PlogProgram parse_plog(const std::string& text) { return Parser(text).run(); }

// ------------------------------------------------------------ atom builders

namespace {

std::vector<Term> tagged(const std::string& attr, const std::vector<Term>& args) {
  std::vector<Term> out;
  out.reserve(args.size() + 1);
  out.push_back(Term::sym(attr));
  out.insert(out.end(), args.begin(), args.end());
  return out;
}

std::vector<Term> tagged(const std::string& attr, const std::vector<Term>& args,
                         const Term& v) {
  std::vector<Term> out = tagged(attr, args);
  out.push_back(v);
  return out;
}

}  // namespace

Atom eq_atom(const std::string& attr, const std::vector<Term>& args, const Term& v) {
  std::vector<Term> a = args;
  a.push_back(v);
  return Atom("eq_" + attr, std::move(a));
}

Atom intervene_atom(const std::string& attr, const std::vector<Term>& args) {
  return Atom("intervene", tagged(attr, args));
}

Atom obs_atom(const std::string& attr, const std::vector<Term>& args, const Term& v,
              bool negated) {
  return Atom(negated ? "nobs" : "obs", tagged(attr, args, v));
}

Atom do_atom(const std::string& attr, const std::vector<Term>& args, const Term& v) {
  return Atom("do", tagged(attr, args, v));
}

Atom poss_atom(const std::string& rule_id, const std::string& attr,
               const std::vector<Term>& args, const Term& v) {
  return Atom("poss_" + rule_id, tagged(attr, args, v));
}

Atom poss_with_asspr_atom(const std::string& rule_id, int pr_index, const std::string& attr,
                          const std::vector<Term>& args, const Term& v) {
  return Atom("possWithAssPr_" + rule_id + "_" + std::to_string(pr_index),
              tagged(attr, args, v));
}

Atom asspr_atom(const std::string& rule_id, int pr_index, const std::string& attr,
                const std::vector<Term>& args, const Term& v) {
  return Atom("assPr_" + rule_id + "_" + std::to_string(pr_index), tagged(attr, args, v));
}

Atom poss_with_asspr_any_atom(const std::string& attr, const std::vector<Term>& args,
                              const Term& v) {
  return Atom("possWithAssPr", tagged(attr, args, v));
}

Atom poss_with_defpr_atom(const std::string& attr, const std::vector<Term>& args,
                          const Term& v) {
  return Atom("possWithDefPr", tagged(attr, args, v));
}

Atom num_defpr_atom(const std::string& attr, const std::vector<Term>& args,
                    std::int64_t m) {
  return Atom("numDefPr", tagged(attr, args, Term::integer(m)));
}

Atom rempr_atom(const std::string& attr, const std::vector<Term>& args, const Rational& k) {
  return Atom("remPr", tagged(attr, args, Term::rational(k)));
}

Atom total_defpr_atom(const std::string& attr, const std::vector<Term>& args,
                      const Rational& k) {
  return Atom("totalDefPr", tagged(attr, args, Term::rational(k)));
}

// ----------------------------------------------------------------- tau

std::set<Atom> tau_signature(const PlogProgram& p) {
  std::set<Atom> sig;
  for (const auto& [name, a] : p.attributes)
    for (const auto& args : arg_tuples(p, a))
      for (const auto& v : p.sorts.at(a.range_sort)) sig.insert(eq_atom(name, args, v));
  GroundPlog g = ground_plog(p);
  for (const auto& r : g.randoms) sig.insert(intervene_atom(r.src->target.attr, r.args));
  for (const auto& d : p.acts) sig.insert(intervene_atom(d.target.attr, d.target.args));
  for (const auto& o : p.obs)
    sig.insert(obs_atom(o.target.attr, o.target.args, o.value, o.negated));
  for (const auto& d : p.acts) sig.insert(do_atom(d.target.attr, d.target.args, d.value));
  return sig;
}

GroundProgram tau(const PlogProgram& p) {
  GroundPlog g = ground_plog(p);
  GroundProgram out;
  auto add = [&](FormulaPtr f) {
    WeightedFormula wf;
    wf.index = static_cast<int>(out.rules.size()) + 1;
    wf.weight = Weight::alpha();
    wf.formula = std::move(f);
    out.source_index.push_back(wf.index);
    out.rules.push_back(std::move(wf));
  };

  for (const auto& r : g.rules) {
    auto body = body_formulas(r.body);
    FormulaPtr head = r.head.attr.empty()
                          ? f_bot()
                          : f_atom(eq_atom(r.head.attr, r.head.args, r.head_value));
    if (body.empty() && !r.head.attr.empty())
      add(head);
    else
      add(f_implies(f_and_all(body), head));
  }

  // Attributes are functions: at most one value per argument tuple.
  for (const auto& [name, a] : p.attributes) {
    const auto& range = p.sorts.at(a.range_sort);
    for (const auto& args : arg_tuples(p, a))
      for (std::size_t i = 0; i < range.size(); ++i)
        for (std::size_t j = i + 1; j < range.size(); ++j)
          add(f_implies(f_and(f_atom(eq_atom(name, args, range[i])),
                              f_atom(eq_atom(name, args, range[j]))),
                        f_bot()));
  }

  for (const auto& r : g.randoms) {
    const std::string& attr = r.src->target.attr;
    auto body = body_formulas(r.body);
    body.push_back(f_not(f_atom(intervene_atom(attr, r.args))));
    std::vector<FormulaPtr> disj;
    for (const auto& v : range_of(p, attr)) disj.push_back(f_atom(eq_atom(attr, r.args, v)));
    add(f_implies(f_and_all(body), f_or_all(disj)));
    if (!r.src->range_pred.empty()) {
      for (const auto& v : range_of(p, attr)) {
        std::vector<FormulaPtr> cb;
        cb.push_back(f_atom(eq_atom(attr, r.args, v)));
        cb.push_back(f_not(f_atom(eq_atom(r.src->range_pred, {v}, Term::sym("t")))));
        cb.insert(cb.end(), body.begin(), body.end());
        add(f_implies(f_and_all(cb), f_bot()));
      }
    }
  }

  for (const auto& o : p.obs) {
    Atom oa = obs_atom(o.target.attr, o.target.args, o.value, o.negated);
    Atom ea = eq_atom(o.target.attr, o.target.args, o.value);
    add(f_atom(oa));
    if (o.negated)
      add(f_implies(f_and(f_atom(oa), f_atom(ea)), f_bot()));
    else
      add(f_implies(f_and(f_atom(oa), f_not(f_atom(ea))), f_bot()));
  }
  for (const auto& d : p.acts) {
    Atom da = do_atom(d.target.attr, d.target.args, d.value);
    add(f_atom(da));
    add(f_implies(f_atom(da), f_atom(eq_atom(d.target.attr, d.target.args, d.value))));
    add(f_implies(f_atom(da), f_atom(intervene_atom(d.target.attr, d.target.args))));
  }

  out.signature = tau_signature(p);
  for (const auto& r : out.rules) collect_atoms(r.formula, out.signature);
  return out;
}

// ----------------------------------------------------- worlds and checking

namespace {

std::set<std::set<Atom>> enumerate_worlds(const PlogProgram& p, const EnumCaps& caps) {
  GroundProgram t = tau(p);
  std::vector<FormulaPtr> fs;
  fs.reserve(t.rules.size());
  for (const auto& r : t.rules) fs.push_back(r.formula);
  return enumerate_stable_atoms(fs, t.signature, caps);
}

}  // namespace

std::vector<ConditionViolation> validate_conditions(const PlogProgram& p,
                                                    const EnumCaps& caps) {
  GroundPlog g = ground_plog(p);
  std::vector<ConditionViolation> out;
  std::set<std::string> seen;
  for (const auto& W : enumerate_worlds(p, caps)) {
    std::map<Key, const GRandom*> active;
    for (const auto& r : g.randoms) {
      if (!body_sat(r.body, W)) continue;
      Key k{r.src->target.attr, r.args};
      auto [it, fresh] = active.emplace(k, &r);
      if (!fresh && it->second != &r) {
        std::string d = "rules " + it->second->src->id + " and " + r.src->id +
                        " both select " + Atom(k.first, k.second).str() +
                        " in a possible world";
        if (seen.insert(d).second) out.push_back({1, d});
      }
    }
    for (std::size_t i = 0; i < g.prs.size(); ++i)
      for (std::size_t j = i + 1; j < g.prs.size(); ++j) {
        const auto& a = g.prs[i];
        const auto& b = g.prs[j];
        if (a.src->rule_id != b.src->rule_id || a.args != b.args || !(a.value == b.value))
          continue;
        auto it = active.find(Key{a.src->target.attr, a.args});
        if (it == active.end() || it->second->src->id != a.src->rule_id) continue;
        if (!body_sat(a.cond, W) || !body_sat(b.cond, W)) continue;
        std::string d = "pr-atoms " + std::to_string(a.src->index) + " and " +
                        std::to_string(b.src->index) + " both apply to " +
                        Atom(a.src->target.attr, a.args).str() + " = " + a.value.str() +
                        " in a possible world";
        if (seen.insert(d).second) out.push_back({2, d});
      }
  }
  return out;
}

std::vector<WorldReport> possible_worlds(const PlogProgram& p, const EnumCaps& caps) {
  GroundPlog g = ground_plog(p);
  std::vector<WorldReport> out;
  Rational total(0);
  for (const auto& W : enumerate_worlds(p, caps)) {
    auto info = world_info(p, g, W);
    WorldReport rep;
    rep.world = W;
    rep.mu_hat = Rational(1);
    for (const auto& [k, ii] : info) {
      for (const auto& v : ii.possible) {
        if (!W.count(eq_atom(k.first, k.second, v))) continue;
        HappenEntry h;
        h.target.attr = k.first;
        h.target.args = k.second;
        h.value = v;
        h.probability = value_prob(ii, v);
        h.assigned = ii.assigned.count(v) > 0;
        rep.mu_hat *= h.probability;
        rep.happen.push_back(std::move(h));
      }
    }
    total += rep.mu_hat;
    out.push_back(std::move(rep));
  }
  if (out.empty() || total == Rational(0))
    throw InconsistentError("no possible world has positive probability");
  for (auto& r : out) r.mu = (r.mu_hat / total).to_double();
  return out;
}

std::set<Atom> phi(const PlogProgram& p, const std::set<Atom>& world) {
  GroundPlog g = ground_plog(p);
  std::set<Atom> out = world;
  for (const auto& r : g.randoms)
    for (const auto& v : range_of(p, r.src->target.attr))
      if (possible_due(p, r, v, world))
        out.insert(poss_atom(r.src->id, r.src->target.attr, r.args, v));
  auto info = world_info(p, g, world);
  for (const auto& pr : g.prs) {
    const GRandom* match = nullptr;
    for (const auto& r : g.randoms)
      if (r.src->id == pr.src->rule_id && r.args == pr.args &&
          possible_due(p, r, pr.value, world)) {
        match = &r;
        break;
      }
    if (!match || !body_sat(pr.cond, world)) continue;
    const std::string& attr = pr.src->target.attr;
    out.insert(poss_with_asspr_atom(pr.src->rule_id, pr.src->index, attr, pr.args,
                                    pr.value));
    if (world.count(eq_atom(attr, pr.args, pr.value)))
      out.insert(asspr_atom(pr.src->rule_id, pr.src->index, attr, pr.args, pr.value));
  }
  for (const auto& [k, ii] : info) {
    for (const auto& [v, q] : ii.assigned)
      out.insert(poss_with_asspr_any_atom(k.first, k.second, v));
    std::int64_t ndef = 0;
    bool def_true = false;
    for (const auto& v : ii.possible) {
      if (ii.assigned.count(v)) continue;
      out.insert(poss_with_defpr_atom(k.first, k.second, v));
      ++ndef;
      if (world.count(eq_atom(k.first, k.second, v))) def_true = true;
    }
    if (!def_true) continue;
    out.insert(num_defpr_atom(k.first, k.second, ndef));
    if (ii.has_pr) {
      Rational rem(1);
      for (const auto& [v, q] : ii.assigned) rem -= q;
      out.insert(rempr_atom(k.first, k.second, rem));
      if (Rational(0) < rem) out.insert(total_defpr_atom(k.first, k.second, rem));
    }
  }
  return out;
}

// ----------------------------------------------------------- translation

LpmlnProgram plog2lpmln(const PlogProgram& p) {
  LpmlnProgram out;
  out.sorts = p.sorts;
  auto add = [&](Weight w, FormulaPtr f) {
    WeightedFormula wf;
    wf.index = static_cast<int>(out.rules.size()) + 1;
    wf.weight = w;
    wf.formula = std::move(f);
    out.rules.push_back(std::move(wf));
  };
  const Weight hard = Weight::alpha();

  GroundProgram t = tau(p);
  for (const auto& r : t.rules) add(hard, r.formula);

  GroundPlog g = ground_plog(p);

  for (const auto& r : g.randoms) {
    const std::string& attr = r.src->target.attr;
    for (const auto& v : range_of(p, attr)) {
      auto body = body_formulas(r.body);
      if (!r.src->range_pred.empty())
        body.push_back(f_atom(eq_atom(r.src->range_pred, {v}, Term::sym("t"))));
      body.push_back(f_not(f_atom(intervene_atom(attr, r.args))));
      add(hard, f_implies(f_and_all(body), f_atom(poss_atom(r.src->id, attr, r.args, v))));
    }
  }

  for (const auto& pr : g.prs) {
    const std::string& attr = pr.src->target.attr;
    Atom poss = poss_atom(pr.src->rule_id, attr, pr.args, pr.value);
    Atom pwa = poss_with_asspr_atom(pr.src->rule_id, pr.src->index, attr, pr.args,
                                    pr.value);
    Atom ass = asspr_atom(pr.src->rule_id, pr.src->index, attr, pr.args, pr.value);
    Atom eq = eq_atom(attr, pr.args, pr.value);
    std::vector<FormulaPtr> cb{f_atom(poss)};
    auto cond = body_formulas(pr.cond);
    cb.insert(cb.end(), cond.begin(), cond.end());
    add(hard, f_implies(f_and_all(cb), f_atom(pwa)));
    add(hard, f_implies(f_and(f_atom(eq), f_atom(pwa)), f_atom(ass)));
    if (pr.src->p == Rational(0))
      add(hard, f_implies(f_atom(ass), f_bot()));
    else
      add(Weight::value(std::log(pr.src->p.to_double())),
          f_implies(f_not(f_atom(ass)), f_bot()));
    add(hard,
        f_implies(f_atom(pwa), f_atom(poss_with_asspr_any_atom(attr, pr.args, pr.value))));
  }

  for (const auto& r : g.randoms) {
    const std::string& attr = r.src->target.attr;
    for (const auto& v : range_of(p, attr))
      add(hard, f_implies(f_and(f_atom(poss_atom(r.src->id, attr, r.args, v)),
                                f_not(f_atom(poss_with_asspr_any_atom(attr, r.args, v)))),
                          f_atom(poss_with_defpr_atom(attr, r.args, v))));
  }

  // One block of counting rules per random attribute instance.
  std::set<Key> keys;
  for (const auto& r : g.randoms) keys.insert(Key{r.src->target.attr, r.args});
  for (const auto& [attr, args] : keys) {
    const Attribute& a = p.attributes.at(attr);
    const auto& range = p.sorts.at(a.range_sort);
    const std::string binder_name = "X_" + a.range_sort;
    out.var_sorts[binder_name] = a.range_sort;
    Term binder = Term::var(binder_name, a.range_sort);
    Atom pattern("possWithDefPr", tagged(attr, args, binder));
    const auto n = static_cast<std::int64_t>(range.size());
    for (const auto& v : range) {
      for (std::int64_t m = 1; m <= n; ++m) {
        std::vector<FormulaPtr> body{
            f_atom(eq_atom(attr, args, v)), f_atom(poss_with_defpr_atom(attr, args, v)),
            f_count(Term::integer(m), {CountItem{binder, pattern}})};
        add(hard, f_implies(f_and_all(body), f_atom(num_defpr_atom(attr, args, m))));
      }
    }
    for (std::int64_t m = 2; m <= n; ++m)
      add(Weight::value(std::log(1.0 / static_cast<double>(m))),
          f_implies(f_not(f_atom(num_defpr_atom(attr, args, m))), f_bot()));
  }

  // Remaining probability mass for attributes with pr-atoms.
  std::map<Key, std::set<Rational>> rem_values;
  for (const auto& r : g.randoms) {
    const std::string& attr = r.src->target.attr;
    std::vector<const GPrInst*> prs;
    for (const auto& q : g.prs)
      if (q.src->rule_id == r.src->id && q.args == r.args) prs.push_back(&q);
    if (prs.empty()) continue;
    std::vector<SumItem> items;
    for (const auto* q : prs) {
      SumItem it;
      it.weight = q->src->p;
      it.pattern =
          poss_with_asspr_atom(q->src->rule_id, q->src->index, attr, q->args, q->value);
      items.push_back(std::move(it));
    }
    std::set<Rational> sums{Rational(0)};
    for (const auto* q : prs) {
      std::set<Rational> next = sums;
      for (const auto& s : sums) next.insert(s + q->src->p);
      sums = std::move(next);
    }
    Key k{attr, r.args};
    for (const auto& v : range_of(p, attr))
      for (const auto& y : sums) {
        auto body = body_formulas(r.body);
        body.push_back(f_atom(eq_atom(attr, r.args, v)));
        body.push_back(f_atom(poss_with_defpr_atom(attr, r.args, v)));
        body.push_back(f_sum(Term::rational(y), items));
        add(hard, f_implies(f_and_all(body),
                            f_atom(rempr_atom(attr, r.args, Rational(1) - y))));
      }
    for (const auto& y : sums) rem_values[k].insert(Rational(1) - y);
  }
  for (const auto& [k, ks] : rem_values)
    for (const auto& rem : ks) {
      Atom r = rempr_atom(k.first, k.second, rem);
      if (Rational(0) < rem) {
        Atom tot = total_defpr_atom(k.first, k.second, rem);
        add(hard, f_implies(f_atom(r), f_atom(tot)));
        add(Weight::value(std::log(rem.to_double())),
            f_implies(f_not(f_atom(tot)), f_bot()));
      } else {
        add(hard, f_implies(f_atom(r), f_bot()));
      }
    }

  return out;
}

CrosscheckReport crosscheck(const PlogProgram& p, const EnumCaps& caps) {
  auto viols = validate_conditions(p, caps);
  if (!viols.empty()) throw ConditionError(viols.front().detail);
  auto reports = possible_worlds(p, caps);
  GroundProgram g = lpmln::ground(plog2lpmln(p));
  ModelTable table = probability_table(g, caps);
  std::set<Atom> sig = tau_signature(p);

  CrosscheckReport rep;
  std::map<std::set<Atom>, double> by_model;
  for (const auto& e : table.entries) by_model[e.interpretation] = e.probability;

  bool ok = true;
  std::string detail;
  std::set<std::set<Atom>> nonzero_worlds;
  for (const auto& w : reports) {
    if (!(Rational(0) < w.mu_hat)) continue;
    ++rep.worlds;
    nonzero_worlds.insert(w.world);
    auto it = by_model.find(phi(p, w.world));
    if (it == by_model.end()) {
      ok = false;
      if (detail.empty())
        detail = "no stable model matches the extension of a possible world";
      continue;
    }
    rep.max_deviation = std::max(rep.max_deviation, std::fabs(it->second - w.mu));
  }
  if (static_cast<int>(table.entries.size()) != rep.worlds) {
    ok = false;
    if (detail.empty())
      detail = "model count " + std::to_string(table.entries.size()) +
               " differs from world count " + std::to_string(rep.worlds);
  }
  for (const auto& e : table.entries) {
    std::set<Atom> restricted;
    for (const auto& a : e.interpretation)
      if (sig.count(a)) restricted.insert(a);
    if (!nonzero_worlds.count(restricted)) {
      ok = false;
      if (detail.empty()) detail = "a stable model does not restrict to a possible world";
    }
  }
  rep.bijection_ok = ok;
  rep.detail = detail;
  return rep;
}

// -------------------------------------------------------------- emission

namespace {

std::string cg_term(const Term& t, long long /*scale*/) {
  switch (t.kind) {
    case Term::Kind::Symbol:
    case Term::Kind::Var:
      return t.name;
    case Term::Kind::Int:
      return std::to_string(t.ival);
    case Term::Kind::Rat:
      return "rat(" + std::to_string(t.rat.num()) + "," + std::to_string(t.rat.den()) + ")";
  }
  return {};
}

std::string cg_atom(const Atom& a, long long scale) {
  if (a.args.empty()) return a.pred;
  std::string s = a.pred + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) s += ",";
    s += cg_term(a.args[i], scale);
  }
  return s + ")";
}

long long cg_scaled(double w, long long scale) {
  long long r = std::llround(static_cast<double>(scale) * w);
  if (std::llabs(r) > (1ll << 31))
    throw std::runtime_error("scaled weight magnitude exceeds 2^31");
  return r;
}

void cg_flatten(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FKind::And) {
    cg_flatten(f->a, out);
    cg_flatten(f->b, out);
    return;
  }
  if (f->kind != FKind::Top) out.push_back(f);
}

std::string cg_body_elem(const FormulaPtr& f, long long scale) {
  switch (f->kind) {
    case FKind::AtomRef:
      return cg_atom(f->atom, scale);
    case FKind::Not:
      if (f->a->kind != FKind::AtomRef) break;
      return "not " + cg_atom(f->a->atom, scale);
    case FKind::Count: {
      std::string s = "#count{ ";
      for (std::size_t i = 0; i < f->count_items.size(); ++i) {
        if (i) s += "; ";
        s += f->count_items[i].binder.name + " : " +
             cg_atom(f->count_items[i].pattern, scale);
      }
      return s + " } = " + f->lhs.str();
    }
    case FKind::Sum: {
      std::string s = "#sum{ ";
      for (std::size_t i = 0; i < f->sum_items.size(); ++i) {
        if (i) s += "; ";
        s += std::to_string(cg_scaled(f->sum_items[i].weight.to_double(), scale)) + "," +
             std::to_string(i) + " : " + cg_atom(f->sum_items[i].pattern, scale);
      }
      return s + " } = " + std::to_string(cg_scaled(f->lhs.numeric_value().to_double(),
                                                    scale));
    }
    default:
      break;
  }
  throw std::runtime_error("formula cannot be emitted as a clingo body literal");
}

}  // namespace

std::string emit_clingo(const PlogProgram& p, long long scale) {
  if (scale <= 0) throw std::runtime_error("scale must be positive");
  LpmlnProgram lp = plog2lpmln(p);
  std::ostringstream os;
  os << "% weak constraint weights and #sum elements scaled by " << scale << "\n";
  os << "% rational constants appear as rat(numerator,denominator)\n";
  for (const auto& wf : lp.rules) {
    if (!wf.weight.hard) {
      // Soft rules are all of the shape :- not a.
      if (wf.formula->kind != FKind::Implies || wf.formula->b->kind != FKind::Bot ||
          wf.formula->a->kind != FKind::Not ||
          wf.formula->a->a->kind != FKind::AtomRef)
        throw std::runtime_error("unexpected soft rule shape");
      os << ":~ not " << cg_atom(wf.formula->a->a->atom, scale) << ". ["
         << cg_scaled(wf.weight.soft, scale) << "@0]\n";
      continue;
    }
    const FormulaPtr& f = wf.formula;
    if (f->kind == FKind::AtomRef) {
      os << cg_atom(f->atom, scale) << ".\n";
      continue;
    }
    if (f->kind != FKind::Implies)
      throw std::runtime_error("unexpected hard rule shape");
    std::vector<FormulaPtr> body;
    cg_flatten(f->a, body);
    std::string head;
    if (f->b->kind != FKind::Bot) {
      std::vector<FormulaPtr> hs;
      std::function<void(const FormulaPtr&)> fl = [&](const FormulaPtr& h) {
        if (h->kind == FKind::Or) {
          fl(h->a);
          fl(h->b);
        } else {
          hs.push_back(h);
        }
      };
      fl(f->b);
      for (std::size_t i = 0; i < hs.size(); ++i) {
        if (hs[i]->kind != FKind::AtomRef)
          throw std::runtime_error("unexpected head shape");
        if (i) head += " ; ";
        head += cg_atom(hs[i]->atom, scale);
      }
    }
    std::string line = head;
    if (!body.empty() || head.empty()) {
      line += head.empty() ? ":- " : " :- ";
      if (body.empty()) line += "#true";
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) line += ", ";
        line += cg_body_elem(body[i], scale);
      }
    }
    os << line << ".\n";
  }
  return os.str();
}

}  // namespace lpmln::plog
