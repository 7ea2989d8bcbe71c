#include "lpmln/parser.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace lpmln {

namespace {

enum class Tok {
  End, Ident, Var, Number, Alpha, Sort, VarKw, Not, Bot, Top,
  ColonColon, If, Dot, Comma, Semi, LParen, RParen, LBrace, RBrace,
  Colon, Amp, Pipe, Arrow, CountKw, SumKw,
  Eq, Ne, Lt, Le, Gt, Ge,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    if (pos_ >= s_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = s_[pos_];
    if (std::islower(static_cast<unsigned char>(c))) {
      std::string id = read_word();
      tok_.text = id;
      if (id == "alpha") tok_.kind = Tok::Alpha;
      else if (id == "sort") tok_.kind = Tok::Sort;
      else if (id == "var") tok_.kind = Tok::VarKw;
      else if (id == "not") tok_.kind = Tok::Not;
      else if (id == "bot") tok_.kind = Tok::Bot;
      else if (id == "top") tok_.kind = Tok::Top;
      else tok_.kind = Tok::Ident;
      return;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      tok_.text = read_word();
      tok_.kind = Tok::Var;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < s_.size() &&
         std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      tok_.kind = Tok::Number;
      tok_.text = read_number();
      return;
    }
    if (c == '#') {
      std::size_t start = pos_;
      take();
      std::string word = read_word();
      if (word == "count") tok_.kind = Tok::CountKw;
      else if (word == "sum") tok_.kind = Tok::SumKw;
      else fail("unknown directive '#" + word + "'");
      tok_.text = s_.substr(start, pos_ - start);
      return;
    }
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < s_.size() && s_[pos_ + 1] == b;
    };
    if (two(':', ':')) { take(); take(); tok_.kind = Tok::ColonColon; return; }
    if (two(':', '-')) { take(); take(); tok_.kind = Tok::If; return; }
    if (two('-', '>')) { take(); take(); tok_.kind = Tok::Arrow; return; }
    if (two('!', '=')) { take(); take(); tok_.kind = Tok::Ne; return; }
    if (two('<', '=')) { take(); take(); tok_.kind = Tok::Le; return; }
    if (two('>', '=')) { take(); take(); tok_.kind = Tok::Ge; return; }
    take();
    switch (c) {
      case '.': tok_.kind = Tok::Dot; return;
      case ',': tok_.kind = Tok::Comma; return;
      case ';': tok_.kind = Tok::Semi; return;
      case '(': tok_.kind = Tok::LParen; return;
      case ')': tok_.kind = Tok::RParen; return;
      case '{': tok_.kind = Tok::LBrace; return;
      case '}': tok_.kind = Tok::RBrace; return;
      case ':': tok_.kind = Tok::Colon; return;
      case '&': tok_.kind = Tok::Amp; return;
      case '|': tok_.kind = Tok::Pipe; return;
      case '=': tok_.kind = Tok::Eq; return;
      case '<': tok_.kind = Tok::Lt; return;
      case '>': tok_.kind = Tok::Gt; return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '%') {
        while (pos_ < s_.size() && s_[pos_] != '\n') take();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else {
        break;
      }
    }
  }

  std::string read_word() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      take();
    return s_.substr(start, pos_ - start);
  }

  std::string read_number() {
    std::size_t start = pos_;
    if (s_[pos_] == '-') take();
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) take();
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == '/')) {
      // '.' terminates a statement; only treat it as a decimal point when a
      // digit follows.
      if (s_[pos_] == '/' ||
          (pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
        take();
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) take();
      }
    }
    return s_.substr(start, pos_ - start);
  }

  void take() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  LpmlnProgram run() {
    Lexer lex(text_);
    // First pass: collect declarations so variables can be resolved anywhere.
    tokens_.clear();
    while (true) {
      Token t = lex.next();
      tokens_.push_back(t);
      if (t.kind == Tok::End) break;
    }
    pos_ = 0;
    collect_declarations();
    pos_ = 0;
    int next_index = 1;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Sort || peek().kind == Tok::VarKw) {
        skip_statement();
        continue;
      }
      WeightedFormula wf;
      wf.index = next_index++;
      wf.weight = parse_weight();
      expect(Tok::ColonColon, "'::'");
      wf.formula = parse_statement_formula();
      expect(Tok::Dot, "'.'");
      prog_.rules.push_back(std::move(wf));
    }
    return std::move(prog_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  Token next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }

  void collect_declarations() {
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Sort) {
        next();
        if (peek().kind != Tok::Ident) fail("expected sort name");
        std::string name = next().text;
        expect(Tok::Eq, "'='");
        expect(Tok::LBrace, "'{'");
        std::vector<Term> elems;
        while (true) {
          elems.push_back(parse_ground_element());
          if (peek().kind == Tok::Comma) {
            next();
            continue;
          }
          break;
        }
        expect(Tok::RBrace, "'}'");
        expect(Tok::Dot, "'.'");
        if (elems.empty()) fail("empty sort '" + name + "'");
        prog_.sorts[name] = std::move(elems);
      } else if (peek().kind == Tok::VarKw) {
        next();
        if (peek().kind != Tok::Var) fail("expected variable name");
        std::string vname = next().text;
        expect(Tok::Colon, "':'");
        if (peek().kind != Tok::Ident) fail("expected sort name");
        std::string sname = next().text;
        expect(Tok::Dot, "'.'");
        if (!prog_.sorts.count(sname))
          fail("undeclared sort '" + sname + "' for variable " + vname);
        prog_.var_sorts[vname] = sname;
      } else {
        skip_statement();
      }
    }
  }

  void skip_statement() {
    while (peek().kind != Tok::End && peek().kind != Tok::Dot) next();
    if (peek().kind == Tok::Dot) next();
  }

  Term parse_ground_element() {
    if (peek().kind == Tok::Number) return number_term(next().text);
    if (peek().kind == Tok::Ident) return Term::sym(next().text);
    fail("expected sort element");
  }

  Term number_term(const std::string& text) {
    return Term::rational(Rational::parse(text));
  }

  Weight parse_weight() {
    if (peek().kind == Tok::Alpha) {
      next();
      return Weight::alpha();
    }
    if (peek().kind == Tok::Number) return Weight::value(std::strtod(next().text.c_str(), nullptr));
    fail("expected weight ('alpha' or a number)");
  }

  Term parse_term() {
    if (peek().kind == Tok::Number) return number_term(next().text);
    if (peek().kind == Tok::Ident) return Term::sym(next().text);
    if (peek().kind == Tok::Var) {
      Token t = next();
      auto it = prog_.var_sorts.find(t.text);
      if (it == prog_.var_sorts.end())
        throw ParseError("undeclared variable '" + t.text + "'", t.line, t.col);
      return Term::var(t.text, it->second);
    }
    fail("expected term");
  }

  Atom parse_atom_after_name(const std::string& name) {
    Atom a(name);
    if (peek().kind == Tok::LParen) {
      next();
      while (true) {
        a.args.push_back(parse_term());
        if (peek().kind == Tok::Comma) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  std::optional<CmpOp> peek_cmp_op() const {
    switch (peek().kind) {
      case Tok::Eq: return CmpOp::Eq;
      case Tok::Ne: return CmpOp::Ne;
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Ge: return CmpOp::Ge;
      default: return std::nullopt;
    }
  }

  FormulaPtr parse_aggregate(Term target) {
    Tok agg = next().kind;  // CountKw or SumKw
    expect(Tok::LBrace, "'{'");
    if (agg == Tok::CountKw) {
      std::vector<CountItem> items;
      while (true) {
        CountItem it;
        if (peek().kind != Tok::Var) fail("expected binder variable in #count");
        Token v = peek();
        it.binder = parse_term();
        (void)v;
        expect(Tok::Colon, "':'");
        if (peek().kind != Tok::Ident) fail("expected atom in #count");
        it.pattern = parse_atom_after_name(next().text);
        items.push_back(std::move(it));
        if (peek().kind == Tok::Semi) {
          next();
          continue;
        }
        break;
      }
      expect(Tok::RBrace, "'}'");
      return f_count(std::move(target), std::move(items));
    }
    std::vector<SumItem> items;
    while (true) {
      SumItem it;
      if (peek().kind != Tok::Number) fail("expected rational weight in #sum");
      it.weight = Rational::parse(next().text);
      expect(Tok::Colon, "':'");
      if (peek().kind != Tok::Ident) fail("expected atom in #sum");
      it.pattern = parse_atom_after_name(next().text);
      items.push_back(std::move(it));
      if (peek().kind == Tok::Semi) {
        next();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return f_sum(std::move(target), std::move(items));
  }

  // Atom, comparison, or aggregate.
  FormulaPtr parse_atomic() {
    if (peek().kind == Tok::Ident && peek(1).kind != Tok::LParen) {
      // Bare identifier: atom unless a comparison operator follows.
      std::string name = next().text;
      if (auto op = peek_cmp_op()) {
        next();
        if (*op == CmpOp::Eq &&
            (peek().kind == Tok::CountKw || peek().kind == Tok::SumKw))
          return parse_aggregate(Term::sym(name));
        return f_cmp(Term::sym(name), *op, parse_term());
      }
      return f_atom(Atom(name));
    }
    if (peek().kind == Tok::Ident) {
      Atom a = parse_atom_after_name(next().text);
      return f_atom(std::move(a));
    }
    if (peek().kind == Tok::Number || peek().kind == Tok::Var) {
      Term t = parse_term();
      auto op = peek_cmp_op();
      if (!op) fail("expected comparison operator after term");
      next();
      if (*op == CmpOp::Eq &&
          (peek().kind == Tok::CountKw || peek().kind == Tok::SumKw))
        return parse_aggregate(std::move(t));
      return f_cmp(std::move(t), *op, parse_term());
    }
    fail("expected atom, comparison, or aggregate");
  }

  FormulaPtr parse_unary() {
    switch (peek().kind) {
      case Tok::Not:
        next();
        return f_not(parse_unary());
      case Tok::Bot:
        next();
        return f_bot();
      case Tok::Top:
        next();
        return f_top();
      case Tok::LParen: {
        next();
        FormulaPtr f = parse_formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        return parse_atomic();
    }
  }

  FormulaPtr parse_conj() {
    FormulaPtr f = parse_unary();
    while (peek().kind == Tok::Amp) {
      next();
      f = f_and(f, parse_unary());
    }
    return f;
  }

  FormulaPtr parse_disj() {
    FormulaPtr f = parse_conj();
    while (peek().kind == Tok::Pipe) {
      next();
      f = f_or(f, parse_conj());
    }
    return f;
  }

  FormulaPtr parse_formula() {
    FormulaPtr f = parse_disj();
    if (peek().kind == Tok::Arrow) {
      next();
      return f_implies(f, parse_formula());
    }
    return f;
  }

  std::optional<FormulaPtr> try_parse_rule() {
    std::size_t save = pos_;
    FormulaPtr head;
    if (peek().kind == Tok::If) {
      head = f_bot();
    } else if (peek().kind == Tok::Bot && peek(1).kind == Tok::If) {
      next();
      head = f_bot();
    } else if (peek().kind == Tok::Ident) {
      std::vector<FormulaPtr> disj;
      while (true) {
        if (peek().kind != Tok::Ident) {
          pos_ = save;
          return std::nullopt;
        }
        Atom a;
        try {
          a = parse_atom_after_name(next().text);
        } catch (const ParseError&) {
          pos_ = save;
          return std::nullopt;
        }
        disj.push_back(f_atom(std::move(a)));
        if (peek().kind == Tok::Semi) {
          next();
          continue;
        }
        break;
      }
      if (peek().kind == Tok::Dot) return f_or_all(disj);  // fact
      if (peek().kind != Tok::If) {
        pos_ = save;
        return std::nullopt;
      }
      head = f_or_all(disj);
    } else {
      return std::nullopt;
    }
    expect(Tok::If, "':-'");
    std::vector<FormulaPtr> body;
    while (true) {
      body.push_back(parse_unary());
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      break;
    }
    return f_implies(f_and_all(body), head);
  }

  FormulaPtr parse_statement_formula() {
    if (auto r = try_parse_rule()) return *r;
    return parse_formula();
  }

  const std::string& text_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  LpmlnProgram prog_;
};

std::string double_str(double v) {
  if (v == static_cast<double>(static_cast<long long>(v)))
    return std::to_string(static_cast<long long>(v));
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_binary(const FormulaPtr& f) {
  return f->kind == FKind::And || f->kind == FKind::Or || f->kind == FKind::Implies;
}

std::string operand_str(const FormulaPtr& f) {
  if (is_binary(f)) return "(" + formula_str(f) + ")";
  return formula_str(f);
}

// A body element the comma-list parser can read back: unary-parsable text.
std::string element_str(const FormulaPtr& f) {
  if (is_binary(f)) return "(" + formula_str(f) + ")";
  return formula_str(f);
}

bool flatten_head(const FormulaPtr& f, std::vector<Atom>& out) {
  if (f->kind == FKind::AtomRef) {
    out.push_back(f->atom);
    return true;
  }
  if (f->kind == FKind::Or)
    return flatten_head(f->a, out) && f->b->kind == FKind::AtomRef &&
           (out.push_back(f->b->atom), true);
  return false;
}

void flatten_body(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == FKind::And) {
    flatten_body(f->a, out);
    out.push_back(f->b);
    return;
  }
  out.push_back(f);
}

}  // namespace

std::string formula_str(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Bot:
      return "bot";
    case FKind::Top:
      return "top";
    case FKind::AtomRef:
      return f->atom.str();
    case FKind::Not:
      return "not " + operand_str(f->a);
    case FKind::And:
      return operand_str(f->a) + " & " + operand_str(f->b);
    case FKind::Or:
      return operand_str(f->a) + " | " + operand_str(f->b);
    case FKind::Implies:
      return operand_str(f->a) + " -> " + operand_str(f->b);
    case FKind::Cmp:
      return f->lhs.str() + " " + cmp_op_str(f->op) + " " + f->rhs.str();
    case FKind::Count: {
      std::string s = f->lhs.str() + " = #count{";
      for (std::size_t i = 0; i < f->count_items.size(); ++i) {
        if (i) s += "; ";
        s += f->count_items[i].binder.str() + " : " + f->count_items[i].pattern.str();
      }
      return s + "}";
    }
    case FKind::Sum: {
      std::string s = f->lhs.str() + " = #sum{";
      for (std::size_t i = 0; i < f->sum_items.size(); ++i) {
        if (i) s += "; ";
        s += f->sum_items[i].weight.str() + " : " + f->sum_items[i].pattern.str();
      }
      return s + "}";
    }
  }
  return {};
}

std::string statement_str(const FormulaPtr& f) {
  // Fact forms.
  if (f->kind == FKind::AtomRef) return f->atom.str();
  {
    std::vector<Atom> head;
    if (f->kind == FKind::Or && flatten_head(f, head)) {
      std::string s;
      for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) s += " ; ";
        s += head[i].str();
      }
      return s;
    }
  }
  if (f->kind == FKind::Implies) {
    std::vector<Atom> head;
    bool head_ok = f->b->kind == FKind::Bot || flatten_head(f->b, head);
    if (head_ok) {
      std::vector<FormulaPtr> body;
      flatten_body(f->a, body);
      std::string s;
      if (f->b->kind != FKind::Bot) {
        for (std::size_t i = 0; i < head.size(); ++i) {
          if (i) s += " ; ";
          s += head[i].str();
        }
        s += " ";
      }
      s += ":- ";
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += element_str(body[i]);
      }
      return s;
    }
  }
  return formula_str(f);
}

std::string weight_str(const Weight& w) {
  return w.hard ? "alpha" : double_str(w.soft);
}

LpmlnProgram parse_lpmln(const std::string& text) { return Parser(text).run(); }

std::string print_lpmln(const LpmlnProgram& program) {
  std::ostringstream out;
  for (const auto& [name, elems] : program.sorts) {
    out << "sort " << name << " = {";
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) out << ", ";
      out << elems[i].str();
    }
    out << "}.\n";
  }
  for (const auto& [vname, sname] : program.var_sorts)
    out << "var " << vname << " : " << sname << ".\n";
  for (const auto& wf : program.rules)
    out << weight_str(wf.weight) << " :: " << statement_str(wf.formula) << ".\n";
  return out.str();
}

}  // namespace lpmln
