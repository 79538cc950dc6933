#pragma once

#include <string>
#include <string_view>

#include "cteam/formula.hpp"

namespace cteam {

class ParseError : public Error {
 public:
  ParseError(std::size_t pos, const std::string& msg)
      : Error("at offset " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace detail {

enum class Tok { Ident, Eq, Neq, LParen, RParen, Comma, Semi, Cf, SelImp, IntDisj, Or, And, Not, Bot, Top, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_char = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    auto starts = [&](std::string_view t) { return s.substr(i, t.size()) == t; };
    auto emit = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(s.substr(i, len)), i});
      i += len;
    };
    if (starts("_|_")) emit(Tok::Bot, 3);
    else if (starts("\\\\/")) emit(Tok::IntDisj, 3);
    else if (starts("\\/")) emit(Tok::Or, 2);
    else if (starts("/\\")) emit(Tok::And, 2);
    else if (starts("->")) emit(Tok::Cf, 2);
    else if (starts("=>")) emit(Tok::SelImp, 2);
    else if (starts("!=")) emit(Tok::Neq, 2);
    else if (c == '=') emit(Tok::Eq, 1);
    else if (c == '(') emit(Tok::LParen, 1);
    else if (c == ')') emit(Tok::RParen, 1);
    else if (c == ',') emit(Tok::Comma, 1);
    else if (c == ';') emit(Tok::Semi, 1);
    else if (c == '~') emit(Tok::Not, 1);
    else if (ident_char(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      emit(s.substr(i, j - i) == "_T_" ? Tok::Top : Tok::Ident, j - i);
    } else {
      throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : toks_(lex(text)), sig_(sig) {}

  Formula parse_all() {
    Formula f = parse_cf();
    if (peek().kind != Tok::End) throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
    if (dep_pos_ && idisj_pos_)
      throw ParseError(std::max(*dep_pos_, *idisj_pos_),
                       "dependence atoms and intuitionistic disjunction cannot be mixed");
    return f;
  }

  EquationSeq parse_equations() {
    std::size_t pos = peek().pos;
    Formula f = parse_and();
    if (peek().kind != Tok::End) throw ParseError(peek().pos, "unexpected '" + peek().text + "'");
    return to_eqs(f, pos);
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_++]; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) throw ParseError(peek().pos, std::string("expected ") + what);
    return take();
  }

  static void flatten_eqs(const Formula& f, EquationSeq& out, bool& ok) {
    if (f->kind == Kind::Eq) out.push_back({f->var, f->val});
    else if (f->kind == Kind::And) {
      flatten_eqs(f->a, out, ok);
      flatten_eqs(f->b, out, ok);
    } else ok = false;
  }
  static EquationSeq to_eqs(const Formula& f, std::size_t pos) {
    EquationSeq out;
    bool ok = true;
    flatten_eqs(f, out, ok);
    if (!ok) throw ParseError(pos, "counterfactual antecedent must be a conjunction of equations");
    return out;
  }

  Formula parse_cf() {
    std::size_t pos = peek().pos;
    Formula lhs = parse_sel();
    if (peek().kind != Tok::Cf) return lhs;
    take();
    EquationSeq ant = to_eqs(lhs, pos);
    return cf(std::move(ant), parse_cf());
  }

  Formula parse_sel() {
    Formula lhs = parse_idisj();
    if (peek().kind != Tok::SelImp) return lhs;
    std::size_t pos = take().pos;
    if (!is_co(lhs)) throw ParseError(pos, "left side of => must be a CO formula");
    return selimp(lhs, parse_sel());
  }

  Formula parse_idisj() {
    Formula lhs = parse_or();
    if (peek().kind != Tok::IntDisj) return lhs;
    std::size_t pos = take().pos;
    if (!idisj_pos_) idisj_pos_ = pos;
    return idisj(lhs, parse_idisj());
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    if (peek().kind != Tok::Or) return lhs;
    take();
    return disj(lhs, parse_or());
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    if (peek().kind != Tok::And) return lhs;
    take();
    return conj(lhs, parse_and());
  }

  Formula parse_unary() {
    if (peek().kind != Tok::Not) return parse_atom();
    std::size_t pos = take().pos;
    Formula a = parse_unary();
    if (!is_co(a)) throw ParseError(pos, "negation applies only to CO formulas");
    return neg(a);
  }

  VarId variable(const Token& t) {
    if (auto v = sig_.find_var(t.text)) return *v;
    throw ParseError(t.pos, "unknown variable '" + t.text + "'");
  }

  Formula parse_atom() {
    const Token& t = take();
    switch (t.kind) {
      case Tok::LParen: {
        Formula f = parse_cf();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Bot:
        return bot();
      case Tok::Top:
        return top();
      case Tok::Eq: {
        if (!dep_pos_) dep_pos_ = t.pos;
        expect(Tok::LParen, "'(' after '='");
        std::vector<VarId> vars{variable(expect(Tok::Ident, "a variable"))};
        while (peek().kind == Tok::Comma) {
          take();
          vars.push_back(variable(expect(Tok::Ident, "a variable")));
        }
        if (peek().kind == Tok::Semi) {
          take();
          VarId y = variable(expect(Tok::Ident, "a variable"));
          expect(Tok::RParen, "')'");
          return dep(std::move(vars), y);
        }
        expect(Tok::RParen, "';' or ')'");
        if (vars.size() != 1) throw ParseError(t.pos, "dependence atom needs ';' before its target");
        return con(vars.front());
      }
      case Tok::Ident: {
        VarId v = variable(t);
        const Token& op = take();
        if (op.kind != Tok::Eq && op.kind != Tok::Neq)
          throw ParseError(op.pos, "expected '=' or '!=' after variable");
        const Token& val = expect(Tok::Ident, "a value");
        auto x = sig_.find_value(v, val.text);
        if (!x)
          throw ParseError(val.pos, "value '" + val.text + "' is not in the range of '" + t.text + "'");
        return op.kind == Tok::Eq ? eq(v, *x) : neq(v, *x);
      }
      default:
        throw ParseError(t.pos, t.kind == Tok::End ? "unexpected end of input"
                                                  : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const Signature& sig_;
  std::optional<std::size_t> dep_pos_, idisj_pos_;
};

inline int level(const Formula& f) {
  switch (f->kind) {
    case Kind::Cf: return 1;
    case Kind::SelImp: return 2;
    case Kind::IntDisj: return 3;
    case Kind::Or: return 4;
    case Kind::And: return 5;
    case Kind::Neg: return f->a->kind == Kind::Eq ? 7 : 6;
    default: return 7;
  }
}

inline void render_to(const Formula& f, const Signature& sig, int min_level, std::string& out) {
  bool paren = level(f) < min_level;
  if (paren) out += '(';
  auto bin = [&](const char* op, int l) {
    render_to(f->a, sig, l + 1, out);
    out += op;
    render_to(f->b, sig, l, out);
  };
  switch (f->kind) {
    case Kind::Eq:
      out += sig.name(f->var) + "=" + sig.value_name(f->var, f->val);
      break;
    case Kind::Bot:
      out += "_|_";
      break;
    case Kind::Top:
      out += "_T_";
      break;
    case Kind::Neg:
      if (f->a->kind == Kind::Eq) {
        out += sig.name(f->a->var) + "!=" + sig.value_name(f->a->var, f->a->val);
      } else {
        out += '~';
        render_to(f->a, sig, 6, out);
      }
      break;
    case Kind::And: bin(" /\\ ", 5); break;
    case Kind::Or: bin(" \\/ ", 4); break;
    case Kind::IntDisj: bin(" \\\\/ ", 3); break;
    case Kind::SelImp: bin(" => ", 2); break;
    case Kind::Dep:
      out += "=(";
      for (std::size_t i = 0; i < f->dep_vars.size(); ++i) {
        if (i) out += ',';
        out += sig.name(f->dep_vars[i]);
      }
      if (!f->dep_vars.empty()) out += ';';
      out += sig.name(f->var) + ")";
      break;
    case Kind::Cf:
      for (std::size_t i = 0; i < f->antecedent.size(); ++i) {
        if (i) out += " /\\ ";
        const auto& e = f->antecedent[i];
        out += sig.name(e.var) + "=" + sig.value_name(e.var, e.val);
      }
      out += " -> ";
      render_to(f->a, sig, 1, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline Formula parse(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_all();
}

inline EquationSeq parse_equations(std::string_view text, const Signature& sig) {
  return detail::Parser(text, sig).parse_equations();
}

inline std::string render(const Formula& f, const Signature& sig) {
  std::string out;
  detail::render_to(f, sig, 0, out);
  return out;
}

inline std::string render_equations(const EquationSeq& eqs, const Signature& sig) {
  std::string out;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (i) out += " /\\ ";
    out += sig.name(eqs[i].var) + "=" + sig.value_name(eqs[i].var, eqs[i].val);
  }
  return out;
}

}  // namespace cteam
