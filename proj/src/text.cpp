#include "kuothom/text.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

#include "kuothom/errors.hpp"

namespace kuothom {

namespace {

constexpr std::uint32_t kMaxExponent = 100000;

enum class Tok { Number, Variable, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t var = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

using Resolver = std::function<std::optional<std::size_t>(std::string_view)>;

std::vector<Token> tokenize(std::string_view text, const Resolver& resolve, std::size_t line,
                            std::size_t column_offset) {
  std::vector<Token> out;
  std::size_t col = 1 + column_offset;
  std::size_t i = 0;
  auto single = [&](Tok k) {
    out.push_back({k, std::string(1, text[i]), 0, line, col});
    ++i;
    ++col;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      ++col;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Number, std::string(text.substr(i, j - i)), 0, line, col});
      col += j - i;
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
      auto name = text.substr(i, j - i);
      auto index = resolve(name);
      if (!index) throw ParseError("unknown variable '" + std::string(name) + "'", line, col);
      out.push_back({Tok::Variable, std::string(name), *index, line, col});
      col += j - i;
      i = j;
    } else {
      switch (c) {
        case '+': single(Tok::Plus); break;
        case '-': single(Tok::Minus); break;
        case '*': single(Tok::Star); break;
        case '^': single(Tok::Caret); break;
        case '/': single(Tok::Slash); break;
        case '(': single(Tok::LParen); break;
        case ')': single(Tok::RParen); break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
  }
  out.push_back({Tok::End, "", 0, line, col});
  return out;
}

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t nvars) : toks_(tokens), nvars_(nvars) {}

  Polynomial parse() {
    if (peek().kind == Tok::End) fail("empty expression");
    Polynomial p = expr();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool minus = next().kind == Tok::Minus;
      Polynomial rhs = term();
      if (minus) acc -= rhs;
      else acc += rhs;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = factor();
    while (peek().kind == Tok::Star) {
      next();
      acc = acc * factor();
    }
    return acc;
  }

  Polynomial factor() {
    if (peek().kind == Tok::Minus) {
      next();
      return -factor();
    }
    if (peek().kind == Tok::Plus) {
      next();
      return factor();
    }
    Polynomial base = primary();
    if (peek().kind == Tok::Caret) {
      next();
      if (peek().kind != Tok::Number) fail("expected a nonnegative integer exponent");
      const auto& tok = next();
      Integer e(tok.text);
      if (e > kMaxExponent) throw ParseError("exponent too large", tok.line, tok.column);
      base = base.pow(static_cast<unsigned>(e.get_ui()));
    }
    return base;
  }

  Polynomial primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Number: {
        next();
        Integer num(tok.text);
        Integer den(1);
        if (peek().kind == Tok::Slash) {
          next();
          if (peek().kind != Tok::Number) fail("expected an integer denominator");
          const auto& d = next();
          den = Integer(d.text);
          if (den == 0) throw ParseError("zero denominator", d.line, d.column);
        }
        return Polynomial::constant(nvars_, make_rational(num, den));
      }
      case Tok::Variable:
        next();
        return Polynomial::variable(nvars_, tok.var);
      case Tok::LParen: {
        next();
        Polynomial inner = expr();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        next();
        return inner;
      }
      case Tok::End:
        fail("unexpected end of expression");
      default:
        fail("unexpected '" + tok.text + "'");
    }
  }

  const std::vector<Token>& toks_;
  std::size_t nvars_;
  std::size_t pos_ = 0;
};

std::optional<std::size_t> resolve_x(std::string_view name) {
  if (name == "x") return 0;
  if (name == "y") return 1;
  if (name == "z") return 2;
  if (name == "w") return 3;
  if (name.size() >= 2 && name[0] == 'x' &&
      std::all_of(name.begin() + 1, name.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    if (name[1] == '0' || name.size() > 6) return std::nullopt;
    return std::stoul(std::string(name.substr(1))) - 1;
  }
  return std::nullopt;
}

void append_coefficient_and_monomial(std::string& out, const Rational& c, bool is_constant,
                                     const std::function<void(std::string&)>& monomial) {
  const Rational mag = abs(c);
  if (is_constant) {
    out += to_string(mag);
    return;
  }
  if (mag != 1) {
    out += to_string(mag);
    out += '*';
  }
  monomial(out);
}

void append_sign(std::string& out, const Rational& c, bool first) {
  if (first) {
    if (sgn(c) < 0) out += '-';
  } else {
    out += sgn(c) < 0 ? " - " : " + ";
  }
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars, std::size_t line,
                            std::size_t column_offset) {
  auto tokens = tokenize(text, resolve_x, line, column_offset);
  std::size_t needed = 1;
  for (const auto& t : tokens)
    if (t.kind == Tok::Variable) needed = std::max(needed, t.var + 1);
  if (nvars == 0) {
    nvars = needed;
  } else if (needed > nvars) {
    for (const auto& t : tokens)
      if (t.kind == Tok::Variable && t.var >= nvars)
        throw ParseError("variable '" + t.text + "' exceeds declared dimension " +
                             std::to_string(nvars),
                         t.line, t.column);
  }
  return Parser(tokens, nvars).parse();
}

UniPoly parse_unipoly(std::string_view text, std::size_t line, std::size_t column_offset) {
  auto resolve_t = [](std::string_view name) -> std::optional<std::size_t> {
    if (name == "t") return 0;
    return std::nullopt;
  };
  auto tokens = tokenize(text, resolve_t, line, column_offset);
  Polynomial p = Parser(tokens, 1).parse();
  std::vector<Rational> coeffs(p.degree() + 1, Rational(0));
  for (const auto& [m, c] : p.terms()) coeffs[m[0]] = c;
  return UniPoly(std::move(coeffs));
}

std::string variable_name(std::size_t index, std::size_t nvars) {
  static constexpr const char* kAliases[] = {"x", "y", "z", "w"};
  if (nvars <= 4 && index < 4) return kAliases[index];
  return "x" + std::to_string(index + 1);
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    append_sign(out, c, first);
    first = false;
    append_coefficient_and_monomial(out, c, m.degree() == 0, [&](std::string& s) {
      bool first_var = true;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!first_var) s += '*';
        first_var = false;
        s += variable_name(i, p.nvars());
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
      }
    });
  }
  return out;
}

std::string to_string(const UniPoly& q) {
  if (q.is_zero()) return "0";
  std::string out;
  bool first = true;
  const auto& cs = q.coefficients();
  for (std::size_t k = 0; k < cs.size(); ++k) {
    if (is_zero(cs[k])) continue;
    append_sign(out, cs[k], first);
    first = false;
    append_coefficient_and_monomial(out, cs[k], k == 0, [&](std::string& s) {
      s += 't';
      if (k > 1) s += "^" + std::to_string(k);
    });
  }
  return out;
}

}  // namespace kuothom
