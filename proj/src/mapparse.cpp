#include "dynstab/mapparse.hpp"

#include <cctype>
#include <cstdlib>

namespace dynstab {

namespace {

template <class K>
struct Scalars;

template <>
struct Scalars<CycloNumber> {
  int conductor;
  CycloNumber number(const std::string& lit) const {
    if (lit.find_first_of(".eE") != std::string::npos)
      throw DomainError("decimal literal '" + lit + "' in exact expression; use p/q");
    return CycloNumber(conductor, parse_rational(lit));
  }
  CycloNumber imag_unit() const {
    if (conductor % 4 != 0) throw DomainError("'i' requires a conductor divisible by 4");
    return CycloNumber::root_of_unity(conductor, conductor / 4);
  }
  CycloNumber one() const { return CycloNumber(conductor, 1L); }
};

template <>
struct Scalars<Complex> {
  Complex number(const std::string& lit) const {
    const auto slash = lit.find('/');
    if (slash != std::string::npos)
      return std::strtod(lit.substr(0, slash).c_str(), nullptr) / std::strtod(lit.substr(slash + 1).c_str(), nullptr);
    return std::strtod(lit.c_str(), nullptr);
  }
  Complex imag_unit() const { return {0.0, 1.0}; }
  Complex one() const { return 1.0; }
};

template <class K>
class ExprParser {
 public:
  ExprParser(const std::string& text, int nvars, Scalars<K> scalars)
      : s_(text), nvars_(nvars), scalars_(scalars) {}

  Poly<K> parse() {
    Poly<K> p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw DomainError("cannot parse '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_factor() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.';
  }

  Poly<K> expr() {
    Poly<K> acc = term();
    while (true) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        return acc;
    }
  }
  Poly<K> term() {
    Poly<K> acc = unary();
    while (true) {
      if (eat('*'))
        acc = acc * unary();
      else if (starts_factor())
        acc = acc * unary();
      else
        return acc;
    }
  }
  Poly<K> unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Poly<K> power() {
    Poly<K> base = atom();
    if (eat('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const int e = std::stoi(s_.substr(start, pos_ - start));
      if (e == 0) return Poly<K>::constant(nvars_, scalars_.one());
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }
  Poly<K> atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly<K> inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'i') {
      ++pos_;
      return Poly<K>::constant(nvars_, scalars_.imag_unit());
    }
    int var = -1;
    if (c == 'x' || c == 'y' || c == 'z' || c == 'w') {
      ++pos_;
      if (c == 'x' && pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        var = s_[pos_] - '0';
        ++pos_;
      } else {
        var = c == 'x' ? 0 : c == 'y' ? 1 : c == 'z' ? 2 : 3;
      }
    }
    if (var < 0) fail("unknown symbol");
    if (var >= nvars_) fail("variable index " + std::to_string(var) + " exceeds " + std::to_string(nvars_) + " variables");
    return Poly<K>::monomial(nvars_, Monomial::var(var), scalars_.one());
  }
  Poly<K> number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      digits();
    }
    // Fraction literal "p/q" binds tighter than anything else.
    if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    return Poly<K>::constant(nvars_, scalars_.number(s_.substr(start, pos_ - start)));
  }

  std::string s_;
  std::size_t pos_ = 0;
  int nvars_;
  Scalars<K> scalars_;
};

std::vector<std::string> split_top_level(const std::string& text) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

template <class K>
PolyMap<K> parse_map(const std::string& text, Scalars<K> scalars) {
  const auto parts = split_top_level(text);
  const int nv = static_cast<int>(parts.size());
  if (nv < 2 || nv > kMaxVars) throw DomainError("a map needs between 2 and " + std::to_string(kMaxVars) + " components");
  std::vector<Poly<K>> ps;
  for (const auto& part : parts) {
    Poly<K> p = ExprParser<K>(part, nv, scalars).parse();
    if (!p.is_homogeneous()) throw DomainError("component '" + part + "' is not homogeneous");
    ps.push_back(std::move(p));
  }
  return PolyMap<K>::from_polys(ps);
}

}  // namespace

Poly<CycloNumber> parse_expression_exact(const std::string& text, int nvars, int conductor) {
  return ExprParser<CycloNumber>(text, nvars, Scalars<CycloNumber>{conductor}).parse();
}

Poly<Complex> parse_expression_float(const std::string& text, int nvars) {
  return ExprParser<Complex>(text, nvars, Scalars<Complex>{}).parse();
}

PolyMap<CycloNumber> parse_map_exact(const std::string& text, int conductor) {
  return parse_map(text, Scalars<CycloNumber>{conductor});
}

PolyMap<Complex> parse_map_float(const std::string& text) { return parse_map(text, Scalars<Complex>{}); }

}  // namespace dynstab
