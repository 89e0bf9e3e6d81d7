#pragma once

// Sparse multivariate polynomials over an exact cyclotomic field or over
// complex doubles, homogeneous polynomials and polynomial self-maps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynstab/cyclo.hpp"
#include "dynstab/error.hpp"

namespace dynstab {

inline constexpr int kMaxVars = 4;

struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};

  int degree() const {
    int s = 0;
    for (auto x : e) s += x;
    return s;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kMaxVars; ++i)
      if (e[i] > o.e[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] + o.e[i]);
    return r;
  }
  // Caller guarantees o divides *this.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kMaxVars; ++i) r.e[i] = static_cast<std::uint16_t>(e[i] - o.e[i]);
    return r;
  }
  static Monomial var(int i, int power = 1) {
    Monomial m;
    m.e[i] = static_cast<std::uint16_t>(power);
    return m;
  }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

// Graded lexicographic order, largest first; x0 > x1 > ... within a degree.
struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.e > b.e;
  }
};

template <class K>
struct CoeffTraits;

template <>
struct CoeffTraits<CycloNumber> {
  static constexpr bool exact = true;
  static CycloNumber zero_like(const CycloNumber& c) { return CycloNumber(c.conductor(), 0L); }
  static CycloNumber one_like(const CycloNumber& c) { return CycloNumber(c.conductor(), 1L); }
  static CycloNumber from_int(const CycloNumber& like, long v) { return CycloNumber(like.conductor(), v); }
  static bool is_zero(const CycloNumber& c) { return c.is_zero(); }
  static CycloNumber inverse(const CycloNumber& c) { return c.inverse(); }
  static Complex to_complex(const CycloNumber& c) { return c.embed(); }
  static std::string format(const CycloNumber& c) { return c.to_string(); }
  static CycloNumber parse(const std::string& s) { return CycloNumber::parse(s); }
};

template <>
struct CoeffTraits<Complex> {
  static constexpr bool exact = false;
  static Complex zero_like(const Complex&) { return 0.0; }
  static Complex one_like(const Complex&) { return 1.0; }
  static Complex from_int(const Complex&, long v) { return static_cast<double>(v); }
  static bool is_zero(const Complex& c) { return c == Complex(0.0); }
  static Complex inverse(const Complex& c) { return 1.0 / c; }
  static Complex to_complex(const Complex& c) { return c; }
  // "(re,im)" with round-trip precision.
  static std::string format(const Complex& c);
  static Complex parse(const std::string& s);
};

template <class K>
class Poly {
 public:
  using Terms = std::map<Monomial, K, GrlexGreater>;
  using Traits = CoeffTraits<K>;

  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) {
    if (nvars < 1 || nvars > kMaxVars) throw DomainError("unsupported variable count " + std::to_string(nvars));
  }

  static Poly constant(int nvars, const K& c) {
    Poly p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }
  static Poly monomial(int nvars, const Monomial& m, const K& c) {
    Poly p(nvars);
    p.add_term(m, c);
    return p;
  }

  int nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // -1 for the zero polynomial.
  int total_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }
  bool is_constant() const { return total_degree() <= 0; }
  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = total_degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) { return t.first.degree() == d; });
  }
  int degree_in(int var) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [m, c] : terms_) d = std::max<int>(d, m.e[var]);
    return d;
  }

  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const K& leading_coeff() const { return terms_.begin()->second; }
  // Any stored coefficient, used to build zeros and ones of the right field.
  const K& sample_coeff() const {
    if (terms_.empty()) throw DomainError("zero polynomial has no coefficients");
    return terms_.begin()->second;
  }

  void add_term(const Monomial& m, const K& c) {
    if (Traits::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (Traits::is_zero(it->second)) terms_.erase(it);
    }
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_vars(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_vars(b);
    Poly r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  Poly scaled(const K& s) const {
    Poly r(nvars_);
    if (Traits::is_zero(s)) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, c * s);
    return r;
  }
  Poly times_monomial(const Monomial& mono, const K& s) const {
    Poly r(nvars_);
    if (Traits::is_zero(s)) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m * mono, c * s);
    return r;
  }
  Poly pow(unsigned e) const {
    if (terms_.empty()) throw DomainError("power of the zero polynomial");
    Poly result = constant(nvars_, Traits::one_like(sample_coeff()));
    Poly base = *this;
    while (e) {
      if (e & 1U) result = result * base;
      e >>= 1U;
      if (e) base = base * base;
    }
    return result;
  }

  // Coefficient of var^k as a polynomial in the remaining variables.
  Poly coeff_in(int var, int k) const {
    Poly r(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m.e[var] != k) continue;
      Monomial rest = m;
      rest.e[var] = 0;
      r.terms_.emplace(rest, c);
    }
    return r;
  }
  std::map<int, Poly> split_by(int var) const {
    std::map<int, Poly> parts;
    for (const auto& [m, c] : terms_) {
      Monomial rest = m;
      rest.e[var] = 0;
      auto [it, _] = parts.try_emplace(m.e[var], nvars_);
      it->second.terms_.emplace(rest, c);
    }
    return parts;
  }

  // Scaled so that the graded-lex leading coefficient is 1.
  Poly monic() const {
    if (terms_.empty()) return *this;
    return scaled(Traits::inverse(leading_coeff()));
  }

  template <class V>
  V evaluate(std::span<const V> point) const {
    if (static_cast<int>(point.size()) != nvars_) throw DomainError("evaluation point has wrong dimension");
    if (terms_.empty()) return CoeffTraits<V>::zero_like(point[0]);
    V acc{};
    bool first = true;
    for (const auto& [m, c] : terms_) {
      V t = as_value<V>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < m.e[i]; ++k) t = t * point[i];
      if (first) {
        acc = t;
        first = false;
      } else {
        acc = acc + t;
      }
    }
    return acc;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) return false;
    auto ib = b.terms_.begin();
    for (const auto& [m, c] : a.terms_) {
      if (m != ib->first || !(c == ib->second)) return false;
      ++ib;
    }
    return true;
  }

 private:
  template <class V>
  static V as_value(const K& c) {
    if constexpr (std::is_same_v<V, K>)
      return c;
    else
      return Traits::to_complex(c);
  }
  void check_vars(const Poly& o) const {
    if (nvars_ != o.nvars_) throw DomainError("variable count mismatch");
  }

  int nvars_ = 1;
  Terms terms_;
};

template <class K>
struct DivisionResult {
  Poly<K> quotient;
  Poly<K> remainder;
};

// Multivariate division by a single divisor in graded-lex order. The remainder
// is zero exactly when divisor divides p.
template <class K>
DivisionResult<K> poly_divmod(const Poly<K>& p, const Poly<K>& divisor) {
  using Traits = CoeffTraits<K>;
  if (divisor.is_zero()) throw DomainError("division by the zero polynomial");
  Poly<K> q(p.nvars()), r(p.nvars()), work = p;
  const Monomial& lm = divisor.leading_monomial();
  const K lc_inv = Traits::inverse(divisor.leading_coeff());
  while (!work.is_zero()) {
    const auto& [m, c] = *work.terms().begin();
    if (lm.divides(m)) {
      const Monomial qm = m / lm;
      const K qc = c * lc_inv;
      q.add_term(qm, qc);
      work -= divisor.times_monomial(qm, qc);
    } else {
      r.add_term(m, c);
      work -= Poly<K>::monomial(p.nvars(), m, c);
    }
  }
  return {std::move(q), std::move(r)};
}

template <class K>
std::optional<Poly<K>> try_divide_exact(const Poly<K>& p, const Poly<K>& divisor) {
  auto [q, r] = poly_divmod(p, divisor);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

// Carries the nonzero remainder as a witness of non-divisibility.
class InexactDivision : public Error {
 public:
  InexactDivision(std::string remainder_text, std::size_t remainder_terms)
      : Error("division is not exact; remainder has " + std::to_string(remainder_terms) + " term(s)"),
        remainder_(std::move(remainder_text)) {}
  const std::string& remainder() const { return remainder_; }

 private:
  std::string remainder_;
};

// Terms in descending graded-lex order joined by " + ", each written as
// "coeff * x0^e0 x1^e1 ..." listing every variable; "0" for the zero polynomial.
template <class K>
std::string to_string(const Poly<K>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (!out.empty()) out += " + ";
    out += CoeffTraits<K>::format(c);
    out += " *";
    for (int i = 0; i < p.nvars(); ++i) out += " x" + std::to_string(i) + "^" + std::to_string(m.e[i]);
  }
  return out;
}

// Inverse of to_string. nvars is only consulted for the zero polynomial.
template <class K>
Poly<K> parse_poly(const std::string& text, int nvars);

template <class K>
Poly<K> divide_exact(const Poly<K>& p, const Poly<K>& divisor) {
  auto [q, r] = poly_divmod(p, divisor);
  if (!r.is_zero()) throw InexactDivision(to_string(r), r.size());
  return q;
}

// Substitute inner[i] for x_i in outer. Products of inner components are
// memoized per monomial of outer.
template <class K>
Poly<K> substitute(const Poly<K>& outer, std::span<const Poly<K>> inner,
                   std::map<Monomial, Poly<K>>* cache = nullptr) {
  if (static_cast<int>(inner.size()) != outer.nvars()) throw DomainError("substitution arity mismatch");
  if (inner.empty()) throw DomainError("empty substitution");
  const int nv = inner[0].nvars();
  std::map<Monomial, Poly<K>> local;
  auto& memo = cache ? *cache : local;
  // Powers of single variables first, then general monomials built on them.
  auto power_of = [&](int i, int k) -> const Poly<K>& {
    const Monomial key = Monomial::var(i, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Poly<K> value = k == 1 ? inner[i] : inner[i].pow(static_cast<unsigned>(k));
    return memo.emplace(key, std::move(value)).first->second;
  };
  Poly<K> result(nv);
  for (const auto& [m, c] : outer.terms()) {
    auto it = memo.find(m);
    if (it == memo.end()) {
      std::optional<Poly<K>> prod;
      for (int i = 0; i < outer.nvars(); ++i) {
        if (m.e[i] == 0) continue;
        const Poly<K>& f = power_of(i, m.e[i]);
        prod = prod ? *prod * f : f;
      }
      if (!prod) {
        result.add_term(Monomial{}, c);
        continue;
      }
      it = memo.emplace(m, std::move(*prod)).first;
    }
    for (const auto& [mm, cc] : it->second.terms()) result.add_term(mm, cc * c);
  }
  return result;
}

template <class K>
class HomPoly {
 public:
  HomPoly() = default;
  // Throws DomainError unless p is homogeneous of the stated degree (the zero
  // polynomial may carry any nominal degree).
  HomPoly(Poly<K> p, int degree) : poly_(std::move(p)), degree_(degree) {
    if (degree < 0) throw DomainError("negative degree");
    if (!poly_.is_zero() && (!poly_.is_homogeneous() || poly_.total_degree() != degree))
      throw DomainError("polynomial is not homogeneous of degree " + std::to_string(degree));
  }
  explicit HomPoly(Poly<K> p) : HomPoly(p, std::max(p.total_degree(), 0)) {}

  static HomPoly zero(int nvars, int degree) { return HomPoly(Poly<K>(nvars), degree); }

  const Poly<K>& poly() const { return poly_; }
  int nvars() const { return poly_.nvars(); }
  int degree() const { return degree_; }
  bool is_zero() const { return poly_.is_zero(); }
  const typename Poly<K>::Terms& terms() const { return poly_.terms(); }

  friend HomPoly operator*(const HomPoly& a, const HomPoly& b) { return HomPoly(a.poly_ * b.poly_, a.degree_ + b.degree_); }
  friend bool operator==(const HomPoly& a, const HomPoly& b) { return a.degree_ == b.degree_ && a.poly_ == b.poly_; }
  HomPoly pow(unsigned e) const { return HomPoly(poly_.pow(e), degree_ * static_cast<int>(e)); }

 private:
  Poly<K> poly_;
  int degree_ = 0;
};

template <class K>
class PolyMap {
 public:
  PolyMap() = default;
  explicit PolyMap(std::vector<HomPoly<K>> components) : comps_(std::move(components)) {
    if (comps_.empty()) throw DomainError("map needs at least one component");
    const int nv = comps_[0].nvars(), d = comps_[0].degree();
    bool any_nonzero = false;
    for (const auto& c : comps_) {
      if (c.nvars() != nv || c.degree() != d) throw DomainError("map components must share variables and degree");
      any_nonzero = any_nonzero || !c.is_zero();
    }
    if (!any_nonzero) throw DomainError("all components of the map vanish identically");
  }
  // Components as plain polynomials; all must be homogeneous of one degree.
  static PolyMap from_polys(const std::vector<Poly<K>>& ps) {
    int d = -1;
    for (const auto& p : ps) d = std::max(d, p.total_degree());
    if (d < 0) throw DomainError("all components of the map vanish identically");
    std::vector<HomPoly<K>> comps;
    for (const auto& p : ps) comps.emplace_back(p, d);
    return PolyMap(std::move(comps));
  }

  const std::vector<HomPoly<K>>& components() const { return comps_; }
  const HomPoly<K>& operator[](std::size_t i) const { return comps_[i]; }
  std::size_t size() const { return comps_.size(); }
  int nvars() const { return comps_[0].nvars(); }
  int degree() const { return comps_[0].degree(); }
  bool is_endomorphism() const { return static_cast<int>(comps_.size()) == nvars(); }
  const K& sample_coeff() const {
    for (const auto& c : comps_)
      if (!c.is_zero()) return c.poly().sample_coeff();
    throw DomainError("all components vanish");
  }

  std::vector<Poly<K>> polys() const {
    std::vector<Poly<K>> out;
    for (const auto& c : comps_) out.push_back(c.poly());
    return out;
  }

  template <class V>
  std::vector<V> evaluate(std::span<const V> point) const {
    std::vector<V> out;
    out.reserve(comps_.size());
    for (const auto& c : comps_) {
      if (c.is_zero())
        out.push_back(CoeffTraits<V>::zero_like(point[0]));
      else
        out.push_back(c.poly().template evaluate<V>(point));
    }
    return out;
  }

  friend bool operator==(const PolyMap& a, const PolyMap& b) { return a.comps_ == b.comps_; }

 private:
  std::vector<HomPoly<K>> comps_;
};

// z -> outer(inner(z)). Throws DomainError on arity mismatch or when every
// component of the result vanishes (degenerate composition).
template <class K>
PolyMap<K> poly_compose(const PolyMap<K>& outer, const PolyMap<K>& inner) {
  if (outer.nvars() != static_cast<int>(inner.size()))
    throw DomainError("composition arity mismatch: outer has " + std::to_string(outer.nvars()) +
                      " variables, inner has " + std::to_string(inner.size()) + " components");
  const auto inner_polys = inner.polys();
  std::map<Monomial, Poly<K>> cache;
  std::vector<HomPoly<K>> comps;
  const int d = outer.degree() * inner.degree();
  for (const auto& c : outer.components()) {
    if (c.is_zero()) {
      comps.push_back(HomPoly<K>::zero(inner.nvars(), d));
      continue;
    }
    comps.emplace_back(substitute<K>(c.poly(), inner_polys, &cache), d);
  }
  bool any = false;
  for (const auto& c : comps) any = any || !c.is_zero();
  if (!any) throw DomainError("degenerate composition: every component vanishes identically");
  return PolyMap<K>(std::move(comps));
}

// Float image of an exact polynomial or map.
inline Poly<Complex> to_complex(const Poly<CycloNumber>& p) {
  Poly<Complex> r(p.nvars());
  for (const auto& [m, c] : p.terms()) r.add_term(m, c.embed());
  return r;
}
inline Poly<Complex> to_complex(const Poly<Complex>& p) { return p; }

template <class K>
PolyMap<Complex> to_complex(const PolyMap<K>& f) {
  std::vector<HomPoly<Complex>> comps;
  for (const auto& c : f.components()) comps.emplace_back(to_complex(c.poly()), c.degree());
  return PolyMap<Complex>(std::move(comps));
}

namespace detail {

template <class K>
Poly<K> univariate_gcd(Poly<K> a, Poly<K> b, int var) {
  using Traits = CoeffTraits<K>;
  if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);
  while (!b.is_zero()) {
    const int db = b.degree_in(var);
    const K inv = Traits::inverse(b.coeff_in(var, db).leading_coeff());
    while (!a.is_zero() && a.degree_in(var) >= db) {
      const int da = a.degree_in(var);
      const K factor = a.coeff_in(var, da).leading_coeff() * inv;
      a -= b.times_monomial(Monomial::var(var, da - db), factor);
    }
    std::swap(a, b);
  }
  return a.monic();
}

// Pseudo-remainder in var, with lc(b) multiplied in one reduction step at a time.
template <class K>
Poly<K> pseudo_remainder(Poly<K> a, const Poly<K>& b, int var) {
  const int db = b.degree_in(var);
  const Poly<K> lcb = b.coeff_in(var, db);
  while (!a.is_zero() && a.degree_in(var) >= db) {
    const int da = a.degree_in(var);
    const Poly<K> lca = a.coeff_in(var, da);
    a = lcb * a - (lca * b).times_monomial(Monomial::var(var, da - db), CoeffTraits<K>::one_like(a.sample_coeff()));
  }
  return a;
}

template <class K>
Poly<K> gcd_recursive(const Poly<K>& a, const Poly<K>& b, int top);

// GCD of the coefficients of p with respect to var; a polynomial in the
// variables below var.
template <class K>
Poly<K> content_in(const Poly<K>& p, int var) {
  const auto parts = p.split_by(var);
  std::optional<Poly<K>> g;
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
    g = g ? gcd_recursive(*g, it->second, var - 1) : it->second.monic();
    if (g->is_constant()) break;
  }
  return *g;
}

template <class K>
Poly<K> gcd_recursive(const Poly<K>& a, const Poly<K>& b, int top) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  const auto one = Poly<K>::constant(a.nvars(), CoeffTraits<K>::one_like(a.sample_coeff()));
  if (a.is_constant() || b.is_constant()) return one;
  while (top > 0 && a.degree_in(top) == 0 && b.degree_in(top) == 0) --top;
  if (top == 0) return univariate_gcd(a, b, 0);

  const Poly<K> ca = content_in(a, top), cb = content_in(b, top);
  const Poly<K> content_gcd = gcd_recursive(ca, cb, top - 1);
  Poly<K> pa = divide_exact(a, ca).monic(), pb = divide_exact(b, cb).monic();
  if (pa.degree_in(top) < pb.degree_in(top)) std::swap(pa, pb);
  while (true) {
    if (pb.degree_in(top) == 0) return content_gcd.monic();
    Poly<K> r = pseudo_remainder(pa, pb, top);
    if (r.is_zero()) return (content_gcd * pb).monic();
    r = divide_exact(r, content_in(r, top)).monic();
    pa = std::move(pb);
    pb = std::move(r);
  }
}

template <class K>
void require_exact(const char* op) {
  if constexpr (!CoeffTraits<K>::exact) throw DomainError(std::string(op) + ": exact domain required");
}

// Fixed small-integer line used by the coprimality certificate.
inline constexpr std::array<std::array<int, kMaxVars>, 2> kCertificateLine{{{1, 3, -2, 5}, {2, -1, 4, 3}}};

// Degree of the GCD of nonzero binary forms over F_prime; forms[j][k] is the
// coefficient of u^k v^(D_j - k).
int binary_form_gcd_degree(const std::vector<std::vector<std::uint64_t>>& forms, std::uint64_t prime);

// Restriction of p to the certificate line, reduced modulo the prime of
// prime_embedding(conductor). nullopt when a coefficient is not integral there.
std::optional<std::vector<std::uint64_t>> restrict_mod_prime(const Poly<CycloNumber>& p);

// True when the restrictions of ps to a fixed line, reduced modulo a prime
// ideal of degree one, are coprime and the first one is nonzero. A nontrivial
// common factor g of ps, scaled to be primitive at that prime, would restrict
// to a nonzero form of the same degree dividing every reduction, so a true
// result proves that ps are coprime. A false result proves nothing.
template <class K>
bool certified_coprime(std::span<const Poly<K>> ps) {
  if constexpr (!std::is_same_v<K, CycloNumber>) {
    return false;
  } else {
    if (ps.empty() || ps[0].is_zero() || ps[0].nvars() < 2 || !ps[0].is_homogeneous()) return false;
    std::vector<std::vector<std::uint64_t>> forms;
    for (const auto& p : ps) {
      if (p.is_zero()) continue;
      if (!p.is_homogeneous()) return false;
      auto f = restrict_mod_prime(p);
      if (!f) return false;
      const bool nonzero = std::any_of(f->begin(), f->end(), [](std::uint64_t c) { return c != 0; });
      if (!nonzero) {
        if (forms.empty()) return false;  // the first restriction must survive
        continue;
      }
      forms.push_back(std::move(*f));
    }
    if (forms.size() < 2) return false;
    return binary_form_gcd_degree(forms, prime_embedding(ps[0].sample_coeff().conductor()).prime) == 0;
  }
}

}  // namespace detail

// Monic GCD of the nonzero entries of ps, computed in residue fields above
// several primes and lifted back; the result is verified by exact division.
// nullopt when no verified candidate appears within max_primes primes.
std::optional<Poly<CycloNumber>> modular_gcd(std::span<const Poly<CycloNumber>> ps, int max_primes = 400);

namespace detail {

// Monic GCD of the nonzero entries of ps by the primitive-part pseudo-
// remainder sequence only.
template <class K>
Poly<K> prs_gcd(std::span<const Poly<K>> ps) {
  std::optional<Poly<K>> g;
  for (const auto& p : ps) {
    if (p.is_zero()) continue;
    g = g ? gcd_recursive(*g, p, p.nvars() - 1) : p.monic();
    if (g->is_constant()) break;
  }
  if (!g) throw DomainError("gcd of zero polynomials");
  return *g;
}

template <class K>
Poly<K> gcd_many(std::span<const Poly<K>> ps) {
  if constexpr (std::is_same_v<K, CycloNumber>) {
    if (auto g = modular_gcd(ps)) return *g;
  }
  return prs_gcd(ps);
}

}  // namespace detail

// Monic (graded-lex) GCD over the coefficient field. Restrictions to a fixed
// line certify coprime inputs; otherwise the primitive-part pseudo-remainder
// sequence runs in residue fields and the lifted result is checked by exact
// division, with the sequence over the field itself as fallback.
template <class K>
Poly<K> poly_gcd(const Poly<K>& p, const Poly<K>& q) {
  detail::require_exact<K>("poly_gcd");
  if (p.is_zero() && q.is_zero()) throw DomainError("poly_gcd: both arguments are zero");
  if (p.nvars() != q.nvars()) throw DomainError("poly_gcd: variable count mismatch");
  if (!p.is_zero() && !q.is_zero() && p.is_homogeneous() && q.is_homogeneous()) {
    const std::array<Poly<K>, 2> pair{p, q};
    if (detail::certified_coprime<K>(pair))
      return Poly<K>::constant(p.nvars(), CoeffTraits<K>::one_like(p.sample_coeff()));
  }
  const std::array<Poly<K>, 2> pair{p, q};
  return detail::gcd_many<K>(pair);
}

template <class K>
HomPoly<K> poly_gcd(const HomPoly<K>& p, const HomPoly<K>& q) {
  return HomPoly<K>(poly_gcd(p.poly(), q.poly()));
}

// GCD of all components of a map.
template <class K>
HomPoly<K> map_content(const PolyMap<K>& f) {
  detail::require_exact<K>("map_content");
  const auto ps = f.polys();
  const K one = CoeffTraits<K>::one_like(f.sample_coeff());
  if (detail::certified_coprime<K>(ps)) return HomPoly<K>(Poly<K>::constant(f.nvars(), one), 0);
  return HomPoly<K>(detail::gcd_many<K>(ps));
}

template <class K>
HomPoly<K> poly_divide_exact(const HomPoly<K>& p, const HomPoly<K>& divisor) {
  if (p.is_zero()) return HomPoly<K>::zero(p.nvars(), std::max(p.degree() - divisor.degree(), 0));
  return HomPoly<K>(divide_exact(p.poly(), divisor.poly()), p.degree() - divisor.degree());
}

// Componentwise exact division of a map by a common factor.
template <class K>
PolyMap<K> map_divide_exact(const PolyMap<K>& f, const HomPoly<K>& divisor) {
  std::vector<HomPoly<K>> comps;
  for (const auto& c : f.components()) comps.push_back(poly_divide_exact(c, divisor));
  return PolyMap<K>(std::move(comps));
}

}  // namespace dynstab
