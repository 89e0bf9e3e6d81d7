// Exact GCD over Q(zeta_m) from images in residue fields.
//
// For a prime l = 1 (mod m) the primes of Z[zeta_m] above l all have degree
// one; they correspond to zeta_m -> r^k for a primitive m-th root r mod l and
// k a unit mod m. The recursive primitive-PRS GCD runs in each F_l image, the
// phi(m) images of every coefficient are solved back to power-basis
// coordinates, combined across primes by CRT and rationally reconstructed. The
// candidate is accepted only after exact trial division of every input.

#include <algorithm>
#include <map>
#include <numeric>

#include "dynstab/poly.hpp"

namespace dynstab {

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1;
  for (a %= p; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

// Element of F_p; the modulus travels with the value.
struct ModP {
  u64 v = 0;
  u64 p = 2;

  ModP operator-() const { return {v ? p - v : 0, p}; }
  ModP& operator+=(const ModP& o) {
    v += o.v;
    if (v >= p) v -= p;
    return *this;
  }
  ModP& operator-=(const ModP& o) { return *this += -o; }
  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(const ModP& a, const ModP& b) { return {mulmod(a.v, b.v, a.p), a.p}; }
  friend bool operator==(const ModP& a, const ModP& b) { return a.v == b.v; }
};

}  // namespace

template <>
struct CoeffTraits<ModP> {
  static constexpr bool exact = true;
  static ModP zero_like(const ModP& c) { return {0, c.p}; }
  static ModP one_like(const ModP& c) { return {1, c.p}; }
  static ModP from_int(const ModP& c, long v) {
    const long r = v % static_cast<long>(c.p);
    return {static_cast<u64>(r < 0 ? r + static_cast<long>(c.p) : r), c.p};
  }
  static bool is_zero(const ModP& c) { return c.v == 0; }
  static ModP inverse(const ModP& c) {
    if (c.v == 0) throw DomainError("inversion of zero mod p");
    return {powmod(c.v, c.p - 2, c.p), c.p};
  }
  static Complex to_complex(const ModP& c) { return static_cast<double>(c.v); }
  static std::string format(const ModP& c) { return std::to_string(c.v) + " mod " + std::to_string(c.p); }
  static ModP parse(const std::string&) { throw DomainError("modular coefficients have no text form"); }
};

namespace {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// The images zeta -> r^k for every unit k, and the inverse Vandermonde matrix
// that recovers power-basis coordinates from those images.
struct PrimeData {
  u64 prime = 0;
  std::vector<std::vector<u64>> powers;  // powers[k][j] = (r^{unit_k})^j
  std::vector<std::vector<u64>> inverse_vandermonde;
};

std::vector<int> prime_factors(int m) {
  std::vector<int> ps;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    ps.push_back(p);
    while (m % p == 0) m /= p;
  }
  if (m > 1) ps.push_back(m);
  return ps;
}

std::vector<std::vector<u64>> invert(std::vector<std::vector<u64>> a, u64 p) {
  const std::size_t n = a.size();
  std::vector<std::vector<u64>> inv(n, std::vector<u64>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw Error("singular Vandermonde system");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const u64 s = powmod(a[col][col], p - 2, p);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = mulmod(a[col][j], s, p);
      inv[col][j] = mulmod(inv[col][j], s, p);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i][col] == 0) continue;
      const u64 f = a[i][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] = (a[i][j] + p - mulmod(f, a[col][j], p)) % p;
        inv[i][j] = (inv[i][j] + p - mulmod(f, inv[col][j], p)) % p;
      }
    }
  }
  return inv;
}

PrimeData make_prime_data(int m, u64 prime) {
  const auto factors = prime_factors(m);
  u64 root = 0;
  for (u64 g = 2;; ++g) {
    root = powmod(g, (prime - 1) / m, prime);
    bool primitive = true;
    for (int f : factors) primitive = primitive && powmod(root, m / f, prime) != 1;
    if (primitive) break;
  }
  const int phi = euler_phi(m);
  PrimeData pd{prime, {}, {}};
  for (int k = 1; k < m; ++k) {
    if (std::gcd(k, m) != 1) continue;
    const u64 x = powmod(root, k, prime);
    std::vector<u64> row(phi);
    u64 acc = 1;
    for (int j = 0; j < phi; ++j, acc = mulmod(acc, x, prime)) row[j] = acc;
    pd.powers.push_back(std::move(row));
  }
  if (m == 1) pd.powers.push_back({1});
  pd.inverse_vandermonde = invert(pd.powers, prime);
  return pd;
}

// Primes = 1 (mod m) below 2^31, largest first.
class PrimeStream {
 public:
  explicit PrimeStream(int m) : m_(m) {
    const u64 top = (1ULL << 31) - 1;
    next_ = top - (top - 1) % static_cast<u64>(m);
  }
  u64 next() {
    while (true) {
      const u64 c = next_;
      next_ -= static_cast<u64>(m_);
      if (c < 1000) throw Error("ran out of primes");
      if (is_prime(c)) return c;
    }
  }

 private:
  int m_;
  u64 next_;
};

// Image of p under zeta -> powers (one degree-one prime); nullopt when a
// denominator vanishes mod the prime.
std::optional<Poly<ModP>> image(const Poly<CycloNumber>& p, const std::vector<u64>& powers, u64 prime) {
  Poly<ModP> out(p.nvars());
  for (const auto& [mono, c] : p.terms()) {
    const auto coords = c.coeffs();
    u64 acc = 0;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (coords[j] == 0) continue;
      const u64 den = mpz_fdiv_ui(coords[j].get_den_mpz_t(), prime);
      if (den == 0) return std::nullopt;
      const u64 num = mpz_fdiv_ui(coords[j].get_num_mpz_t(), prime);
      acc = (acc + mulmod(mulmod(num, powmod(den, prime - 2, prime), prime), powers[j], prime)) % prime;
    }
    out.add_term(mono, ModP{acc, prime});
  }
  return out;
}


// Dense univariate polynomials over F_p, lowest degree first, no trailing zeros.
using UPoly = std::vector<u64>;

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 eval(const UPoly& a, u64 x, u64 p) {
  u64 r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = (mulmod(r, x, p) + *it) % p;
  return r;
}

UPoly mul(const UPoly& a, const UPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

// Quotient and remainder; b nonzero.
std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b, u64 p) {
  if (a.size() < b.size()) return {{}, a};
  const u64 inv = powmod(b.back(), p - 2, p);
  UPoly q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    const u64 c = mulmod(a[k + b.size() - 1], inv, p);
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] = (a[k + j] + p - mulmod(c, b[j], p)) % p;
  }
  trim(a);
  trim(q);
  return {q, a};
}

UPoly make_monic(UPoly a, u64 p) {
  if (a.empty()) return a;
  const u64 inv = powmod(a.back(), p - 2, p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

UPoly ugcd(UPoly a, UPoly b, u64 p) {
  while (!b.empty()) {
    UPoly r = divmod(std::move(a), b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(std::move(a), p);
}

// Bivariate polynomial: entry i is the coefficient of x^i, a polynomial in y.
using BPoly = std::vector<UPoly>;

// Whether b divides a in F_p[y][x]; b primitive in x.
bool divides(BPoly a, const BPoly& b, u64 p) {
  // Division in F_p(y)[x] is exact in F_p[y][x] when the quotient exists,
  // since b is primitive; each step divides by lc(b) in F_p[y].
  const UPoly& lc = b.back();
  while (a.size() >= b.size()) {
    if (a.back().empty()) {
      a.pop_back();
      continue;
    }
    auto [q, r] = divmod(a.back(), lc, p);
    if (!r.empty()) return false;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) {
      UPoly t = mul(q, b[j], p);
      UPoly& target = a[shift + j];
      if (target.size() < t.size()) target.resize(t.size(), 0);
      for (std::size_t k = 0; k < t.size(); ++k) target[k] = (target[k] + p - t[k]) % p;
      trim(target);
    }
    if (!a.back().empty()) return false;
    a.pop_back();
  }
  for (const auto& c : a)
    if (!c.empty()) return false;
  return true;
}

UPoly content(const BPoly& a, u64 p) {
  UPoly g;
  for (const auto& c : a) {
    g = ugcd(g, c, p);
    if (g.size() == 1) break;
  }
  return g;
}

BPoly divide_content(BPoly a, const UPoly& c, u64 p) {
  for (auto& coeff : a) coeff = divmod(coeff, c, p).first;
  return a;
}

int degree_y(const BPoly& a) {
  int d = -1;
  for (const auto& c : a) d = std::max(d, static_cast<int>(c.size()) - 1);
  return d;
}

// GCD in F_p[x, y] of two polynomials primitive in x, up to a unit, by
// evaluating y and interpolating. nullopt when the evaluation points run out.
std::optional<BPoly> brown_primitive(const BPoly& a, const BPoly& b, u64 p) {
  const UPoly gamma = ugcd(a.back(), b.back(), p);
  const int bound = static_cast<int>(gamma.size()) - 1 + std::min(degree_y(a), degree_y(b)) + 1;
  BPoly h;
  UPoly modulus{1};
  int points = 0;
  int degree = std::numeric_limits<int>::max();
  for (u64 y0 = 1; y0 < 100000; ++y0) {
    const u64 gy = eval(gamma, y0, p);
    if (gy == 0 || eval(a.back(), y0, p) == 0 || eval(b.back(), y0, p) == 0) continue;
    UPoly ax, bx;
    for (const auto& c : a) ax.push_back(eval(c, y0, p));
    for (const auto& c : b) bx.push_back(eval(c, y0, p));
    UPoly g = ugcd(ax, bx, p);
    const int dg = static_cast<int>(g.size()) - 1;
    if (dg == 0) return BPoly{UPoly{1}};
    if (dg > degree) continue;
    if (dg < degree) {
      degree = dg;
      h.assign(g.size(), UPoly{});
      modulus = UPoly{1};
      points = 0;
    }
    for (auto& c : g) c = mulmod(c, gy, p);
    // Newton step: h += modulus * (g - h(y0)) / modulus(y0).
    const u64 scale = powmod(eval(modulus, y0, p), p - 2, p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const u64 delta = mulmod((g[i] + p - eval(h[i], y0, p)) % p, scale, p);
      if (delta == 0) continue;
      UPoly add = modulus;
      for (auto& c : add) c = mulmod(c, delta, p);
      if (h[i].size() < add.size()) h[i].resize(add.size(), 0);
      for (std::size_t j = 0; j < add.size(); ++j) h[i][j] = (h[i][j] + add[j]) % p;
      trim(h[i]);
    }
    modulus = mul(modulus, UPoly{p - y0, 1}, p);
    if (++points < bound) continue;

    BPoly candidate = divide_content(h, content(h, p), p);
    if (divides(a, candidate, p) && divides(b, candidate, p)) return candidate;
    degree = std::numeric_limits<int>::max();  // every point so far was unlucky
  }
  return std::nullopt;
}

// GCD in F_p[x0, x1, x2] of homogeneous forms: strip common powers of x2,
// set x2 = 1, run the bivariate algorithm and homogenize back.
std::optional<Poly<ModP>> homogeneous_gcd3(const Poly<ModP>& a, const Poly<ModP>& b, u64 p) {
  auto valuation = [](const Poly<ModP>& f) {
    int v = std::numeric_limits<int>::max();
    for (const auto& [mono, c] : f.terms()) v = std::min<int>(v, mono.e[2]);
    return v;
  };
  auto dehomogenize = [](const Poly<ModP>& f) {
    BPoly out;
    for (const auto& [mono, c] : f.terms()) {
      if (out.size() <= mono.e[0]) out.resize(mono.e[0] + 1);
      UPoly& col = out[mono.e[0]];
      if (col.size() <= mono.e[1]) col.resize(mono.e[1] + 1, 0);
      col[mono.e[1]] = c.v;
    }
    return out;
  };
  const int va = valuation(a), vb = valuation(b);
  const BPoly da = dehomogenize(a), db = dehomogenize(b);
  const UPoly ca = content(da, p), cb = content(db, p);
  const UPoly cg = ugcd(ca, cb, p);
  const auto pg = brown_primitive(divide_content(da, ca, p), divide_content(db, cb, p), p);
  if (!pg) return std::nullopt;

  // Product of the y-content and the primitive part, homogenized.
  std::map<std::pair<int, int>, u64> dense;
  int total = 0;
  for (std::size_t i = 0; i < pg->size(); ++i) {
    const UPoly col = mul((*pg)[i], cg, p);
    for (std::size_t j = 0; j < col.size(); ++j) {
      if (col[j] == 0) continue;
      dense[{static_cast<int>(i), static_cast<int>(j)}] = col[j];
      total = std::max(total, static_cast<int>(i + j));
    }
  }
  Poly<ModP> out(3);
  const int zshift = std::min(va, vb);
  for (const auto& [ij, c] : dense) {
    Monomial mono{};
    mono.e[0] = static_cast<std::uint16_t>(ij.first);
    mono.e[1] = static_cast<std::uint16_t>(ij.second);
    mono.e[2] = static_cast<std::uint16_t>(total - ij.first - ij.second + zshift);
    out.add_term(mono, ModP{c, p});
  }
  return out.monic();
}

Poly<ModP> gcd_mod(const Poly<ModP>& a, const Poly<ModP>& b, u64 p) {
  if (a.nvars() == 3 && a.is_homogeneous() && b.is_homogeneous() && !a.is_zero() && !b.is_zero()) {
    if (auto g = homogeneous_gcd3(a, b, p)) return *g;
  }
  return detail::gcd_recursive(a, b, a.nvars() - 1);
}

std::optional<Rational> rational_reconstruct(const Integer& a, const Integer& modulus) {
  // Extended Euclid on (modulus, a) stopped at the half-size bound.
  Integer bound = sqrt(Integer(modulus / 2));
  Integer r0 = modulus, r1 = a, t0 = 0, t1 = 1;
  while (r1 > bound) {
    const Integer q = r0 / r1;
    Integer r2 = r0 - q * r1, t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  if (gcd(r1, t1) != 1) return std::nullopt;
  Rational r(r1, t1);
  r.canonicalize();
  return r;
}

// CRT accumulator for every power-basis coordinate of every monomial.
struct Accumulator {
  std::vector<Monomial> support;
  std::vector<std::vector<Integer>> residues;  // [monomial][coordinate]
  Integer modulus = 1;
};

// Sign of the grlex comparison of the leading monomials.
int compare_shape(const std::vector<Monomial>& a, const std::vector<Monomial>& b) {
  if (a.empty() || b.empty()) return 0;
  const GrlexGreater gt;
  if (gt(a.front(), b.front())) return 1;
  if (gt(b.front(), a.front())) return -1;
  return 0;
}

}  // namespace

std::optional<Poly<CycloNumber>> modular_gcd(std::span<const Poly<CycloNumber>> ps, int max_primes) {
  std::vector<const Poly<CycloNumber>*> inputs;
  for (const auto& p : ps)
    if (!p.is_zero()) inputs.push_back(&p);
  if (inputs.empty()) throw DomainError("gcd of zero polynomials");
  const int nv = inputs[0]->nvars();
  const int m = inputs[0]->sample_coeff().conductor();
  const int phi = euler_phi(m);
  const auto one = Poly<CycloNumber>::constant(nv, CycloNumber(m, 1L));
  if (inputs.size() == 1) return inputs[0]->monic();
  for (const auto* p : inputs)
    if (p->is_constant()) return one;

  PrimeStream primes(m);
  std::optional<Accumulator> acc;
  int best_degree = std::numeric_limits<int>::max();
  std::optional<Poly<CycloNumber>> last_candidate;

  for (int used = 0; used < max_primes; ++used) {
    const u64 prime = primes.next();
    const PrimeData pd = make_prime_data(m, prime);

    // GCD in each of the phi residue fields above this prime.
    std::vector<Poly<ModP>> images;
    bool usable = true;
    for (const auto& pw : pd.powers) {
      std::optional<Poly<ModP>> g;
      for (const auto* p : inputs) {
        auto im = image(*p, pw, prime);
        if (!im) {
          usable = false;
          break;
        }
        g = g ? gcd_mod(*g, *im, prime) : im->monic();
        if (g->is_constant() && !g->is_zero()) break;
      }
      if (!usable || !g || g->is_zero()) {
        usable = false;
        break;
      }
      images.push_back(std::move(*g));
    }
    if (!usable) continue;

    const int degree = images[0].total_degree();
    std::vector<Monomial> support;
    for (const auto& [mono, c] : images[0].terms()) support.push_back(mono);
    bool consistent = true;
    for (const auto& g : images) {
      if (g.total_degree() != degree || g.size() != support.size()) consistent = false;
      std::size_t i = 0;
      for (const auto& [mono, c] : g.terms())
        if (consistent && mono != support[i++]) consistent = false;
    }
    if (!consistent) continue;  // unlucky prime
    if (degree == 0) return one;
    if (degree > best_degree) continue;
    if (degree < best_degree) {
      best_degree = degree;
      acc.reset();
      last_candidate.reset();
    } else if (acc && support != acc->support) {
      // A smaller leading monomial or support means coefficients of the true
      // GCD vanish at this prime.
      const int shape = compare_shape(support, acc->support);
      if (shape < 0 || (shape == 0 && support.size() <= acc->support.size())) continue;
      acc.reset();
      last_candidate.reset();
    }

    // Power-basis coordinates mod prime for every monomial.
    std::vector<std::vector<u64>> coords(support.size(), std::vector<u64>(phi, 0));
    for (std::size_t s = 0; s < support.size(); ++s) {
      std::vector<u64> values;
      for (const auto& g : images) values.push_back(g.terms().at(support[s]).v);
      for (int j = 0; j < phi; ++j) {
        u64 sum = 0;
        for (int k = 0; k < phi; ++k) sum = (sum + mulmod(pd.inverse_vandermonde[j][k], values[k], prime)) % prime;
        coords[s][j] = sum;
      }
    }
    if (!acc) {
      acc = Accumulator{support, std::vector<std::vector<Integer>>(support.size(), std::vector<Integer>(phi)), 1};
      for (std::size_t s = 0; s < support.size(); ++s)
        for (int j = 0; j < phi; ++j) acc->residues[s][j] = Integer(static_cast<unsigned long>(coords[s][j]));
      acc->modulus = Integer(static_cast<unsigned long>(prime));
    } else {
      const Integer pz(static_cast<unsigned long>(prime));
      Integer inv_mod;
      mpz_invert(inv_mod.get_mpz_t(), Integer(acc->modulus % pz).get_mpz_t(), pz.get_mpz_t());
      for (std::size_t s = 0; s < support.size(); ++s)
        for (int j = 0; j < phi; ++j) {
          Integer& r = acc->residues[s][j];
          Integer delta = (Integer(static_cast<unsigned long>(coords[s][j])) - r) % pz;
          if (delta < 0) delta += pz;
          delta = (delta * inv_mod) % pz;
          r += acc->modulus * delta;
        }
      acc->modulus *= pz;
    }

    // Reconstruct; test by exact division once two consecutive primes agree.
    Poly<CycloNumber> candidate(nv);
    bool ok = true;
    for (std::size_t s = 0; s < support.size() && ok; ++s) {
      std::vector<Rational> cs;
      for (int j = 0; j < phi && ok; ++j) {
        auto r = rational_reconstruct(acc->residues[s][j], acc->modulus);
        if (!r) ok = false;
        else cs.push_back(*r);
      }
      if (ok) candidate.add_term(support[s], CycloNumber(m, cs));
    }
    if (!ok) continue;
    if (last_candidate && *last_candidate == candidate) {
      bool divides = true;
      for (const auto* p : inputs) {
        if (!try_divide_exact(*p, candidate)) {
          divides = false;
          break;
        }
      }
      if (divides) return candidate;
    }
    last_candidate = std::move(candidate);
  }
  return std::nullopt;
}

}  // namespace dynstab
