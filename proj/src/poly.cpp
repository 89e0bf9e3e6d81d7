#include "dynstab/poly.hpp"

#include <cstdio>
#include <optional>

namespace dynstab {

std::string CoeffTraits<Complex>::format(const Complex& c) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g)", c.real(), c.imag());
  return buf;
}

Complex CoeffTraits<Complex>::parse(const std::string& s) {
  double re = 0, im = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "(%lf,%lf%c", &re, &im, &tail) != 3 || tail != ')')
    throw DomainError("malformed complex literal '" + s + "'");
  return {re, im};
}

namespace {

// Splits "coeff * x0^a x1^b ..." and reads the exponents.
template <class K>
void parse_term(const std::string& term, Poly<K>& acc, int& nvars_seen) {
  const auto star = term.rfind(" *");
  if (star == std::string::npos) throw DomainError("term without '*': '" + term + "'");
  const K c = CoeffTraits<K>::parse(term.substr(0, star));
  Monomial m;
  int nv = 0;
  std::size_t pos = star + 2;
  while (pos < term.size()) {
    if (term[pos] == ' ') {
      ++pos;
      continue;
    }
    int var = -1, e = -1, used = 0;
    if (std::sscanf(term.c_str() + pos, "x%d^%d%n", &var, &e, &used) != 2 || var != nv || e < 0)
      throw DomainError("malformed monomial in '" + term + "'");
    if (nv >= kMaxVars) throw DomainError("too many variables in '" + term + "'");
    m.e[nv++] = static_cast<std::uint16_t>(e);
    pos += static_cast<std::size_t>(used);
  }
  if (nvars_seen == 0) {
    nvars_seen = nv;
    acc = Poly<K>(nv);
  } else if (nv != nvars_seen) {
    throw DomainError("inconsistent variable count in polynomial text");
  }
  acc.add_term(m, c);
}

}  // namespace

template <class K>
Poly<K> parse_poly(const std::string& text, int nvars) {
  if (text == "0") return Poly<K>(nvars);
  Poly<K> acc(nvars);
  int nvars_seen = 0;
  std::size_t start = 0;
  while (true) {
    const auto sep = text.find(" + ", start);
    parse_term(text.substr(start, sep == std::string::npos ? std::string::npos : sep - start), acc, nvars_seen);
    if (sep == std::string::npos) break;
    start = sep + 3;
  }
  return acc;
}

namespace detail {

namespace {

using u64 = std::uint64_t;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); }

u64 invmod(u64 a, u64 p) {
  u64 r = 1, e = p - 2;
  for (; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

u64 to_residue(long v, u64 p) {
  const long r = v % static_cast<long>(p);
  return static_cast<u64>(r < 0 ? r + static_cast<long>(p) : r);
}

using Dense = std::vector<u64>;

void trim(Dense& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Dense convolve(const Dense& a, const Dense& b, u64 p) {
  Dense r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  return r;
}

// Remainder of a modulo nonzero trimmed b.
Dense remainder(Dense a, const Dense& b, u64 p) {
  const u64 inv = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    const u64 f = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mulmod(f, b[j], p)) % p;
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace

int binary_form_gcd_degree(const std::vector<std::vector<std::uint64_t>>& forms, std::uint64_t prime) {
  int min_v_order = -1;
  std::optional<Dense> g;
  for (const auto& form : forms) {
    Dense f = form;
    const int total = static_cast<int>(f.size()) - 1;
    trim(f);
    if (f.empty()) continue;
    // v^(total - deg_u f) divides the form; dehomogenize at v = 1.
    const int v_order = total - (static_cast<int>(f.size()) - 1);
    min_v_order = min_v_order < 0 ? v_order : std::min(min_v_order, v_order);
    if (!g) {
      g = std::move(f);
      continue;
    }
    Dense a = std::move(*g), b = std::move(f);
    while (!b.empty()) {
      Dense r = remainder(std::move(a), b, prime);
      a = std::move(b);
      b = std::move(r);
    }
    g = std::move(a);
  }
  if (!g) return -1;
  return min_v_order + static_cast<int>(g->size()) - 1;
}

std::optional<std::vector<std::uint64_t>> restrict_mod_prime(const Poly<CycloNumber>& p) {
  const PrimeEmbedding& pe = prime_embedding(p.sample_coeff().conductor());
  const u64 prime = pe.prime;
  const int deg = p.total_degree();
  // powers[i][k]: (A_i u + B_i v)^k as a dense binary form of degree k.
  std::vector<std::vector<Dense>> powers(p.nvars());
  for (int i = 0; i < p.nvars(); ++i) {
    const Dense lin{to_residue(kCertificateLine[1][i], prime), to_residue(kCertificateLine[0][i], prime)};
    powers[i].push_back(Dense{1});
    for (int k = 1; k <= deg; ++k) powers[i].push_back(convolve(powers[i].back(), lin, prime));
  }
  Dense out(deg + 1, 0);
  for (const auto& [m, c] : p.terms()) {
    const auto cr = c.reduce(pe);
    if (!cr) return std::nullopt;
    if (*cr == 0) continue;
    Dense term{*cr};
    for (int i = 0; i < p.nvars(); ++i)
      if (m.e[i]) term = convolve(term, powers[i][m.e[i]], prime);
    for (int k = 0; k <= deg; ++k) out[k] = (out[k] + term[k]) % prime;
  }
  return out;
}

}  // namespace detail

template Poly<CycloNumber> parse_poly<CycloNumber>(const std::string&, int);
template Poly<Complex> parse_poly<Complex>(const std::string&, int);

}  // namespace dynstab
