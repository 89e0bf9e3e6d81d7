#include "dynstab/cyclo.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dynstab/error.hpp"

namespace dynstab {

namespace {

// Exact quotient of a by a monic divisor; both low-degree-first.
std::vector<Integer> divide_monic(std::vector<Integer> a, const std::vector<Integer>& b) {
  const int db = static_cast<int>(b.size()) - 1;
  const int da = static_cast<int>(a.size()) - 1;
  std::vector<Integer> q(da - db + 1);
  for (int i = da; i >= db; --i) {
    const Integer c = a[i];
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  for (int i = 0; i < db; ++i)
    if (a[i] != 0) throw Error("cyclotomic construction: inexact division");
  return q;
}

std::vector<Integer> cyclotomic_coeffs(int m) {
  static std::mutex mu;
  static std::map<int, std::vector<Integer>> memo;
  {
    std::lock_guard lock(mu);
    if (auto it = memo.find(m); it != memo.end()) return it->second;
  }
  std::vector<Integer> p(m + 1);
  p[0] = -1;
  p[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) p = divide_monic(std::move(p), cyclotomic_coeffs(d));
  std::lock_guard lock(mu);
  memo.emplace(m, p);
  return p;
}

using RatVec = std::vector<Rational>;

void trim(RatVec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

// (quotient, remainder) of a / b over Q, b nonzero and trimmed.
std::pair<RatVec, RatVec> rat_divmod(RatVec a, const RatVec& b) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  if (static_cast<int>(a.size()) - 1 < db) return {{}, a};
  RatVec q(a.size() - b.size() + 1);
  const Rational lead_inv = 1 / b.back();
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    Rational c = a[i] * lead_inv;
    q[i - db] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  a.resize(db);
  trim(a);
  return {q, a};
}

RatVec rat_mul(const RatVec& a, const RatVec& b) {
  if (a.empty() || b.empty()) return {};
  RatVec r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

RatVec rat_sub(RatVec a, const RatVec& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

}  // namespace

std::string IntPoly::to_string(const std::string& var) const {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Integer& c = coeffs[i];
    if (c == 0) continue;
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mag != 1 || i == 0) os << mag.get_str();
    if (i > 0) {
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

int euler_phi(int m) {
  int result = m;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

IntPoly cyclotomic_polynomial(int m, int cap) {
  if (m < 1) throw DomainError("conductor must be positive");
  if (m > cap) throw CapExceeded("conductor too large", m, cap);
  return IntPoly{cyclotomic_coeffs(m)};
}

const CycloField& cyclo_field(int m, int cap) {
  if (m < 1) throw DomainError("conductor must be positive");
  if (m > cap) throw CapExceeded("conductor too large", m, cap);
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloField>> fields;
  std::lock_guard lock(mu);
  auto& slot = fields[m];
  if (!slot) {
    auto f = std::make_unique<CycloField>();
    f->m = m;
    f->modulus = IntPoly{cyclotomic_coeffs(m)};
    f->phi = f->modulus.degree();
    for (int j = 0; j < f->phi; ++j)
      f->powers.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / m));
    slot = std::move(f);
  }
  return *slot;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  for (a %= p; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

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

PrimeEmbedding make_prime_embedding(int m) {
  const std::uint64_t top = (1ULL << 31) - 1;
  std::uint64_t prime = top - (top - 1) % m;  // = 1 mod m
  while (!is_prime(prime)) prime -= m;
  const auto factors = prime_factors(m);
  std::uint64_t root = 0;
  for (std::uint64_t g = 2;; ++g) {
    root = powmod(g, (prime - 1) / m, prime);
    bool primitive = true;
    for (int f : factors) primitive = primitive && powmod(root, m / f, prime) != 1;
    if (primitive) break;
  }
  PrimeEmbedding pe{prime, {}};
  std::uint64_t acc = 1;
  for (int j = 0; j < euler_phi(m); ++j, acc = mulmod(acc, root, prime)) pe.powers.push_back(acc);
  return pe;
}

}  // namespace

const PrimeEmbedding& prime_embedding(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PrimeEmbedding>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<PrimeEmbedding>(make_prime_embedding(m));
  return *slot;
}

std::optional<std::uint64_t> CycloNumber::reduce(const PrimeEmbedding& pe) const {
  const std::uint64_t p = pe.prime;
  const std::uint64_t den = mpz_fdiv_ui(den_.get_mpz_t(), p);
  if (den == 0) return std::nullopt;
  std::uint64_t acc = 0;
  for (std::size_t j = 0; j < num_.size(); ++j) {
    if (num_[j] == 0) continue;
    acc = (acc + mulmod(mpz_fdiv_ui(num_[j].get_mpz_t(), p), pe.powers[j], p)) % p;
  }
  return mulmod(acc, powmod(den, p - 2, p), p);
}

CycloNumber::CycloNumber() : field_(&cyclo_field(1)), num_(1), den_(1) {}

CycloNumber::CycloNumber(int m, const Rational& value)
    : field_(&cyclo_field(m, m)), num_(field_->phi), den_(value.get_den()) {
  num_[0] = value.get_num();
}

CycloNumber::CycloNumber(int m, const std::vector<Rational>& coords)
    : field_(&cyclo_field(m, m)), num_(field_->phi), den_(1) {
  if (static_cast<int>(coords.size()) > field_->phi) {
    // Longer vectors are interpreted as polynomials in zeta and reduced.
    num_.assign(coords.size(), Integer(0));
  }
  for (const auto& c : coords) den_ = lcm(den_, Integer(c.get_den()));
  for (std::size_t j = 0; j < coords.size(); ++j)
    num_[j] = coords[j].get_num() * (den_ / coords[j].get_den());
  normalize();
}

CycloNumber CycloNumber::root_of_unity(int m, long k) {
  long e = ((k % m) + m) % m;
  std::vector<Rational> coords(e + 1);
  coords[e] = 1;
  return CycloNumber(m, coords);
}

void CycloNumber::normalize() {
  const auto& mod = field_->modulus.coeffs;
  const int phi = field_->phi;
  for (int i = static_cast<int>(num_.size()) - 1; i >= phi; --i) {
    if (num_[i] == 0) continue;
    const Integer c = num_[i];
    for (int j = 0; j < phi; ++j) num_[i - phi + j] -= c * mod[j];
  }
  num_.resize(phi);
  if (den_ < 0) {
    den_ = -den_;
    for (auto& c : num_) c = -c;
  }
  Integer g = den_;
  for (const auto& c : num_) {
    if (g == 1) break;
    if (c != 0) g = gcd(g, c);
  }
  bool all_zero = true;
  for (const auto& c : num_) all_zero = all_zero && c == 0;
  if (all_zero) {
    den_ = 1;
    return;
  }
  if (g != 1) {
    den_ /= g;
    for (auto& c : num_) c /= g;
  }
}

void CycloNumber::require_same_field(const CycloNumber& o, const char* op) const {
  if (field_ != o.field_)
    throw DomainError(std::string("conductor mismatch in ") + op + ": " + std::to_string(field_->m) +
                      " vs " + std::to_string(o.field_->m));
}

std::vector<Rational> CycloNumber::coeffs() const {
  std::vector<Rational> out;
  out.reserve(num_.size());
  for (const auto& c : num_) {
    Rational r(c, den_);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

bool CycloNumber::is_zero() const {
  for (const auto& c : num_)
    if (c != 0) return false;
  return true;
}

bool CycloNumber::is_one() const {
  if (den_ != 1 || num_[0] != 1) return false;
  for (std::size_t j = 1; j < num_.size(); ++j)
    if (num_[j] != 0) return false;
  return true;
}

Complex CycloNumber::embed() const {
  Complex acc = 0;
  for (std::size_t j = 0; j < num_.size(); ++j)
    if (num_[j] != 0) acc += Rational(num_[j], den_).get_d() * field_->powers[j];
  return acc;
}

CycloNumber CycloNumber::operator-() const {
  CycloNumber r = *this;
  for (auto& c : r.num_) c = -c;
  return r;
}

CycloNumber& CycloNumber::operator+=(const CycloNumber& o) {
  require_same_field(o, "add");
  if (den_ == o.den_) {
    for (std::size_t j = 0; j < num_.size(); ++j) num_[j] += o.num_[j];
  } else {
    for (std::size_t j = 0; j < num_.size(); ++j) {
      num_[j] *= o.den_;
      num_[j] += o.num_[j] * den_;
    }
    den_ *= o.den_;
  }
  normalize();
  return *this;
}

CycloNumber& CycloNumber::operator-=(const CycloNumber& o) { return *this += -o; }

CycloNumber& CycloNumber::operator*=(const CycloNumber& o) {
  require_same_field(o, "mul");
  const int phi = field_->phi;
  std::vector<Integer> prod(2 * phi - 1);
  for (int i = 0; i < phi; ++i) {
    if (num_[i] == 0) continue;
    for (int j = 0; j < phi; ++j)
      if (o.num_[j] != 0) prod[i + j] += num_[i] * o.num_[j];
  }
  num_ = std::move(prod);
  den_ *= o.den_;
  normalize();
  return *this;
}

bool operator==(const CycloNumber& a, const CycloNumber& b) {
  if (a.field_ != b.field_) {
    const int l = std::lcm(a.conductor(), b.conductor());
    return a.lift_to(l) == b.lift_to(l);
  }
  return a.den_ == b.den_ && a.num_ == b.num_;
}

CycloNumber CycloNumber::inverse() const {
  if (is_zero()) throw DomainError("inversion of zero in Q(zeta_" + std::to_string(conductor()) + ")");
  // Extended Euclid: track s with s*u = r (mod Phi_m).
  RatVec r0, r1 = coeffs(), s0, s1{Rational(1)};
  for (const auto& c : field_->modulus.coeffs) r0.push_back(Rational(c));
  trim(r1);
  while (r1.size() > 1) {
    auto [q, rem] = rat_divmod(r0, r1);
    RatVec s2 = rat_sub(s0, rat_mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant since Phi_m is irreducible.
  const Rational scale = 1 / r1[0];
  for (auto& c : s1) c *= scale;
  return CycloNumber(conductor(), s1);
}

CycloNumber CycloNumber::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  CycloNumber result(conductor(), 1L), base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

CycloNumber CycloNumber::lift_to(int target) const {
  if (target % conductor() != 0)
    throw DomainError("cannot embed Q(zeta_" + std::to_string(conductor()) + ") into Q(zeta_" +
                      std::to_string(target) + ")");
  const int step = target / conductor();
  std::vector<Rational> coords(static_cast<std::size_t>(step) * (num_.size() - 1) + 1);
  for (std::size_t j = 0; j < num_.size(); ++j) {
    Rational r(num_[j], den_);
    r.canonicalize();
    coords[j * step] = r;
  }
  return CycloNumber(target, coords);
}

std::string CycloNumber::to_string() const {
  std::string s = "[" + std::to_string(conductor()) + ";";
  const auto cs = coeffs();
  for (std::size_t j = 0; j < cs.size(); ++j) s += (j ? ", " : " ") + dynstab::to_string(cs[j]);
  return s + "]";
}

CycloNumber CycloNumber::parse(const std::string& text) {
  if (text.size() < 4 || text.front() != '[' || text.back() != ']')
    throw DomainError("malformed cyclotomic literal '" + text + "'");
  const auto semi = text.find(';');
  if (semi == std::string::npos) throw DomainError("missing ';' in '" + text + "'");
  int m = 0;
  try {
    m = std::stoi(text.substr(1, semi - 1));
  } catch (const std::exception&) {
    throw DomainError("bad conductor in '" + text + "'");
  }
  std::vector<Rational> coords;
  std::string body = text.substr(semi + 1, text.size() - semi - 2);
  std::stringstream ss(body);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b == std::string::npos) throw DomainError("empty coefficient in '" + text + "'");
    coords.push_back(parse_rational(item.substr(b, e - b + 1)));
  }
  const auto& f = cyclo_field(m, m);
  if (static_cast<int>(coords.size()) != f.phi)
    throw DomainError("expected " + std::to_string(f.phi) + " coefficients in '" + text + "'");
  return CycloNumber(m, coords);
}

CycloNumber cyclo_add(const CycloNumber& u, const CycloNumber& v) { return u + v; }
CycloNumber cyclo_mul(const CycloNumber& u, const CycloNumber& v) { return u * v; }
CycloNumber cyclo_inv(const CycloNumber& u) { return u.inverse(); }

}  // namespace dynstab
