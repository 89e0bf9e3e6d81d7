#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynstab/rational.hpp"

namespace dynstab {

using Complex = std::complex<double>;

inline constexpr int kDefaultConductorCap = 64;

// Dense integer polynomial, coefficients low degree first.
struct IntPoly {
  std::vector<Integer> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  std::string to_string(const std::string& var = "x") const;
  friend bool operator==(const IntPoly&, const IntPoly&) = default;
};

// The m-th cyclotomic polynomial. Throws CapExceeded when m > cap.
IntPoly cyclotomic_polynomial(int m, int cap = kDefaultConductorCap);

int euler_phi(int m);

// Immutable per-conductor data shared by every CycloNumber of that conductor.
struct CycloField {
  int m = 1;
  int phi = 1;
  IntPoly modulus;               // Phi_m, monic
  std::vector<Complex> powers;   // zeta_m^j for j < phi
};

// Lookup is thread safe; fields are created lazily and never destroyed.
const CycloField& cyclo_field(int m, int cap = kDefaultConductorCap);

// Ring map Z_(l)[zeta_m] -> F_l sending zeta_m to a primitive m-th root of
// unity mod a prime l = 1 (mod m), l < 2^31.
struct PrimeEmbedding {
  std::uint64_t prime = 0;
  std::vector<std::uint64_t> powers;  // image of zeta_m^j for j < phi
};

const PrimeEmbedding& prime_embedding(int m);

// Element of Q(zeta_m) = Q[x]/Phi_m, stored as integer numerators over a common
// positive denominator, reduced so that gcd(den, nums...) = 1.
class CycloNumber {
 public:
  // Zero of Q(zeta_1) = Q.
  CycloNumber();
  CycloNumber(int m, const Rational& value);
  CycloNumber(int m, long value) : CycloNumber(m, Rational(value)) {}
  // Element from rational coordinates in the power basis 1, zeta, ..., zeta^(phi-1).
  CycloNumber(int m, const std::vector<Rational>& coords);

  // zeta_m^k for any integer k.
  static CycloNumber root_of_unity(int m, long k);

  int conductor() const { return field_->m; }
  const CycloField& field() const { return *field_; }
  std::vector<Rational> coeffs() const;
  bool is_zero() const;
  bool is_one() const;
  Complex embed() const;
  // Image in F_l; nullopt when l divides the denominator.
  std::optional<std::uint64_t> reduce(const PrimeEmbedding& pe) const;

  CycloNumber operator-() const;
  CycloNumber& operator+=(const CycloNumber& o);
  CycloNumber& operator-=(const CycloNumber& o);
  CycloNumber& operator*=(const CycloNumber& o);
  friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
  friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
  friend CycloNumber operator*(CycloNumber a, const CycloNumber& b) { return a *= b; }
  friend bool operator==(const CycloNumber& a, const CycloNumber& b);

  CycloNumber inverse() const;
  CycloNumber pow(long e) const;

  // Same element viewed in Q(zeta_target), target a multiple of conductor().
  CycloNumber lift_to(int target) const;

  // "[m; c0, c1, ...]" with each ci as "p/q".
  std::string to_string() const;
  static CycloNumber parse(const std::string& text);

 private:
  void require_same_field(const CycloNumber& o, const char* op) const;
  void normalize();

  const CycloField* field_;
  std::vector<Integer> num_;
  Integer den_;
};

CycloNumber cyclo_add(const CycloNumber& u, const CycloNumber& v);
CycloNumber cyclo_mul(const CycloNumber& u, const CycloNumber& v);
CycloNumber cyclo_inv(const CycloNumber& u);

}  // namespace dynstab
