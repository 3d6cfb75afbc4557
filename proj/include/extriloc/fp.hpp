#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>

namespace extriloc {

// Arithmetic in the prime field F_p.  Elements are canonical ints in [0, p).
// p is carried by value; all desk-scale computations here use p in {2,3,5,7}.
struct Fp {
  int p;

  explicit Fp(int prime) : p(prime) {
    if (p < 2) throw std::invalid_argument("Fp: modulus must be >= 2");
  }

  int norm(long long x) const {
    long long r = x % p;
    if (r < 0) r += p;
    return static_cast<int>(r);
  }

  int add(int a, int b) const { return norm(static_cast<long long>(a) + b); }
  int sub(int a, int b) const { return norm(static_cast<long long>(a) - b); }
  int mul(int a, int b) const { return norm(static_cast<long long>(a) * b); }
  int neg(int a) const { return norm(-static_cast<long long>(a)); }

  int pow(int a, long long e) const {
    a = norm(a);
    long long base = a, acc = 1;
    while (e > 0) {
      if (e & 1) acc = acc * base % p;
      base = base * base % p;
      e >>= 1;
    }
    return static_cast<int>(acc);
  }

  // Fermat inverse; p is prime throughout this library.
  int inv(int a) const {
    a = norm(a);
    if (a == 0) throw std::domain_error("Fp::inv of zero");
    return pow(a, p - 2);
  }

  int div(int a, int b) const { return mul(a, inv(b)); }

  bool operator==(const Fp& o) const { return p == o.p; }
};

}  // namespace extriloc
