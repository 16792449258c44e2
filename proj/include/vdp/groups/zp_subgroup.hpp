#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "vdp/bytes.hpp"
#include "vdp/hash.hpp"

namespace vdp {

/// Prime-order subgroup of Z_P* with |subgroup| = Q and Q | P-1.
///
/// Small enough for exhaustive oracles and statistical tests, which is its
/// whole purpose. Arithmetic is variable-time; this backend is not for
/// production use (see README deployment caveats).
template <uint64_t P, uint64_t Q, unsigned SecurityBits>
struct ZpSubgroup {
  static_assert(P < (1ULL << 62), "modulus must leave headroom for add");
  static_assert((P - 1) % Q == 0, "Q must divide P-1");

  static constexpr uint64_t kP = P;
  static constexpr uint64_t kQ = Q;
  static constexpr uint64_t kCofactor = (P - 1) / Q;
  static constexpr unsigned kSecurityBits = SecurityBits;
  static constexpr size_t kScalarBytes = 8;
  static constexpr size_t kElementBytes = 8;
  static constexpr bool kOrderFitsU64 = true;
  static constexpr uint64_t kOrderU64 = Q;
  static constexpr bool kFastInverse = false;

  static std::string id() { return "toy-zp" + std::to_string(64 - std::countl_zero(P)); }

  struct Scalar {
    uint64_t v = 0;
    friend bool operator==(const Scalar&, const Scalar&) = default;
  };

  struct Element {
    uint64_t v = 1;
    friend bool operator==(const Element&, const Element&) = default;
  };

  // ---- modular arithmetic on the field Z_P and exponent field Z_Q ----

  /// Reduction of a*b mod a compile-time modulus. Moduli sitting just below
  /// a power of two (2^w - M small) get a two-step fold on the identity
  /// 2^w = delta (mod M) followed by one conditional subtract; everything
  /// else takes the 128-bit division.
  template <uint64_t M>
  static uint64_t mulmod_c(uint64_t a, uint64_t b) {
    constexpr unsigned w = 64 - static_cast<unsigned>(std::countl_zero(M));
    constexpr uint64_t delta = (w == 64) ? 0 : ((1ULL << w) - M);
    constexpr unsigned dbits =
        64 - static_cast<unsigned>(std::countl_zero(delta | 1));
    if constexpr (delta > 0 && 2 * dbits + 1 < w) {
      constexpr uint64_t mask = (1ULL << w) - 1;
      const __uint128_t x = static_cast<__uint128_t>(a) * b;
      const __uint128_t r1 = static_cast<__uint128_t>(static_cast<uint64_t>(x >> w)) * delta +
                             static_cast<uint64_t>(x & mask);
      uint64_t r2 = static_cast<uint64_t>(r1 >> w) * delta + (static_cast<uint64_t>(r1) & mask);
      if (r2 >= M) r2 -= M;
      return r2;
    } else {
      return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % M);
    }
  }

  static uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    if (m == P) return mulmod_c<P>(a, b);
    if (m == Q) return mulmod_c<Q>(a, b);
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % m);
  }

  static uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t acc = 1 % m;
    base %= m;
    while (exp > 0) {
      if (exp & 1) acc = mulmod(acc, base, m);
      base = mulmod(base, base, m);
      exp >>= 1;
    }
    return acc;
  }

  static uint64_t invmod(uint64_t a, uint64_t m) {
    // extended gcd; m prime and a nonzero mod m
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(m), new_r = static_cast<int64_t>(a % m);
    while (new_r != 0) {
      int64_t qt = r / new_r;
      int64_t tmp = t - qt * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - qt * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
  }

  // ---- scalars (exponents mod Q) ----

  static Scalar scalar_zero() { return {0}; }
  static Scalar scalar_one() { return {1}; }
  static Scalar scalar_from_u64(uint64_t v) { return {v % Q}; }

  static Scalar scalar_add(Scalar a, Scalar b) {
    uint64_t s = a.v + b.v;
    if (s >= Q) s -= Q;
    return {s};
  }

  static Scalar scalar_sub(Scalar a, Scalar b) {
    return {a.v >= b.v ? a.v - b.v : a.v + Q - b.v};
  }

  static Scalar scalar_mul(Scalar a, Scalar b) { return {mulmod(a.v, b.v, Q)}; }
  static Scalar scalar_neg(Scalar a) { return {a.v == 0 ? 0 : Q - a.v}; }
  static Scalar scalar_invert(Scalar a) { return {invmod(a.v, Q)}; }

  static Scalar scalar_reduce_wide(const std::array<uint8_t, 64>& wide) {
    // big-endian fold of the little-endian byte string, mod Q
    uint64_t r = 0;
    for (int i = 63; i >= 0; i--) {
      r = (static_cast<__uint128_t>(r) * 256 + wide[static_cast<size_t>(i)]) % Q;
    }
    return {r};
  }

  static std::array<uint8_t, kScalarBytes> scalar_encode(Scalar s) {
    std::array<uint8_t, 8> out{};
    for (int i = 0; i < 8; i++) out[static_cast<size_t>(i)] = static_cast<uint8_t>(s.v >> (8 * i));
    return out;
  }

  static std::optional<Scalar> scalar_decode(BytesView b) {
    if (b.size() != kScalarBytes) return std::nullopt;
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(b[static_cast<size_t>(i)]) << (8 * i);
    if (v >= Q) return std::nullopt;
    return Scalar{v};
  }

  static std::optional<uint64_t> scalar_to_u64(Scalar s) { return s.v; }

  /// a <= b as integers in [0, Q).
  static bool scalar_leq(Scalar a, Scalar b) { return a.v <= b.v; }

  /// ceil(Q/2); Q is odd so this is (Q+1)/2.
  static Scalar scalar_half_ceil() { return {(Q + 1) / 2}; }

  // ---- group elements ----

  static Element identity() { return {1}; }

  static Element generator() {
    static const Element g = [] {
      for (uint64_t a = 2;; a++) {
        uint64_t cand = powmod(a, kCofactor, P);
        if (cand != 1) return Element{cand};
      }
    }();
    return g;
  }

  static Element op(Element a, Element b) { return {mulmod(a.v, b.v, P)}; }
  static Element inverse(Element a) { return {invmod(a.v, P)}; }

  static Element pow(Element base, Scalar e) { return {powmod(base.v, e.v, P)}; }

  static Element from_hash(const std::array<uint8_t, 64>& h) {
    std::array<uint8_t, 64> cur = h;
    for (;;) {
      for (size_t off = 0; off + 8 <= cur.size(); off += 8) {
        uint64_t x = 0;
        for (size_t i = 0; i < 8; i++) x |= static_cast<uint64_t>(cur[off + i]) << (8 * i);
        uint64_t v = x % P;
        if (v == 0) continue;
        uint64_t e = powmod(v, kCofactor, P);
        if (e != 1) return Element{e};
      }
      cur = sha512(cur);
    }
  }

  static std::array<uint8_t, kElementBytes> element_encode(Element e) {
    std::array<uint8_t, 8> out{};
    for (int i = 0; i < 8; i++) out[static_cast<size_t>(i)] = static_cast<uint8_t>(e.v >> (8 * i));
    return out;
  }

  static std::optional<Element> element_decode(BytesView b) {
    if (b.size() != kElementBytes) return std::nullopt;
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(b[static_cast<size_t>(i)]) << (8 * i);
    if (v == 0 || v >= P) return std::nullopt;
    if (powmod(v, Q, P) != 1) return std::nullopt;  // subgroup membership
    return Element{v};
  }
};

// p = 2q+1 safe primes; the 61-bit one mirrors the finite-field benchmark
// configuration, the 16-bit one is for exhaustive and distributional tests.
using Zp61 = ZpSubgroup<2305843009213691579ULL, 1152921504606845789ULL, 30>;
using Zp16 = ZpSubgroup<65267, 32633, 8>;
// q = 101 with cofactor 6, for tiny enumeration oracles.
using Zp101 = ZpSubgroup<607, 101, 4>;

}  // namespace vdp
