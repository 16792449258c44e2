#pragma once

#include <sodium.h>

#include <array>
#include <cstring>
#include <optional>
#include <string>

#include "vdp/bytes.hpp"
#include "vdp/hash.hpp"

namespace vdp {

/// The prime-order Ristretto group over Curve25519, backed by libsodium.
/// Elements and scalars are stored in their canonical 32-byte encodings;
/// libsodium validates canonicity on every decode.
struct Ristretto255 {
  static constexpr unsigned kSecurityBits = 128;
  static constexpr size_t kScalarBytes = crypto_core_ristretto255_SCALARBYTES;
  static constexpr size_t kElementBytes = crypto_core_ristretto255_BYTES;
  static constexpr bool kOrderFitsU64 = false;
  static constexpr uint64_t kOrderU64 = 0;
  static constexpr bool kFastInverse = true;  // point negation is a single op

  static std::string id() { return "ristretto255"; }

  struct Scalar {
    std::array<uint8_t, 32> b{};
    friend bool operator==(const Scalar&, const Scalar&) = default;
  };

  struct Element {
    std::array<uint8_t, 32> b{};  // all-zero encoding is the identity
    friend bool operator==(const Element&, const Element&) = default;
  };

  // ---- scalars mod the group order L ----

  static Scalar scalar_zero() { return {}; }

  static Scalar scalar_one() { return scalar_from_u64(1); }

  static Scalar scalar_from_u64(uint64_t v) {
    Scalar s;
    for (int i = 0; i < 8; i++) s.b[static_cast<size_t>(i)] = static_cast<uint8_t>(v >> (8 * i));
    return s;
  }

  static Scalar scalar_add(const Scalar& a, const Scalar& b) {
    detail::ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_add(r.b.data(), a.b.data(), b.b.data());
    return r;
  }

  static Scalar scalar_sub(const Scalar& a, const Scalar& b) {
    detail::ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_sub(r.b.data(), a.b.data(), b.b.data());
    return r;
  }

  static Scalar scalar_mul(const Scalar& a, const Scalar& b) {
    detail::ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_mul(r.b.data(), a.b.data(), b.b.data());
    return r;
  }

  static Scalar scalar_neg(const Scalar& a) {
    detail::ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_negate(r.b.data(), a.b.data());
    return r;
  }

  static Scalar scalar_invert(const Scalar& a) {
    detail::ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_invert(r.b.data(), a.b.data());
    return r;
  }

  static Scalar scalar_reduce_wide(const std::array<uint8_t, 64>& wide) {
    detail::ensure_sodium();
    Scalar r;
    crypto_core_ristretto255_scalar_reduce(r.b.data(), wide.data());
    return r;
  }

  static std::array<uint8_t, kScalarBytes> scalar_encode(const Scalar& s) { return s.b; }

  static std::optional<Scalar> scalar_decode(BytesView b) {
    if (b.size() != kScalarBytes) return std::nullopt;
    Scalar s;
    std::memcpy(s.b.data(), b.data(), 32);
    // canonical iff reducing the zero-extended value is a no-op
    std::array<uint8_t, 64> wide{};
    std::memcpy(wide.data(), s.b.data(), 32);
    if (!(scalar_reduce_wide(wide) == s)) return std::nullopt;
    return s;
  }

  static std::optional<uint64_t> scalar_to_u64(const Scalar& s) {
    for (size_t i = 8; i < 32; i++) {
      if (s.b[i] != 0) return std::nullopt;
    }
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(s.b[static_cast<size_t>(i)]) << (8 * i);
    return v;
  }

  static bool scalar_leq(const Scalar& a, const Scalar& b) {
    for (int i = 31; i >= 0; i--) {
      const size_t k = static_cast<size_t>(i);
      if (a.b[k] != b.b[k]) return a.b[k] < b.b[k];
    }
    return true;
  }

  /// ceil(L/2) = 2^-1 mod L, since L is odd.
  static Scalar scalar_half_ceil() {
    static const Scalar half = scalar_invert(scalar_from_u64(2));
    return half;
  }

  // ---- group elements ----

  static Element identity() { return {}; }

  static Element generator() {
    static const Element g = [] {
      detail::ensure_sodium();
      Element e;
      auto one = scalar_from_u64(1);
      crypto_scalarmult_ristretto255_base(e.b.data(), one.b.data());
      return e;
    }();
    return g;
  }

  static Element op(const Element& a, const Element& b) {
    detail::ensure_sodium();
    Element r;
    crypto_core_ristretto255_add(r.b.data(), a.b.data(), b.b.data());
    return r;
  }

  static Element inverse(const Element& a) {
    detail::ensure_sodium();
    Element r;
    crypto_core_ristretto255_sub(r.b.data(), identity().b.data(), a.b.data());
    return r;
  }

  static Element pow(const Element& base, const Scalar& e) {
    detail::ensure_sodium();
    // libsodium rejects zero scalars and identity results, which are fine here
    if (e == scalar_zero() || base == identity()) return identity();
    Element r;
    int rc = crypto_scalarmult_ristretto255(r.b.data(), e.b.data(), base.b.data());
    if (rc != 0) return identity();
    return r;
  }

  static Element from_hash(const std::array<uint8_t, 64>& h) {
    detail::ensure_sodium();
    Element r;
    crypto_core_ristretto255_from_hash(r.b.data(), h.data());
    return r;
  }

  static std::array<uint8_t, kElementBytes> element_encode(const Element& e) { return e.b; }

  static std::optional<Element> element_decode(BytesView b) {
    detail::ensure_sodium();
    if (b.size() != kElementBytes) return std::nullopt;
    Element e;
    std::memcpy(e.b.data(), b.data(), 32);
    if (e == identity()) return e;
    if (crypto_core_ristretto255_is_valid_point(e.b.data()) != 1) return std::nullopt;
    return e;
  }
};

}  // namespace vdp
