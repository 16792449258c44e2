#pragma once

#include <openssl/bn.h>

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "vdp/bytes.hpp"
#include "vdp/hash.hpp"

namespace vdp {

namespace bn_detail {

struct BnDeleter {
  void operator()(BIGNUM* b) const { BN_free(b); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;

inline BnPtr make() {
  BnPtr p(BN_new());
  if (!p) throw std::runtime_error("BN_new failed");
  return p;
}

inline BnPtr dup(const BIGNUM* b) {
  BnPtr p(BN_dup(b));
  if (!p) throw std::runtime_error("BN_dup failed");
  return p;
}

inline BnPtr from_hex(const char* hex) {
  BIGNUM* raw = nullptr;
  if (!BN_hex2bn(&raw, hex)) throw std::runtime_error("BN_hex2bn failed");
  return BnPtr(raw);
}

inline void check(int ok, const char* what) {
  if (!ok) throw std::runtime_error(std::string("OpenSSL BN failure in ") + what);
}

}  // namespace bn_detail

/// Schnorr group over Z_p* with a 1024-bit modulus and 160-bit prime order
/// subgroup (the RFC 5114 group 22 constants). This is the big-integer
/// finite-field configuration the pipeline benchmarks run on; elements are
/// kept in Montgomery form so that the long commitment products cost one
/// Montgomery multiplication per factor.
struct Zp1024 {
  static constexpr unsigned kSecurityBits = 80;
  static constexpr size_t kScalarBytes = 20;
  static constexpr size_t kElementBytes = 128;
  static constexpr bool kOrderFitsU64 = false;
  static constexpr uint64_t kOrderU64 = 0;
  static constexpr bool kFastInverse = false;

  static std::string id() { return "zp1024"; }

  struct Scalar {
    bn_detail::BnPtr n;
    Scalar() : n(bn_detail::make()) { BN_zero(n.get()); }
    explicit Scalar(bn_detail::BnPtr v) : n(std::move(v)) {}
    Scalar(const Scalar& o) : n(bn_detail::dup(o.n.get())) {}
    Scalar& operator=(const Scalar& o) {
      if (this != &o) n = bn_detail::dup(o.n.get());
      return *this;
    }
    Scalar(Scalar&&) noexcept = default;
    Scalar& operator=(Scalar&&) noexcept = default;
    friend bool operator==(const Scalar& a, const Scalar& b) {
      return BN_cmp(a.n.get(), b.n.get()) == 0;
    }
  };

  struct Element {
    bn_detail::BnPtr n;  // montgomery representation
    Element() : n(bn_detail::make()) { BN_zero(n.get()); }
    explicit Element(bn_detail::BnPtr v) : n(std::move(v)) {}
    Element(const Element& o) : n(bn_detail::dup(o.n.get())) {}
    Element& operator=(const Element& o) {
      if (this != &o) n = bn_detail::dup(o.n.get());
      return *this;
    }
    Element(Element&&) noexcept = default;
    Element& operator=(Element&&) noexcept = default;
    friend bool operator==(const Element& a, const Element& b) {
      return BN_cmp(a.n.get(), b.n.get()) == 0;
    }
  };

  // ---- shared constants and per-thread scratch ----

  struct Constants {
    bn_detail::BnPtr p, q, g_plain, cofactor, q_half_ceil, one;
  };

  static const Constants& constants() {
    static const Constants c = [] {
      Constants k;
      k.p = bn_detail::from_hex(
          "B10B8F96A080E01DDE92DE5EAE5D54EC52C99FBCFB06A3C69A6A9DCA52D23B61"
          "6073E28675A23D189838EF1E2EE652C013ECB4AEA906112324975C3CD49B83BF"
          "ACCBDD7D90C4BD7098488E9C219A73724EFFD6FAE5644738FAA31A4FF55BCCC0"
          "A151AF5F0DC8B4BD45BF37DF365C1A65E68CFDA76D4DA708DF1FB2BC2E4A4371");
      k.q = bn_detail::from_hex("F518AA8781A8DF278ABA4E7D64B7CB9D49462353");
      k.g_plain = bn_detail::from_hex(
          "A4D1CBD5C3FD34126765A442EFB99905F8104DD258AC507FD6406CFF14266D31"
          "266FEA1E5C41564B777E690F5504F213160217B4B01B886A5E91547F9E2749F4"
          "D7FBD7D3B9A92EE1909D0D2263F80A76A6A24C087A091F531DBF0A0169B6A28A"
          "D662A4D18E73AFA32D779D5918D08BC8858F4DCEF97C2A24855E6EEB22B3B2E5");
      BN_CTX* ctx = BN_CTX_new();
      k.cofactor = bn_detail::make();
      bn_detail::BnPtr pm1 = bn_detail::dup(k.p.get());
      bn_detail::check(BN_sub_word(pm1.get(), 1), "sub_word");
      bn_detail::check(BN_div(k.cofactor.get(), nullptr, pm1.get(), k.q.get(), ctx), "div");
      k.q_half_ceil = bn_detail::dup(k.q.get());
      bn_detail::check(BN_add_word(k.q_half_ceil.get(), 1), "add_word");
      bn_detail::check(BN_rshift1(k.q_half_ceil.get(), k.q_half_ceil.get()), "rshift");
      k.one = bn_detail::make();
      BN_one(k.one.get());
      BN_CTX_free(ctx);
      return k;
    }();
    return c;
  }

  struct Scratch {
    BN_CTX* ctx;
    BN_MONT_CTX* mont;
    Scratch() {
      ctx = BN_CTX_new();
      mont = BN_MONT_CTX_new();
      if (!ctx || !mont) throw std::runtime_error("BN ctx allocation failed");
      bn_detail::check(BN_MONT_CTX_set(mont, constants().p.get(), ctx), "mont_set");
    }
    ~Scratch() {
      BN_MONT_CTX_free(mont);
      BN_CTX_free(ctx);
    }
  };

  static Scratch& scratch() {
    thread_local Scratch s;
    return s;
  }

  // ---- scalars mod q ----

  static Scalar scalar_zero() { return {}; }

  static Scalar scalar_one() {
    Scalar s;
    BN_one(s.n.get());
    return s;
  }

  static Scalar scalar_from_u64(uint64_t v) {
    Scalar s;
    bn_detail::check(BN_set_word(s.n.get(), v), "set_word");
    // 64-bit values are far below the 160-bit order; no reduction needed
    return s;
  }

  static Scalar scalar_add(const Scalar& a, const Scalar& b) {
    Scalar r;
    bn_detail::check(
        BN_mod_add(r.n.get(), a.n.get(), b.n.get(), constants().q.get(), scratch().ctx),
        "mod_add");
    return r;
  }

  static Scalar scalar_sub(const Scalar& a, const Scalar& b) {
    Scalar r;
    bn_detail::check(
        BN_mod_sub(r.n.get(), a.n.get(), b.n.get(), constants().q.get(), scratch().ctx),
        "mod_sub");
    return r;
  }

  static Scalar scalar_mul(const Scalar& a, const Scalar& b) {
    Scalar r;
    bn_detail::check(
        BN_mod_mul(r.n.get(), a.n.get(), b.n.get(), constants().q.get(), scratch().ctx),
        "mod_mul");
    return r;
  }

  static Scalar scalar_neg(const Scalar& a) {
    Scalar r;
    if (BN_is_zero(a.n.get())) return r;
    bn_detail::check(BN_sub(r.n.get(), constants().q.get(), a.n.get()), "sub");
    return r;
  }

  static Scalar scalar_invert(const Scalar& a) {
    Scalar r;
    if (!BN_mod_inverse(r.n.get(), a.n.get(), constants().q.get(), scratch().ctx)) {
      throw std::runtime_error("scalar not invertible");
    }
    return r;
  }

  static Scalar scalar_reduce_wide(const std::array<uint8_t, 64>& wide) {
    bn_detail::BnPtr big(BN_lebin2bn(wide.data(), wide.size(), nullptr));
    if (!big) throw std::runtime_error("lebin2bn failed");
    Scalar r;
    bn_detail::check(BN_mod(r.n.get(), big.get(), constants().q.get(), scratch().ctx), "mod");
    return r;
  }

  static std::array<uint8_t, kScalarBytes> scalar_encode(const Scalar& s) {
    std::array<uint8_t, kScalarBytes> out{};
    bn_detail::check(BN_bn2lebinpad(s.n.get(), out.data(), out.size()), "bn2lebinpad");
    return out;
  }

  static std::optional<Scalar> scalar_decode(BytesView b) {
    if (b.size() != kScalarBytes) return std::nullopt;
    bn_detail::BnPtr n(BN_lebin2bn(b.data(), b.size(), nullptr));
    if (!n) return std::nullopt;
    if (BN_cmp(n.get(), constants().q.get()) >= 0) return std::nullopt;
    return Scalar(std::move(n));
  }

  static std::optional<uint64_t> scalar_to_u64(const Scalar& s) {
    if (BN_num_bits(s.n.get()) > 63) return std::nullopt;
    return static_cast<uint64_t>(BN_get_word(s.n.get()));
  }

  static bool scalar_leq(const Scalar& a, const Scalar& b) {
    return BN_cmp(a.n.get(), b.n.get()) <= 0;
  }

  static Scalar scalar_half_ceil() { return Scalar(bn_detail::dup(constants().q_half_ceil.get())); }

  // ---- group elements (montgomery form) ----

  static Element to_mont(const BIGNUM* plain) {
    Element e;
    bn_detail::check(BN_to_montgomery(e.n.get(), plain, scratch().mont, scratch().ctx),
                     "to_montgomery");
    return e;
  }

  static bn_detail::BnPtr from_mont(const Element& e) {
    auto out = bn_detail::make();
    bn_detail::check(BN_from_montgomery(out.get(), e.n.get(), scratch().mont, scratch().ctx),
                     "from_montgomery");
    return out;
  }

  static Element identity() { return to_mont(constants().one.get()); }

  static Element generator() { return to_mont(constants().g_plain.get()); }

  static Element op(const Element& a, const Element& b) {
    Element r;
    bn_detail::check(
        BN_mod_mul_montgomery(r.n.get(), a.n.get(), b.n.get(), scratch().mont, scratch().ctx),
        "mont_mul");
    return r;
  }

  static Element inverse(const Element& a) {
    auto plain = from_mont(a);
    auto inv = bn_detail::make();
    if (!BN_mod_inverse(inv.get(), plain.get(), constants().p.get(), scratch().ctx)) {
      throw std::runtime_error("element not invertible");
    }
    return to_mont(inv.get());
  }

  static Element pow(const Element& base, const Scalar& e) {
    auto plain = from_mont(base);
    auto out = bn_detail::make();
    bn_detail::check(BN_mod_exp_mont(out.get(), plain.get(), e.n.get(), constants().p.get(),
                                     scratch().ctx, scratch().mont),
                     "mod_exp");
    return to_mont(out.get());
  }

  static Element from_hash(const std::array<uint8_t, 64>& h) {
    std::array<uint8_t, 64> cur = h;
    for (;;) {
      bn_detail::BnPtr big(BN_lebin2bn(cur.data(), cur.size(), nullptr));
      auto v = bn_detail::make();
      bn_detail::check(BN_mod(v.get(), big.get(), constants().p.get(), scratch().ctx), "mod");
      if (!BN_is_zero(v.get())) {
        auto out = bn_detail::make();
        bn_detail::check(BN_mod_exp_mont(out.get(), v.get(), constants().cofactor.get(),
                                         constants().p.get(), scratch().ctx, scratch().mont),
                         "mod_exp");
        if (!BN_is_one(out.get())) return to_mont(out.get());
      }
      cur = sha512(cur);
    }
  }

  static std::array<uint8_t, kElementBytes> element_encode(const Element& e) {
    std::array<uint8_t, kElementBytes> out{};
    auto plain = from_mont(e);
    bn_detail::check(BN_bn2lebinpad(plain.get(), out.data(), out.size()), "bn2lebinpad");
    return out;
  }

  static std::optional<Element> element_decode(BytesView b) {
    if (b.size() != kElementBytes) return std::nullopt;
    bn_detail::BnPtr v(BN_lebin2bn(b.data(), b.size(), nullptr));
    if (!v) return std::nullopt;
    if (BN_is_zero(v.get()) || BN_cmp(v.get(), constants().p.get()) >= 0) return std::nullopt;
    // subgroup membership: v^q = 1
    auto r = bn_detail::make();
    bn_detail::check(BN_mod_exp_mont(r.get(), v.get(), constants().q.get(), constants().p.get(),
                                     scratch().ctx, scratch().mont),
                     "mod_exp");
    if (!BN_is_one(r.get())) return std::nullopt;
    return to_mont(v.get());
  }
};

}  // namespace vdp
