#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <string>

#include "vdp/bytes.hpp"
#include "vdp/errors.hpp"
#include "vdp/hash.hpp"
#include "vdp/rng.hpp"

namespace vdp {

template <typename G>
concept GroupBackend = requires(typename G::Scalar s, typename G::Element e,
                                std::array<uint8_t, 64> wide, BytesView bv) {
  { G::id() } -> std::convertible_to<std::string>;
  { G::scalar_add(s, s) } -> std::same_as<typename G::Scalar>;
  { G::scalar_reduce_wide(wide) } -> std::same_as<typename G::Scalar>;
  { G::op(e, e) } -> std::same_as<typename G::Element>;
  { G::pow(e, s) } -> std::same_as<typename G::Element>;
  { G::element_decode(bv) } -> std::same_as<std::optional<typename G::Element>>;
};

template <GroupBackend G>
typename G::Scalar random_scalar(SeededRng& rng) {
  return G::scalar_reduce_wide(rng.wide());
}

constexpr uint8_t kParamsVersion = 1;
inline constexpr const char* kDefaultDomainTag = "vdp-v1";

/// Group description plus the two commitment bases. `h` is derived from `g`
/// by hashing to the group under a fixed domain tag, so no participant can
/// know log_g(h) without breaking the hash or the discrete log.
template <GroupBackend G>
struct PublicParams {
  typename G::Element g;
  typename G::Element h;
  std::string domain_tag;

  friend bool operator==(const PublicParams&, const PublicParams&) = default;

  Bytes serialize() const {
    ByteWriter w;
    w.u8(kParamsVersion);
    w.blob(G::id());
    w.blob(domain_tag);
    w.blob(G::element_encode(g));
    w.blob(G::element_encode(h));
    return w.take();
  }

  static PublicParams deserialize(BytesView bytes) {
    ByteReader r(bytes);
    if (r.u8() != kParamsVersion) throw ParseError("unknown PublicParams version");
    const auto gid = r.blob();
    if (std::string(gid.begin(), gid.end()) != G::id())
      throw ParseError("PublicParams group mismatch");
    const auto tag = r.blob();
    auto g = G::element_decode(r.blob());
    auto h = G::element_decode(r.blob());
    r.expect_done();
    if (!g || !h) throw ParseError("non-canonical generator encoding");
    return PublicParams{*g, *h, std::string(tag.begin(), tag.end())};
  }
};

template <GroupBackend G>
struct Commitment {
  typename G::Element point;
  friend bool operator==(const Commitment&, const Commitment&) = default;
};

/// Deterministic parameter generation. The second base is a nothing-up-my-
/// sleeve hash of the first, re-derived with a counter in the (tiny-group)
/// event that it collides with g or the identity.
template <GroupBackend G>
PublicParams<G> setup(unsigned security_bits = G::kSecurityBits,
                      const std::string& domain_tag = kDefaultDomainTag) {
  if (security_bits != G::kSecurityBits) {
    throw ConfigError("unsupported security level " + std::to_string(security_bits) +
                      " for group " + G::id());
  }
  const auto g = G::generator();
  for (uint64_t ctr = 0;; ctr++) {
    ByteWriter w;
    w.blob(std::string("vdp-h-derive-v1"));
    w.blob(domain_tag);
    w.blob(G::element_encode(g));
    w.u64(ctr);
    const auto h = G::from_hash(sha512(w.bytes()));
    if (h == g || h == G::identity()) continue;
    return PublicParams<G>{g, h, domain_tag};
  }
}

template <GroupBackend G>
Commitment<G> commit(const PublicParams<G>& pp, const typename G::Scalar& x,
                     const typename G::Scalar& r) {
  return {G::op(G::pow(pp.g, x), G::pow(pp.h, r))};
}

template <GroupBackend G>
bool verify_opening(const PublicParams<G>& pp, const Commitment<G>& c,
                    const typename G::Scalar& x, const typename G::Scalar& r) {
  return commit(pp, x, r) == c;
}

template <GroupBackend G>
Commitment<G> combine(const Commitment<G>& a, const Commitment<G>& b) {
  return {G::op(a.point, b.point)};
}

template <GroupBackend G>
Commitment<G> invert(const Commitment<G>& c) {
  return {G::inverse(c.point)};
}

/// Com(1, 0) * c^-1. Maps a commitment to (v, s) into one to (1-v, -s).
template <GroupBackend G>
Commitment<G> one_minus(const PublicParams<G>& pp, const Commitment<G>& c) {
  return {G::op(pp.g, G::inverse(c.point))};
}

template <GroupBackend G>
Commitment<G> identity_commitment() {
  return {G::identity()};
}

}  // namespace vdp
