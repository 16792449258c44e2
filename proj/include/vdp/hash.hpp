#pragma once

#include <sodium.h>

#include <array>
#include <string>

#include "vdp/bytes.hpp"

namespace vdp {

namespace detail {
inline bool ensure_sodium() {
  static const bool ok = [] { return sodium_init() >= 0; }();
  return ok;
}
}  // namespace detail

inline std::array<uint8_t, 32> sha256(BytesView data) {
  detail::ensure_sodium();
  std::array<uint8_t, 32> out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

inline std::array<uint8_t, 64> sha512(BytesView data) {
  detail::ensure_sodium();
  std::array<uint8_t, 64> out{};
  crypto_hash_sha512(out.data(), data.data(), data.size());
  return out;
}

/// Incremental SHA-256 over a domain-separated, length-prefixed message
/// sequence. Used everywhere a deterministic challenge or derivation is
/// needed, so two transcripts hash equal iff they are field-for-field equal.
class TranscriptHasher {
 public:
  explicit TranscriptHasher(const std::string& domain_tag) {
    detail::ensure_sodium();
    crypto_hash_sha256_init(&state_);
    append_blob(BytesView(reinterpret_cast<const uint8_t*>(domain_tag.data()), domain_tag.size()));
  }

  TranscriptHasher& append(BytesView b) {
    append_blob(b);
    return *this;
  }

  TranscriptHasher& append(const std::string& s) {
    append_blob(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    return *this;
  }

  TranscriptHasher& append_u64(uint64_t v) {
    uint8_t le[8];
    for (int i = 0; i < 8; i++) le[i] = static_cast<uint8_t>(v >> (8 * i));
    crypto_hash_sha256_update(&state_, le, 8);
    return *this;
  }

  std::array<uint8_t, 32> finish() {
    std::array<uint8_t, 32> out{};
    crypto_hash_sha256_final(&state_, out.data());
    return out;
  }

  /// 32-byte digest zero-extended to 64 bytes, ready for wide scalar reduction.
  std::array<uint8_t, 64> finish_wide() {
    std::array<uint8_t, 64> wide{};
    auto d = finish();
    std::copy(d.begin(), d.end(), wide.begin());
    return wide;
  }

 private:
  void append_blob(BytesView b) {
    append_u64(b.size());
    crypto_hash_sha256_update(&state_, b.data(), b.size());
  }

  crypto_hash_sha256_state state_;
};

}  // namespace vdp
