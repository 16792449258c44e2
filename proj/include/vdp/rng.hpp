#pragma once

#include <sodium.h>

#include <array>
#include <bit>
#include <cstdint>
#include <string>

#include "vdp/bytes.hpp"
#include "vdp/hash.hpp"

namespace vdp {

/// Deterministic byte stream keyed by a 32-byte seed (SHA-512 in counter
/// mode). Every piece of randomness in a session flows from one of these, so
/// a session is a pure function of its master seed. Not a general-purpose
/// CSPRNG replacement: honest deployments would seed from the OS.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) {
    ByteWriter w;
    w.blob(std::string("vdp-rng-v1"));
    w.u64(seed);
    auto d = sha512(w.bytes());
    std::copy(d.begin(), d.begin() + 32, key_.begin());
  }

  explicit SeededRng(const std::array<uint8_t, 32>& key) : key_(key) {}

  /// Derives an independent child stream. Children with distinct labels are
  /// independent of each other and of the parent's future output.
  SeededRng child(const std::string& label) {
    ByteWriter w;
    w.raw(key_);
    w.u8(0xff);
    w.blob(label);
    auto d = sha512(w.bytes());
    std::array<uint8_t, 32> k{};
    std::copy(d.begin(), d.begin() + 32, k.begin());
    return SeededRng(k);
  }

  SeededRng child_indexed(const std::string& label, uint64_t index) {
    return child(label + "#" + std::to_string(index));
  }

  void fill(std::span<uint8_t> out) {
    size_t i = 0;
    while (i < out.size()) {
      if (avail_ == 0) refill();
      const size_t n = std::min(out.size() - i, avail_);
      std::copy(block_.begin() + (64 - avail_), block_.begin() + (64 - avail_) + n,
                out.begin() + i);
      avail_ -= n;
      i += n;
    }
  }

  std::array<uint8_t, 64> wide() {
    std::array<uint8_t, 64> out{};
    fill(out);
    return out;
  }

  uint64_t next_u64() {
    std::array<uint8_t, 8> b{};
    fill(b);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }

  /// Unbiased integer in [0, bound) by rejection.
  uint64_t uniform_below(uint64_t bound) {
    const uint64_t lim = bound * (UINT64_MAX / bound);
    for (;;) {
      uint64_t v = next_u64();
      if (v < lim) return v % bound;
    }
  }

  bool next_bit() { return (next_u64() & 1) != 0; }

  /// Exact Binomial(n, 1/2) draw: popcount over n fair bits.
  uint64_t binomial_half(uint64_t n) {
    uint64_t acc = 0;
    uint64_t left = n;
    while (left >= 64) {
      acc += static_cast<uint64_t>(std::popcount(next_u64()));
      left -= 64;
    }
    if (left > 0) {
      uint64_t mask = (left == 64) ? ~0ULL : ((1ULL << left) - 1);
      acc += static_cast<uint64_t>(std::popcount(next_u64() & mask));
    }
    return acc;
  }

 private:
  void refill() {
    detail::ensure_sodium();
    uint8_t buf[40];
    std::copy(key_.begin(), key_.end(), buf);
    for (int i = 0; i < 8; i++) buf[32 + i] = static_cast<uint8_t>(counter_ >> (8 * i));
    counter_++;
    crypto_hash_sha512(block_.data(), buf, sizeof(buf));
    avail_ = 64;
  }

  std::array<uint8_t, 32> key_{};
  std::array<uint8_t, 64> block_{};
  size_t avail_ = 0;
  uint64_t counter_ = 0;
};

}  // namespace vdp
