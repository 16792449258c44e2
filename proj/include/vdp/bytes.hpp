#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "vdp/errors.hpp"

namespace vdp {

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

/// Appends primitive values and length-prefixed blobs to a growing buffer.
/// All multi-byte integers are little-endian; all variable-length fields are
/// prefixed with a u32 length so that concatenated messages parse uniquely.
class ByteWriter {
 public:
  void u8(uint8_t v) { buf_.push_back(v); }

  void u32(uint32_t v) {
    for (int i = 0; i < 4; i++) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  void u64(uint64_t v) {
    for (int i = 0; i < 8; i++) buf_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }

  void raw(BytesView b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

  void blob(BytesView b) {
    u32(static_cast<uint32_t>(b.size()));
    raw(b);
  }

  void blob(const std::string& s) {
    blob(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
  }

  const Bytes& bytes() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

/// Strict reader over a byte view; throws ParseError on any short read.
class ByteReader {
 public:
  explicit ByteReader(BytesView b) : data_(b) {}

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }

  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= static_cast<uint32_t>(data_[pos_++]) << (8 * i);
    return v;
  }

  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= static_cast<uint64_t>(data_[pos_++]) << (8 * i);
    return v;
  }

  BytesView raw(size_t n) {
    need(n);
    BytesView out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  BytesView blob() { return raw(u32()); }

  bool done() const { return pos_ == data_.size(); }

  void expect_done() const {
    if (!done()) throw ParseError("trailing bytes after message");
  }

 private:
  void need(size_t n) const {
    if (pos_ + n > data_.size()) throw ParseError("message truncated");
  }

  BytesView data_;
  size_t pos_ = 0;
};

inline std::string to_hex(BytesView b) {
  std::string out(b.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), b.data(), b.size());
  out.resize(b.size() * 2);
  return out;
}

inline std::string to_base64(BytesView b) {
  const size_t len = sodium_base64_ENCODED_LEN(b.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(len, '\0');
  sodium_bin2base64(out.data(), out.size(), b.data(), b.size(), sodium_base64_VARIANT_ORIGINAL);
  out.resize(std::strlen(out.c_str()));
  return out;
}

inline Bytes from_base64(const std::string& s) {
  Bytes out(s.size(), 0);
  size_t real_len = 0;
  if (sodium_base642bin(out.data(), out.size(), s.data(), s.size(), nullptr, &real_len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0) {
    throw ParseError("invalid base64");
  }
  out.resize(real_len);
  return out;
}

}  // namespace vdp
