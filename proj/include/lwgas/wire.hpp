#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "lwgas/bigint.hpp"

namespace lwgas::wire {

enum class MessageType : std::uint8_t {
  kPublicShare = 1,
  kEncryptedShare = 2,
  kVerdict = 3,
  kHarnRelease = 4,
  kRotation = 5,
};

/// type:u8 | epoch:u32 | member_id_len:u8 | member_id | payload (big-endian).
struct Message {
  MessageType type{};
  std::uint32_t epoch = 0;
  std::string member_id;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

Bytes encode(const Message& msg);
/// Throws Error(kDecode) on truncation, bad type, or trailing garbage.
Message decode(std::span<const std::uint8_t> bytes);

/// Minimal cursor helpers shared by payload codecs.
class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void raw(std::span<const std::uint8_t> data) { out_.insert(out_.end(), data.begin(), data.end()); }
  /// u16 length prefix followed by the bytes.
  void blob16(std::span<const std::uint8_t> data);
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::span<const std::uint8_t> raw(std::size_t n);
  std::span<const std::uint8_t> blob16() { return raw(u16()); }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace lwgas::wire
