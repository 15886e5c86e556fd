#include "lwgas/wire.hpp"

#include <limits>

#include "lwgas/error.hpp"

namespace lwgas::wire {

void Writer::u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
}

void Writer::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Writer::blob16(std::span<const std::uint8_t> data) {
  if (data.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorKind::kInvalidArgument, "field too long for u16 length prefix");
  }
  u16(static_cast<std::uint16_t>(data.size()));
  raw(data);
}

std::span<const std::uint8_t> Reader::raw(std::size_t n) {
  if (data_.size() - pos_ < n) throw Error(ErrorKind::kDecode, "truncated message");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Reader::u8() { return raw(1)[0]; }

std::uint16_t Reader::u16() {
  auto b = raw(2);
  return static_cast<std::uint16_t>(b[0] << 8 | b[1]);
}

std::uint32_t Reader::u32() {
  auto b = raw(4);
  return static_cast<std::uint32_t>(b[0]) << 24 | static_cast<std::uint32_t>(b[1]) << 16 |
         static_cast<std::uint32_t>(b[2]) << 8 | b[3];
}

void Reader::expect_done() const {
  if (!done()) throw Error(ErrorKind::kDecode, "trailing bytes after message");
}

Bytes encode(const Message& msg) {
  if (msg.member_id.size() > 255) throw Error(ErrorKind::kInvalidArgument, "member id too long");
  Writer w;
  w.u8(static_cast<std::uint8_t>(msg.type));
  w.u32(msg.epoch);
  w.u8(static_cast<std::uint8_t>(msg.member_id.size()));
  w.raw({reinterpret_cast<const std::uint8_t*>(msg.member_id.data()), msg.member_id.size()});
  w.raw(msg.payload);
  return w.take();
}

Message decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Message msg;
  const auto type = r.u8();
  if (type < 1 || type > 5) throw Error(ErrorKind::kDecode, "unknown message type");
  msg.type = static_cast<MessageType>(type);
  msg.epoch = r.u32();
  auto id = r.raw(r.u8());
  msg.member_id.assign(id.begin(), id.end());
  auto rest = r.raw(bytes.size() - (1 + 4 + 1 + id.size()));
  msg.payload.assign(rest.begin(), rest.end());
  return msg;
}

}  // namespace lwgas::wire
