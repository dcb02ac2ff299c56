// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#include "rewind/wire.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "rewind/errors.hpp"

namespace rewind {

namespace {

std::array<std::uint32_t, 256> make_crc_table() {
  std::array<std::uint32_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int k = 0; k < 8; ++k) {
      c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : (c >> 1);
    }
    table[i] = c;
  }
  return table;
}

}  // namespace

std::uint32_t crc32(std::span<const std::byte> bytes) {
  static const auto table = make_crc_table();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::byte b : bytes) {
    c = table[(c ^ static_cast<std::uint8_t>(b)) & 0xFFu] ^ (c >> 8);
  }
  return c ^ 0xFFFFFFFFu;
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes, std::uint64_t h) {
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint8_t>(b);
    h *= 1099511628211ull;
  }
  return h;
}

void ByteWriter::u8(std::uint8_t v) { buf_.push_back(std::byte{v}); }

void ByteWriter::u16(std::uint16_t v) {
  u8(static_cast<std::uint8_t>(v & 0xFF));
  u8(static_cast<std::uint8_t>(v >> 8));
}

void ByteWriter::u32(std::uint32_t v) {
  u16(static_cast<std::uint16_t>(v & 0xFFFF));
  u16(static_cast<std::uint16_t>(v >> 16));
}

void ByteWriter::u64(std::uint64_t v) {
  u32(static_cast<std::uint32_t>(v & 0xFFFFFFFFu));
  u32(static_cast<std::uint32_t>(v >> 32));
}

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::bytes(std::span<const std::byte> b) {
  buf_.insert(buf_.end(), b.begin(), b.end());
}

void ByteWriter::str(std::string_view s) {
  if (s.size() > 0xFFFF) raise(Err::StorageError, "string too long for frame");
  u16(static_cast<std::uint16_t>(s.size()));
  bytes(std::as_bytes(std::span(s.data(), s.size())));
}

std::uint8_t ByteReader::u8() {
  if (pos_ + 1 > buf_.size()) raise(Err::CorruptLog, "truncated frame");
  return static_cast<std::uint8_t>(buf_[pos_++]);
}

std::uint16_t ByteReader::u16() {
  std::uint16_t lo = u8(), hi = u8();
  return static_cast<std::uint16_t>(lo | (hi << 8));
}

std::uint32_t ByteReader::u32() {
  std::uint32_t lo = u16(), hi = u16();
  return lo | (hi << 16);
}

std::uint64_t ByteReader::u64() {
  std::uint64_t lo = u32(), hi = u32();
  return lo | (hi << 32);
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::span<const std::byte> ByteReader::bytes(std::size_t n) {
  if (pos_ + n > buf_.size()) raise(Err::CorruptLog, "truncated frame");
  auto out = buf_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::string ByteReader::str() {
  std::size_t n = u16();
  auto b = bytes(n);
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

std::vector<std::byte> read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) raise(Err::StorageError, "cannot open " + p.string());
  std::vector<std::byte> out;
  in.seekg(0, std::ios::end);
  out.resize(static_cast<std::size_t>(in.tellg()));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!in) raise(Err::StorageError, "short read on " + p.string());
  return out;
}

void write_file_atomic(const std::filesystem::path& p,
                       std::span<const std::byte> bytes) {
  std::filesystem::create_directories(p.parent_path());
  auto tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Err::StorageError, "cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(Err::StorageError, "short write on " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

void write_text_atomic(const std::filesystem::path& p, const std::string& text) {
  write_file_atomic(p, std::as_bytes(std::span(text.data(), text.size())));
}

}  // namespace rewind
