// Copyright 2026 The Rewind Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rewind {

// CRC-32 (IEEE, reflected). Used as the per-record payload checksum.
std::uint32_t crc32(std::span<const std::byte> bytes);

// FNV-1a 64-bit. Used for trajectory/state digests.
std::uint64_t fnv1a64(std::span<const std::byte> bytes,
                      std::uint64_t h = 14695981039346656037ull);

// Little-endian append-only buffer.
class ByteWriter {
 public:
  void u8(std::uint8_t v);
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void bytes(std::span<const std::byte> b);
  void str(std::string_view s);  // u16 length + raw bytes

  std::span<const std::byte> span() const { return buf_; }
  std::size_t size() const { return buf_.size(); }
  std::vector<std::byte> take() { return std::move(buf_); }

 private:
  std::vector<std::byte> buf_;
};

// Little-endian cursor over a byte span. Underflow raises CorruptLog.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> buf) : buf_(buf) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::span<const std::byte> bytes(std::size_t n);
  std::string str();

  std::size_t remaining() const { return buf_.size() - pos_; }
  bool done() const { return pos_ == buf_.size(); }

 private:
  std::span<const std::byte> buf_;
  std::size_t pos_ = 0;
};

std::vector<std::byte> read_file(const std::filesystem::path& p);
// Write via a temp file in the same directory, then rename into place.
void write_file_atomic(const std::filesystem::path& p,
                       std::span<const std::byte> bytes);
void write_text_atomic(const std::filesystem::path& p, const std::string& text);

}  // namespace rewind
