// dsrc/io.hpp
//
// Copyright 2026 The dsrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Little-endian byte buffer primitives shared by all binary file formats.

#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dsrc/common.hpp"

namespace dsrc::detail {

// Serializes multi-byte integers LSB first regardless of host order.
struct ByteWriter {
  std::vector<std::uint8_t> bytes;

  void put_u8(std::uint8_t v) { bytes.push_back(v); }
  void put_u16(std::uint16_t v) {
    bytes.push_back(static_cast<std::uint8_t>(v & 0xff));
    bytes.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void put_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      bytes.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  }
  void put_f32(float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    put_u32(u);
  }
  void put_raw(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes.insert(bytes.end(), p, p + n);
  }
};

struct ByteReader {
  const std::uint8_t* data = nullptr;
  std::size_t size = 0;
  std::size_t pos = 0;
  std::string label;  // used in error messages

  ByteReader(const std::uint8_t* d, std::size_t n, std::string what)
      : data(d), size(n), label(std::move(what)) {}
  explicit ByteReader(const std::vector<std::uint8_t>& buf, std::string what)
      : ByteReader(buf.data(), buf.size(), std::move(what)) {}

  std::size_t remaining() const { return size - pos; }

  void need(std::size_t n) const {
    DSRC_CHECK_FMT(pos + n <= size, label, ": truncated (need ", n,
                   " more bytes at offset ", pos, ", have ", size - pos, ")");
  }
  std::uint8_t get_u8() {
    need(1);
    return data[pos++];
  }
  std::uint16_t get_u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(data[pos]) |
                      static_cast<std::uint16_t>(data[pos + 1]) << 8;
    pos += 2;
    return v;
  }
  std::uint32_t get_u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  float get_f32() {
    std::uint32_t u = get_u32();
    float v;
    std::memcpy(&v, &u, 4);
    return v;
  }
  void get_raw(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, data + pos, n);
    pos += n;
  }
  void expect_magic(const char magic[4]) {
    need(4);
    DSRC_CHECK_FMT(std::memcmp(data + pos, magic, 4) == 0, label,
                   ": bad magic, expected \"", std::string(magic, 4), "\"");
    pos += 4;
  }
};

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for reading: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  DSRC_CHECK(!in.bad(), "read failed: ", path);
  return bytes;
}

inline void write_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  DSRC_CHECK(out.good(), "write failed: ", path);
}

}  // namespace dsrc::detail
