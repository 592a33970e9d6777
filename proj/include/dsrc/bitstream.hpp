// dsrc/bitstream.hpp
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
// Wire format for (content codes, F0 codes, speaker id): a fixed header
// followed by MSB-first fixed-width code sections, each zero-padded to a
// byte boundary. Bitrate accounting and transport packetization included.
// All layouts here are normative and bit-exact; file extension ".dsrc".

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dsrc/common.hpp"
#include "dsrc/io.hpp"
#include "dsrc/quantize.hpp"

namespace dsrc {

// Fixed-width bits per code: ceil(log2 vocab); a vocabulary of one needs
// zero bits.
inline int bits_per_code(int vocab) {
  DSRC_CHECK(vocab >= 1, "bits_per_code: vocab must be >= 1, got ", vocab);
  int bits = 0;
  while ((1 << bits) < vocab) ++bits;
  return bits;
}

struct CodecConfig {
  int sample_rate = 16000;
  int content_hop = 320;    // samples per content frame
  int content_vocab = 100;  // K
  int f0_vocab = 20;        // K'
  int f0_group = 4;         // content frames per F0 code

  double content_frame_rate() const {
    return static_cast<double>(sample_rate) / content_hop;
  }
  double f0_frame_rate() const { return content_frame_rate() / f0_group; }
};

inline void validate(const CodecConfig& cfg) {
  DSRC_CHECK(cfg.sample_rate >= 1, "codec: sample_rate must be >= 1");
  DSRC_CHECK(cfg.content_hop >= 1 && cfg.content_hop <= 0xffff,
             "codec: content_hop out of range");
  DSRC_CHECK(cfg.content_vocab >= 1 && cfg.content_vocab <= 0xffff,
             "codec: content_vocab out of range");
  DSRC_CHECK(cfg.f0_vocab >= 1 && cfg.f0_vocab <= 0xffff,
             "codec: f0_vocab out of range");
  DSRC_CHECK(cfg.f0_group >= 1 && cfg.f0_group <= 0xff,
             "codec: f0_group out of range");
}

struct BitrateBreakdown {
  double content_bps = 0.0;
  double f0_bps = 0.0;
  double total_bps = 0.0;
};

// Bits per second of the two code streams. The content rate multiplies the
// exact frame rate; the F0 rate is rounded up to a whole frame per second
// (12.5 Hz counts as 13), matching the fixed-width accounting of the
// stream. Speaker identity travels once in the header and costs no rate.
inline BitrateBreakdown bitrate(const CodecConfig& cfg) {
  validate(cfg);
  BitrateBreakdown b;
  const int content_bits = bits_per_code(cfg.content_vocab);
  b.content_bps = static_cast<double>(content_bits) * cfg.sample_rate /
                  cfg.content_hop;
  const std::int64_t f0_hop =
      static_cast<std::int64_t>(cfg.content_hop) * cfg.f0_group;
  const std::int64_t f0_rate_ceil = (cfg.sample_rate + f0_hop - 1) / f0_hop;
  b.f0_bps = static_cast<double>(bits_per_code(cfg.f0_vocab) * f0_rate_ceil);
  b.total_bps = b.content_bps + b.f0_bps;
  return b;
}

// ---------------------------------------------------------------------------
// bit-level packing, MSB first within each byte

namespace detail {

struct BitWriter {
  std::vector<std::uint8_t> bytes;
  int bit_pos = 0;  // bits used in the last byte, 0..7

  void put_bits(std::uint32_t value, int nbits) {
    for (int i = nbits - 1; i >= 0; --i) {
      if (bit_pos == 0) bytes.push_back(0);
      if ((value >> i) & 1u)
        bytes.back() |= static_cast<std::uint8_t>(0x80 >> bit_pos);
      bit_pos = (bit_pos + 1) & 7;
    }
  }
  void align() { bit_pos = 0; }  // zero padding is already in place
};

struct BitReaderMsb {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t byte_pos = 0;
  int bit_pos = 0;
  std::string label;

  std::uint32_t get_bits(int nbits) {
    std::uint32_t v = 0;
    for (int i = 0; i < nbits; ++i) {
      DSRC_CHECK_FMT(byte_pos < size, label, ": truncated payload");
      const int bit = (data[byte_pos] >> (7 - bit_pos)) & 1;
      v = (v << 1) | static_cast<std::uint32_t>(bit);
      if (++bit_pos == 8) {
        bit_pos = 0;
        ++byte_pos;
      }
    }
    return v;
  }
  void align() {
    if (bit_pos != 0) {
      bit_pos = 0;
      ++byte_pos;
    }
  }
};

inline std::size_t packed_bytes(std::size_t count, int bits) {
  return (count * static_cast<std::size_t>(bits) + 7) / 8;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// stream header and full stream

struct StreamHeader {
  std::uint8_t version = 1;
  std::uint32_t sample_rate = 0;
  std::uint16_t content_hop = 0;
  std::uint16_t content_vocab = 0;
  std::uint16_t f0_vocab = 0;
  std::uint8_t f0_group = 0;
  std::uint16_t speaker_id = 0;
  std::uint32_t num_content_frames = 0;

  static constexpr std::size_t kSerializedSize = 22;
  static constexpr char kMagic[5] = "DSRC";

  std::size_t num_f0_codes() const {
    return (static_cast<std::size_t>(num_content_frames) + f0_group - 1) /
           f0_group;
  }
  CodecConfig config() const {
    CodecConfig cfg;
    cfg.sample_rate = static_cast<int>(sample_rate);
    cfg.content_hop = content_hop;
    cfg.content_vocab = content_vocab;
    cfg.f0_vocab = f0_vocab;
    cfg.f0_group = f0_group;
    return cfg;
  }
};

namespace detail {

inline void put_header(ByteWriter& w, const StreamHeader& h) {
  w.put_raw(StreamHeader::kMagic, 4);
  w.put_u8(h.version);
  w.put_u32(h.sample_rate);
  w.put_u16(h.content_hop);
  w.put_u16(h.content_vocab);
  w.put_u16(h.f0_vocab);
  w.put_u8(h.f0_group);
  w.put_u16(h.speaker_id);
  w.put_u32(h.num_content_frames);
}

inline StreamHeader get_header(ByteReader& r) {
  r.expect_magic(StreamHeader::kMagic);
  StreamHeader h;
  h.version = r.get_u8();
  DSRC_CHECK_FMT(h.version == 1, r.label, ": unsupported version ",
                 static_cast<int>(h.version));
  h.sample_rate = r.get_u32();
  h.content_hop = r.get_u16();
  h.content_vocab = r.get_u16();
  h.f0_vocab = r.get_u16();
  h.f0_group = r.get_u8();
  h.speaker_id = r.get_u16();
  h.num_content_frames = r.get_u32();
  DSRC_CHECK_FMT(h.content_vocab >= 1 && h.f0_vocab >= 1, r.label,
                 ": vocabulary fields must be >= 1");
  DSRC_CHECK_FMT(h.f0_group >= 1, r.label, ": f0_group must be >= 1");
  DSRC_CHECK_FMT(h.num_content_frames >= 1, r.label,
                 ": zero content frames");
  return h;
}

}  // namespace detail

struct Bitstream {
  StreamHeader header;
  std::vector<std::uint8_t> bytes;  // full serialized stream incl. header

  // code bits before byte-boundary padding
  std::size_t payload_bits() const {
    return static_cast<std::size_t>(header.num_content_frames) *
               bits_per_code(header.content_vocab) +
           header.num_f0_codes() * bits_per_code(header.f0_vocab);
  }
  std::size_t payload_bytes() const {
    return bytes.size() - StreamHeader::kSerializedSize;
  }
};

struct DecodedStream {
  UnitSequence content;
  F0CodeSequence f0;
  std::uint16_t speaker_id = 0;
  CodecConfig config;
  StreamHeader header;
};

inline Bitstream encode_stream(const UnitSequence& content,
                               const F0CodeSequence& f0,
                               std::uint16_t speaker_id,
                               const CodecConfig& cfg) {
  validate(cfg);
  const std::size_t L = content.codes.size();
  DSRC_CHECK(L >= 1, "encode_stream: empty content sequence");
  DSRC_CHECK(L <= 0xffffffffu, "encode_stream: too many content frames");
  DSRC_CHECK_DIM(content.vocab == cfg.content_vocab,
                 "encode_stream: content vocab ", content.vocab,
                 " does not match config K=", cfg.content_vocab);
  DSRC_CHECK_DIM(f0.vocab == cfg.f0_vocab, "encode_stream: F0 vocab ",
                 f0.vocab, " does not match config K'=", cfg.f0_vocab);
  const std::size_t expected_f0 = (L + cfg.f0_group - 1) / cfg.f0_group;
  DSRC_CHECK_DIM(f0.codes.size() == expected_f0, "encode_stream: ",
                 f0.codes.size(), " F0 codes for ", L,
                 " content frames; expected ceil(L / f0_group) = ",
                 expected_f0);
  for (int c : content.codes)
    DSRC_CHECK(c >= 0 && c < cfg.content_vocab,
               "encode_stream: content code ", c, " overflows vocab ",
               cfg.content_vocab);
  for (int c : f0.codes)
    DSRC_CHECK(c >= 0 && c < cfg.f0_vocab, "encode_stream: F0 code ", c,
               " overflows vocab ", cfg.f0_vocab);

  Bitstream s;
  s.header.version = 1;
  s.header.sample_rate = static_cast<std::uint32_t>(cfg.sample_rate);
  s.header.content_hop = static_cast<std::uint16_t>(cfg.content_hop);
  s.header.content_vocab = static_cast<std::uint16_t>(cfg.content_vocab);
  s.header.f0_vocab = static_cast<std::uint16_t>(cfg.f0_vocab);
  s.header.f0_group = static_cast<std::uint8_t>(cfg.f0_group);
  s.header.speaker_id = speaker_id;
  s.header.num_content_frames = static_cast<std::uint32_t>(L);

  detail::ByteWriter header_writer;
  detail::put_header(header_writer, s.header);
  detail::BitWriter bits;
  bits.bytes = std::move(header_writer.bytes);

  const int content_bits = bits_per_code(cfg.content_vocab);
  for (int c : content.codes)
    bits.put_bits(static_cast<std::uint32_t>(c), content_bits);
  bits.align();
  const int f0_bits = bits_per_code(cfg.f0_vocab);
  for (int c : f0.codes) bits.put_bits(static_cast<std::uint32_t>(c), f0_bits);
  bits.align();

  s.bytes = std::move(bits.bytes);
  return s;
}

inline DecodedStream decode_stream(const std::vector<std::uint8_t>& bytes) {
  detail::ByteReader r(bytes, "bitstream");
  const StreamHeader h = detail::get_header(r);

  const std::size_t L = h.num_content_frames;
  const std::size_t num_f0 = h.num_f0_codes();
  const int content_bits = bits_per_code(h.content_vocab);
  const int f0_bits = bits_per_code(h.f0_vocab);
  const std::size_t expected =
      StreamHeader::kSerializedSize + detail::packed_bytes(L, content_bits) +
      detail::packed_bytes(num_f0, f0_bits);
  DSRC_CHECK_FMT(bytes.size() >= expected,
                 "bitstream: truncated payload (", bytes.size(), " bytes, ",
                 expected, " expected)");
  DSRC_CHECK_FMT(bytes.size() == expected,
                 "bitstream: trailing bytes (", bytes.size(), " bytes, ",
                 expected, " expected)");

  detail::BitReaderMsb bits{bytes.data(), bytes.size(),
                            StreamHeader::kSerializedSize, 0, "bitstream"};
  DecodedStream out;
  out.header = h;
  out.speaker_id = h.speaker_id;
  out.config = h.config();

  out.content.vocab = h.content_vocab;
  out.content.frame_rate = out.config.content_frame_rate();
  out.content.codes.resize(L);
  for (std::size_t i = 0; i < L; ++i) {
    const auto c = static_cast<int>(bits.get_bits(content_bits));
    DSRC_CHECK_FMT(c < h.content_vocab, "bitstream: content code ", c,
                   " overflows vocab ", h.content_vocab);
    out.content.codes[i] = c;
  }
  bits.align();
  out.f0.vocab = h.f0_vocab;
  out.f0.frame_rate = out.config.f0_frame_rate();
  out.f0.codes.resize(num_f0);
  for (std::size_t i = 0; i < num_f0; ++i) {
    const auto c = static_cast<int>(bits.get_bits(f0_bits));
    DSRC_CHECK_FMT(c < h.f0_vocab, "bitstream: F0 code ", c,
                   " overflows vocab ", h.f0_vocab);
    out.f0.codes[i] = c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// packetization: packet 0 carries the header plus the frames-per-packet
// count; packet n >= 1 carries its sequence number and the content and F0
// code bits of its frame range, each section independently byte-aligned.

inline std::vector<std::vector<std::uint8_t>> packetize(
    const Bitstream& stream, int frames_per_packet) {
  const StreamHeader& h = stream.header;
  DSRC_CHECK(frames_per_packet > 0 && frames_per_packet % h.f0_group == 0,
             "packetize: frames_per_packet must be a positive multiple of "
             "f0_group (",
             static_cast<int>(h.f0_group), "), got ", frames_per_packet);
  const DecodedStream decoded = decode_stream(stream.bytes);

  const std::size_t L = h.num_content_frames;
  const std::size_t num_packets =
      (L + frames_per_packet - 1) / frames_per_packet;
  const int content_bits = bits_per_code(h.content_vocab);
  const int f0_bits = bits_per_code(h.f0_vocab);

  std::vector<std::vector<std::uint8_t>> packets;
  packets.reserve(num_packets + 1);
  {
    detail::ByteWriter w;
    detail::put_header(w, h);
    w.put_u32(static_cast<std::uint32_t>(frames_per_packet));
    packets.push_back(std::move(w.bytes));
  }
  for (std::size_t n = 0; n < num_packets; ++n) {
    const std::size_t start = n * frames_per_packet;
    const std::size_t end = std::min(L, start + frames_per_packet);
    const std::size_t f0_start = start / h.f0_group;
    const std::size_t f0_end = (end + h.f0_group - 1) / h.f0_group;
    detail::ByteWriter w;
    w.put_u32(static_cast<std::uint32_t>(n + 1));
    detail::BitWriter bits;
    bits.bytes = std::move(w.bytes);
    for (std::size_t i = start; i < end; ++i)
      bits.put_bits(static_cast<std::uint32_t>(decoded.content.codes[i]),
                    content_bits);
    bits.align();
    for (std::size_t i = f0_start; i < f0_end; ++i)
      bits.put_bits(static_cast<std::uint32_t>(decoded.f0.codes[i]), f0_bits);
    bits.align();
    packets.push_back(std::move(bits.bytes));
  }
  return packets;
}

// Reassembles a stream from packets in arbitrary arrival order. Duplicate
// sequence numbers, a missing or duplicated header packet, and missing
// sequence numbers are all reported as errors.
inline Bitstream depacketize(
    const std::vector<std::vector<std::uint8_t>>& packets) {
  DSRC_CHECK_FMT(!packets.empty(), "depacketize: no packets");

  const std::vector<std::uint8_t>* header_packet = nullptr;
  std::vector<const std::vector<std::uint8_t>*> payload_packets;
  for (const auto& p : packets) {
    if (p.size() >= 4 && std::memcmp(p.data(), StreamHeader::kMagic, 4) == 0) {
      DSRC_CHECK_FMT(header_packet == nullptr,
                     "depacketize: duplicate header packet");
      header_packet = &p;
    } else {
      payload_packets.push_back(&p);
    }
  }
  DSRC_CHECK_FMT(header_packet != nullptr,
                 "depacketize: missing header packet");

  detail::ByteReader hr(*header_packet, "packet 0");
  const StreamHeader h = detail::get_header(hr);
  const auto frames_per_packet = static_cast<std::size_t>(hr.get_u32());
  DSRC_CHECK_FMT(hr.remaining() == 0, "packet 0: trailing bytes");
  DSRC_CHECK_FMT(frames_per_packet > 0 &&
                     frames_per_packet % h.f0_group == 0,
                 "packet 0: bad frames_per_packet");

  const std::size_t L = h.num_content_frames;
  const std::size_t num_packets =
      (L + frames_per_packet - 1) / frames_per_packet;
  const int content_bits = bits_per_code(h.content_vocab);
  const int f0_bits = bits_per_code(h.f0_vocab);

  std::vector<const std::vector<std::uint8_t>*> by_seq(num_packets, nullptr);
  for (const auto* p : payload_packets) {
    DSRC_CHECK_FMT(p->size() >= 4, "depacketize: runt packet");
    detail::ByteReader r(*p, "packet");
    const std::uint32_t seq = r.get_u32();
    DSRC_CHECK_FMT(seq >= 1 && seq <= num_packets,
                   "depacketize: unexpected sequence number ", seq);
    DSRC_CHECK_FMT(by_seq[seq - 1] == nullptr,
                   "depacketize: duplicate sequence number ", seq);
    by_seq[seq - 1] = p;
  }
  std::string missing;
  for (std::size_t n = 0; n < num_packets; ++n) {
    if (by_seq[n] == nullptr)
      missing += (missing.empty() ? "" : ", ") + std::to_string(n + 1);
  }
  DSRC_CHECK_FMT(missing.empty(), "depacketize: missing sequence numbers {",
                 missing, "}");

  UnitSequence content;
  content.vocab = h.content_vocab;
  content.frame_rate = h.config().content_frame_rate();
  F0CodeSequence f0;
  f0.vocab = h.f0_vocab;
  f0.frame_rate = h.config().f0_frame_rate();

  for (std::size_t n = 0; n < num_packets; ++n) {
    const std::size_t start = n * frames_per_packet;
    const std::size_t end = std::min(L, start + frames_per_packet);
    const std::size_t f0_count =
        (end + h.f0_group - 1) / h.f0_group - start / h.f0_group;
    const std::vector<std::uint8_t>& p = *by_seq[n];
    const std::size_t expected =
        4 + detail::packed_bytes(end - start, content_bits) +
        detail::packed_bytes(f0_count, f0_bits);
    DSRC_CHECK_FMT(p.size() == expected, "packet ", n + 1, ": has ", p.size(),
                   " bytes, expected ", expected);
    detail::BitReaderMsb bits{p.data(), p.size(), 4, 0,
                              "packet " + std::to_string(n + 1)};
    for (std::size_t i = start; i < end; ++i)
      content.codes.push_back(static_cast<int>(bits.get_bits(content_bits)));
    bits.align();
    for (std::size_t i = 0; i < f0_count; ++i)
      f0.codes.push_back(static_cast<int>(bits.get_bits(f0_bits)));
  }

  return encode_stream(content, f0, h.speaker_id, h.config());
}

// stream file I/O (".dsrc")
inline void save_stream(const std::string& path, const Bitstream& s) {
  detail::write_file(path, s.bytes);
}
inline Bitstream load_stream(const std::string& path) {
  Bitstream s;
  s.bytes = detail::read_file(path);
  s.header = decode_stream(s.bytes).header;
  return s;
}

}  // namespace dsrc
