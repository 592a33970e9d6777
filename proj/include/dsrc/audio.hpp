// dsrc/audio.hpp
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
// Mono audio clips and RIFF/WAV file I/O (PCM 16-bit little-endian).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dsrc/common.hpp"
#include "dsrc/io.hpp"

namespace dsrc {

struct AudioClip {
  std::vector<float> samples;  // amplitudes in [-1, 1]
  int sample_rate = 0;         // Hz

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

// Reads a PCM WAV file. Multi-channel files contribute only their first
// channel. 16-bit samples are scaled to [-1, 1] by dividing by 32768, so
// -32768 maps to -1.0 exactly.
inline AudioClip load_audio(const std::string& path) {
  std::vector<std::uint8_t> bytes = detail::read_file(path);
  detail::ByteReader r(bytes, "WAV " + path);

  r.expect_magic("RIFF");
  r.get_u32();  // riff size, not trusted
  r.expect_magic("WAVE");

  int num_channels = 0;
  int sample_rate = 0;
  int bits_per_sample = 0;
  int audio_format = 0;
  bool got_fmt = false;
  AudioClip clip;

  // Walk chunks; "fmt " must precede "data".
  while (r.remaining() >= 8) {
    char chunk_id[4];
    r.get_raw(chunk_id, 4);
    std::uint32_t chunk_size = r.get_u32();
    if (std::memcmp(chunk_id, "fmt ", 4) == 0) {
      DSRC_CHECK_FMT(chunk_size >= 16, "WAV ", path, ": fmt chunk too small");
      std::size_t chunk_start = r.pos;
      audio_format = r.get_u16();
      num_channels = r.get_u16();
      sample_rate = static_cast<int>(r.get_u32());
      r.get_u32();  // byte rate
      r.get_u16();  // block align
      bits_per_sample = r.get_u16();
      r.need(chunk_size - (r.pos - chunk_start));
      r.pos = chunk_start + chunk_size;
      got_fmt = true;
    } else if (std::memcmp(chunk_id, "data", 4) == 0) {
      DSRC_CHECK_FMT(got_fmt, "WAV ", path, ": data chunk before fmt chunk");
      DSRC_CHECK_FMT(audio_format == 1, "WAV ", path,
                     ": unsupported encoding (format tag ", audio_format,
                     ", only PCM is supported)");
      DSRC_CHECK_FMT(bits_per_sample == 16, "WAV ", path,
                     ": unsupported encoding (", bits_per_sample,
                     " bits per sample, only 16 is supported)");
      DSRC_CHECK_FMT(num_channels >= 1, "WAV ", path, ": zero channels");
      DSRC_CHECK_FMT(sample_rate > 0, "WAV ", path, ": zero sample rate");
      r.need(chunk_size);
      const std::size_t bytes_per_frame = 2u * num_channels;
      const std::size_t num_frames = chunk_size / bytes_per_frame;
      DSRC_CHECK_FMT(num_frames > 0, "WAV ", path, ": zero-length audio");
      clip.samples.resize(num_frames);
      for (std::size_t i = 0; i < num_frames; ++i) {
        // first channel only
        std::size_t off = r.pos + i * bytes_per_frame;
        std::int16_t s = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(r.data[off]) |
            static_cast<std::uint16_t>(r.data[off + 1]) << 8);
        clip.samples[i] = static_cast<float>(s) / 32768.0f;
      }
      clip.sample_rate = sample_rate;
      return clip;
    } else {
      // skip unknown chunk (word-aligned)
      std::uint32_t skip = chunk_size + (chunk_size & 1);
      r.need(skip);
      r.pos += skip;
    }
  }
  throw FormatError("WAV " + path + ": no data chunk found");
}

// Writes a mono 16-bit PCM WAV file. Samples are clamped to [-1, 1].
inline void save_audio(const std::string& path, const AudioClip& clip) {
  DSRC_CHECK(clip.sample_rate > 0, "save_audio: sample_rate must be positive");
  DSRC_CHECK(!clip.samples.empty(), "save_audio: refusing to write empty clip");
  detail::ByteWriter w;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(clip.samples.size() * 2);
  w.put_raw("RIFF", 4);
  w.put_u32(36 + data_bytes);
  w.put_raw("WAVE", 4);
  w.put_raw("fmt ", 4);
  w.put_u32(16);
  w.put_u16(1);  // PCM
  w.put_u16(1);  // mono
  w.put_u32(static_cast<std::uint32_t>(clip.sample_rate));
  w.put_u32(static_cast<std::uint32_t>(clip.sample_rate * 2));
  w.put_u16(2);   // block align
  w.put_u16(16);  // bits per sample
  w.put_raw("data", 4);
  w.put_u32(data_bytes);
  for (float s : clip.samples) {
    float c = std::clamp(s, -1.0f, 1.0f);
    auto v = static_cast<std::int16_t>(std::lrint(c * 32767.0f));
    w.put_u16(static_cast<std::uint16_t>(v));
  }
  detail::write_file(path, w.bytes);
}

}  // namespace dsrc
