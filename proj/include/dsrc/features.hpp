// dsrc/features.hpp
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
// Content-feature sequences: interchange file format for externally
// computed frame features, plus a baseline log-mel featurizer so the
// whole pipeline runs without external models.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/common.hpp"
#include "dsrc/io.hpp"
#include "dsrc/mel.hpp"

namespace dsrc {

struct FeatureSequence {
  std::vector<float> values;  // count x dim, row-major
  int dim = 0;
  int count = 0;
  double frame_rate = 0.0;  // Hz
  std::string source_tag;

  std::span<const float> row(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }
};

// Feature file: magic "FTRS", version u8, dim u32 LE, count u32 LE,
// frame_rate f32 LE, payload f32 LE row-major [count x dim].
inline void store_features(const std::string& path,
                           const FeatureSequence& fs) {
  DSRC_CHECK(fs.dim >= 1 && fs.count >= 1,
             "store_features: need dim >= 1 and count >= 1");
  DSRC_CHECK(fs.values.size() ==
                 static_cast<std::size_t>(fs.dim) * fs.count,
             "store_features: value buffer does not match dim x count");
  detail::ByteWriter w;
  w.put_raw("FTRS", 4);
  w.put_u8(1);
  w.put_u32(static_cast<std::uint32_t>(fs.dim));
  w.put_u32(static_cast<std::uint32_t>(fs.count));
  w.put_f32(static_cast<float>(fs.frame_rate));
  for (float v : fs.values) w.put_f32(v);
  detail::write_file(path, w.bytes);
}

inline FeatureSequence load_features(const std::string& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  detail::ByteReader r(bytes, "FTRS " + path);
  r.expect_magic("FTRS");
  const int version = r.get_u8();
  DSRC_CHECK_FMT(version == 1, "FTRS ", path, ": unsupported version ",
                 version);
  FeatureSequence fs;
  fs.dim = static_cast<int>(r.get_u32());
  fs.count = static_cast<int>(r.get_u32());
  fs.frame_rate = r.get_f32();
  DSRC_CHECK_FMT(fs.dim >= 1, "FTRS ", path, ": zero dim");
  DSRC_CHECK_FMT(fs.count >= 1, "FTRS ", path, ": zero count");
  const std::size_t n = static_cast<std::size_t>(fs.dim) * fs.count;
  fs.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) fs.values[i] = r.get_f32();
  DSRC_CHECK_FMT(r.remaining() == 0, "FTRS ", path, ": trailing bytes");
  for (float v : fs.values)
    DSRC_CHECK_FMT(std::isfinite(v), "FTRS ", path, ": non-finite value");
  fs.source_tag = path;
  return fs;
}

// Per-frame log-mel vectors at the given hop, mean/variance normalized
// per dimension over the utterance. A stand-in content featurizer for
// desk-scale runs; the frame rate is sample_rate / hop.
inline FeatureSequence baseline_features(const AudioClip& clip, int hop,
                                         int mel_bands = 80) {
  DSRC_CHECK(hop >= 1, "baseline_features: hop must be positive");
  DSRC_CHECK(clip.sample_rate % hop == 0,
             "baseline_features: hop ", hop,
             " does not divide the sample rate ", clip.sample_rate,
             " into an integer frame rate");
  MelConfig cfg;
  cfg.hop = hop;
  cfg.mel_bands = mel_bands;
  cfg.window = std::min(cfg.window, cfg.fft_size);
  cfg.fmax = std::min(cfg.fmax, clip.sample_rate / 2.0);
  DSRC_CHECK(clip.size() >= static_cast<std::size_t>(cfg.window),
             "baseline_features: clip too short for one ", cfg.window,
             "-sample analysis window");
  const MelSpectrogram mel = mel_spectrogram(clip, cfg);

  FeatureSequence fs;
  fs.dim = mel.bands;
  fs.count = mel.num_frames;
  fs.frame_rate = static_cast<double>(clip.sample_rate) / hop;
  fs.source_tag = "baseline-logmel";
  fs.values.resize(mel.values.size());

  // per-dimension mean/variance normalization (population variance)
  for (int d = 0; d < fs.dim; ++d) {
    double mean = 0.0;
    for (int t = 0; t < fs.count; ++t) mean += mel.at(t, d);
    mean /= fs.count;
    double var = 0.0;
    for (int t = 0; t < fs.count; ++t) {
      const double c = mel.at(t, d) - mean;
      var += c * c;
    }
    var /= fs.count;
    const double scale = var > 1e-16 ? 1.0 / std::sqrt(var) : 0.0;
    for (int t = 0; t < fs.count; ++t)
      fs.values[static_cast<std::size_t>(t) * fs.dim + d] =
          static_cast<float>((mel.at(t, d) - mean) * scale);
  }
  return fs;
}

}  // namespace dsrc
