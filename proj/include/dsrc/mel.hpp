// dsrc/mel.hpp
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
// Log-Mel spectrogram: Hann-windowed DFT power spectrum projected through
// a triangular mel filterbank, floored, natural log.

#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/common.hpp"
#include "dsrc/fft.hpp"

namespace dsrc {

struct MelConfig {
  int fft_size = 1024;
  int window = 1024;     // samples
  int hop = 256;         // samples
  int mel_bands = 80;
  double fmin = 0.0;     // Hz
  double fmax = 8000.0;  // Hz
  double log_floor = 1e-5;
};

struct MelSpectrogram {
  std::vector<double> values;  // num_frames x bands, row-major
  int num_frames = 0;
  int bands = 0;
  MelConfig config;

  double at(int frame, int band) const {
    return values[static_cast<std::size_t>(frame) * bands + band];
  }
};

// Number of full analysis windows in a clip of T samples; no padding.
inline int frame_count(std::size_t num_samples, int window, int hop) {
  if (num_samples < static_cast<std::size_t>(window)) return 0;
  return static_cast<int>((num_samples - window) / hop) + 1;
}

inline void validate(const MelConfig& cfg, int sample_rate) {
  DSRC_CHECK(cfg.fft_size >= 1, "mel: fft_size must be positive");
  DSRC_CHECK(cfg.window >= 1 && cfg.window <= cfg.fft_size,
             "mel: need 1 <= window <= fft_size, got window=", cfg.window,
             " fft_size=", cfg.fft_size);
  DSRC_CHECK(cfg.hop >= 1 && cfg.hop <= cfg.window,
             "mel: need 1 <= hop <= window, got hop=", cfg.hop);
  DSRC_CHECK(cfg.mel_bands >= 1, "mel: mel_bands must be positive");
  DSRC_CHECK(cfg.fmin >= 0.0 && cfg.fmin < cfg.fmax,
             "mel: need 0 <= fmin < fmax");
  DSRC_CHECK(cfg.fmax <= sample_rate / 2.0,
             "mel: fmax ", cfg.fmax, " exceeds Nyquist for sample rate ",
             sample_rate);
  DSRC_CHECK(cfg.log_floor > 0.0, "mel: log_floor must be positive");
}

namespace detail {

inline double hz_to_mel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}
inline double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

// Band edge/center frequencies: mel_bands + 2 mel-spaced points in
// [fmin, fmax]. Band b spans points (b, b+2) and peaks at b+1.
inline std::vector<double> mel_points_hz(const MelConfig& cfg) {
  const double lo = hz_to_mel(cfg.fmin);
  const double hi = hz_to_mel(cfg.fmax);
  std::vector<double> pts(cfg.mel_bands + 2);
  for (int i = 0; i < cfg.mel_bands + 2; ++i)
    pts[i] = mel_to_hz(lo + (hi - lo) * i / (cfg.mel_bands + 1));
  return pts;
}

// Triangular weights (peak 1) per band over DFT bins 0..fft/2.
inline std::vector<std::vector<double>> mel_filterbank(const MelConfig& cfg,
                                                       int sample_rate) {
  const std::vector<double> pts = mel_points_hz(cfg);
  const int num_bins = cfg.fft_size / 2 + 1;
  std::vector<std::vector<double>> weights(
      cfg.mel_bands, std::vector<double>(num_bins, 0.0));
  for (int b = 0; b < cfg.mel_bands; ++b) {
    const double left = pts[b], center = pts[b + 1], right = pts[b + 2];
    for (int k = 0; k < num_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / cfg.fft_size;
      if (f <= left || f >= right) continue;
      weights[b][k] = f <= center ? (f - left) / (center - left)
                                  : (right - f) / (right - center);
    }
  }
  return weights;
}

}  // namespace detail

// Peak frequency of each mel band (Hz).
inline std::vector<double> mel_band_centers_hz(const MelConfig& cfg) {
  std::vector<double> pts = detail::mel_points_hz(cfg);
  return {pts.begin() + 1, pts.end() - 1};
}

inline MelSpectrogram mel_spectrogram(const AudioClip& clip,
                                      const MelConfig& cfg) {
  validate(cfg, clip.sample_rate);
  DSRC_CHECK(clip.size() >= static_cast<std::size_t>(cfg.window),
             "mel: clip of ", clip.size(), " samples is shorter than one ",
             cfg.window, "-sample window");

  const int num_frames = frame_count(clip.size(), cfg.window, cfg.hop);
  const auto bank = detail::mel_filterbank(cfg, clip.sample_rate);

  std::vector<double> hann(cfg.window);
  for (int n = 0; n < cfg.window; ++n)
    hann[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / cfg.window);

  MelSpectrogram out;
  out.num_frames = num_frames;
  out.bands = cfg.mel_bands;
  out.config = cfg;
  out.values.resize(static_cast<std::size_t>(num_frames) * cfg.mel_bands);

  std::vector<double> frame(cfg.window);
  for (int t = 0; t < num_frames; ++t) {
    const std::size_t start = static_cast<std::size_t>(t) * cfg.hop;
    for (int n = 0; n < cfg.window; ++n)
      frame[n] = clip.samples[start + n] * hann[n];
    const std::vector<double> power =
        detail::power_spectrum(frame, static_cast<std::size_t>(cfg.fft_size));
    for (int b = 0; b < cfg.mel_bands; ++b) {
      double energy = 0.0;
      const std::vector<double>& w = bank[b];
      for (std::size_t k = 0; k < power.size(); ++k) energy += w[k] * power[k];
      out.values[static_cast<std::size_t>(t) * cfg.mel_bands + b] =
          std::log(std::max(energy, cfg.log_floor));
    }
  }
  return out;
}

}  // namespace dsrc
