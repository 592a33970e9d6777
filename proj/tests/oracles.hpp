// tests/oracles.hpp
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
// Independent reference implementations used only by tests. These stay
// deliberately naive (direct summation, full DP matrices, exhaustive
// sweeps) and share no code with the library paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/mel.hpp"
#include "dsrc/pitch.hpp"

namespace oracle {

// Direct-DFT log-mel spectrogram, scalar arithmetic throughout.
inline std::vector<double> naive_mel(const dsrc::AudioClip& clip,
                                     const dsrc::MelConfig& cfg) {
  const int frames = clip.size() >= static_cast<std::size_t>(cfg.window)
                         ? static_cast<int>((clip.size() - cfg.window) /
                                            cfg.hop) + 1
                         : 0;
  const int bins = cfg.fft_size / 2 + 1;

  // mel points
  const auto to_mel = [](double hz) {
    return 2595.0 * std::log10(1.0 + hz / 700.0);
  };
  const auto to_hz = [](double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
  };
  std::vector<double> pts(cfg.mel_bands + 2);
  for (int i = 0; i < cfg.mel_bands + 2; ++i)
    pts[i] = to_hz(to_mel(cfg.fmin) + (to_mel(cfg.fmax) - to_mel(cfg.fmin)) *
                                          i / (cfg.mel_bands + 1));

  std::vector<double> out(static_cast<std::size_t>(frames) * cfg.mel_bands);
  for (int t = 0; t < frames; ++t) {
    std::vector<double> frame(cfg.fft_size, 0.0);
    for (int n = 0; n < cfg.window; ++n) {
      const double hann = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / cfg.window);
      frame[n] = clip.samples[static_cast<std::size_t>(t) * cfg.hop + n] * hann;
    }
    for (int b = 0; b < cfg.mel_bands; ++b) {
      double energy = 0.0;
      for (int k = 0; k < bins; ++k) {
        const double f = static_cast<double>(k) * clip.sample_rate /
                         cfg.fft_size;
        double w = 0.0;
        if (f > pts[b] && f < pts[b + 2])
          w = f <= pts[b + 1] ? (f - pts[b]) / (pts[b + 1] - pts[b])
                              : (pts[b + 2] - f) / (pts[b + 2] - pts[b + 1]);
        if (w == 0.0) continue;
        double re = 0.0, im = 0.0;
        for (int n = 0; n < cfg.fft_size; ++n) {
          const double ang = -2.0 * M_PI * k * n / cfg.fft_size;
          re += frame[n] * std::cos(ang);
          im += frame[n] * std::sin(ang);
        }
        energy += w * (re * re + im * im);
      }
      out[static_cast<std::size_t>(t) * cfg.mel_bands + b] =
          std::log(std::max(energy, cfg.log_floor));
    }
  }
  return out;
}

// Full-matrix Levenshtein distance.
template <typename Token>
double naive_error_rate(const std::vector<Token>& ref,
                        const std::vector<Token>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<std::size_t>> d(n + 1,
                                          std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] +
                              (ref[i - 1] == hyp[j - 1] ? 0u : 1u)});
  return static_cast<double>(d[n][m]) / static_cast<double>(n);
}

// Voicing decision error by direct recount.
inline double naive_vde(const dsrc::F0Track& ref, const dsrc::F0Track& hyp) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const bool a = ref.voiced[i] != 0, b = hyp.voiced[i] != 0;
    if (a != b) ++e;
  }
  return static_cast<double>(e) / static_cast<double>(ref.size());
}

// F0 frame error by direct recount; the deviation predicate is written
// exactly as specified, |hyp - ref| / ref > 0.2.
inline double naive_ffe(const dsrc::F0Track& ref, const dsrc::F0Track& hyp) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const bool a = ref.voiced[i] != 0, b = hyp.voiced[i] != 0;
    if (a != b) {
      ++e;
    } else if (a && b) {
      if (std::abs(static_cast<double>(hyp.f0[i]) - ref.f0[i]) / ref.f0[i] >
          0.2)
        ++e;
    }
  }
  return static_cast<double>(e) / static_cast<double>(ref.size());
}

// Exhaustive EER sweep: recompute FAR and FRR at every candidate
// threshold by naive counting, then interpolate across the crossing.
inline double naive_eer(const std::vector<double>& targets,
                        const std::vector<double>& non_targets) {
  std::vector<double> thresholds = targets;
  thresholds.insert(thresholds.end(), non_targets.begin(), non_targets.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  thresholds.push_back(thresholds.back() + 1.0);

  const auto rates = [&](double t) {
    std::size_t fa = 0, fr = 0;
    for (double s : non_targets)
      if (s >= t) ++fa;
    for (double s : targets)
      if (s < t) ++fr;
    return std::pair<double, double>(
        static_cast<double>(fa) / non_targets.size(),
        static_cast<double>(fr) / targets.size());
  };

  double prev_far = 1.0, prev_frr = 0.0;
  for (double t : thresholds) {
    const auto [far, frr] = rates(t);
    if (far <= frr) {
      const double d_prev = prev_far - prev_frr;
      const double d_cur = far - frr;
      if (d_prev - d_cur <= 0.0) return frr;
      const double alpha = d_prev / (d_prev - d_cur);
      return prev_frr + alpha * (frr - prev_frr);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return 0.0;
}

// Seeded pseudo-random helpers for test data.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit(rng);
}
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
  return lo + static_cast<int>(unit(rng) * (hi - lo + 1));
}

}  // namespace oracle
