// dsrc/pitch.hpp
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
// F0 tracking: per-frame normalized-autocorrelation candidates, Viterbi
// path smoothing with an octave-jump penalty, correlation + energy gated
// voicing. Pitch statistics and F0 flattening live here too.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/common.hpp"
#include "dsrc/io.hpp"
#include "dsrc/mel.hpp"  // frame_count

namespace dsrc {

struct PitchConfig {
  double window_ms = 20.0;
  double hop_ms = 5.0;
  double fmin = 60.0;   // Hz, search range
  double fmax = 400.0;  // Hz
  double voicing_threshold = 0.45;  // peak normalized correlation
  double energy_gate_db = 30.0;     // below utterance peak RMS
  double octave_cost = 0.35;  // transition penalty per octave jump
  double octave_bias = 0.02;  // per-octave preference for shorter lags
  int max_candidates = 8;
};

struct F0Track {
  std::vector<float> f0;          // Hz, 0 for unvoiced frames
  std::vector<std::uint8_t> voiced;
  double frame_rate = 0.0;        // Hz (1000 / hop_ms)

  std::size_t size() const { return f0.size(); }
};

namespace detail {

struct PitchCandidate {
  double freq = 0.0;
  double corr = 0.0;   // raw normalized autocorrelation at the peak
  double score = 0.0;  // corr with the lag bias applied
};

// Local maxima of the normalized autocorrelation within [lag_min, lag_max],
// parabolically refined, scored with a small per-octave preference for
// shorter lags so period multiples of a strong peak do not win outright.
// The frame arrives 2x linearly upsampled (lags are half-samples): with
// integer lags alone, a harmonic-rich signal whose true period falls
// between lags correlates visibly worse at the true lag than at a
// near-integer multiple of it, and the tracker drops an octave.
inline std::vector<PitchCandidate> frame_candidates(
    const double* x, int window, int lag_min, int lag_max, double sample_rate,
    const PitchConfig& cfg) {
  std::vector<double> r(lag_max + 2, 0.0);
  for (int lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
    if (lag < 1 || lag > window - 2) continue;
    double num = 0.0, e0 = 0.0, e1 = 0.0;
    const int n = window - lag;
    for (int t = 0; t < n; ++t) {
      const double a = x[t], b = x[t + lag];
      num += a * b;
      e0 += a * a;
      e1 += b * b;
    }
    const double denom = std::sqrt(e0 * e1);
    r[lag] = denom > 1e-12 ? num / denom : 0.0;
  }

  std::vector<PitchCandidate> cands;
  for (int lag = lag_min; lag <= lag_max; ++lag) {
    if (lag < 2 || lag > window - 2) continue;
    if (!(r[lag] > r[lag - 1] && r[lag] >= r[lag + 1])) continue;
    if (r[lag] <= 0.0) continue;
    // parabolic peak refinement
    const double dr = 0.5 * (r[lag + 1] - r[lag - 1]);
    const double d2 = 2.0 * r[lag] - r[lag - 1] - r[lag + 1];
    double delta = d2 > 1e-12 ? dr / d2 : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    const double lag_refined = lag + delta;
    const double corr = std::min(1.0, r[lag] + 0.5 * dr * delta);
    PitchCandidate c;
    c.freq = std::clamp(sample_rate / lag_refined, cfg.fmin, cfg.fmax);
    c.corr = corr;
    c.score = corr - cfg.octave_bias * std::log2(lag_refined / lag_min);
    cands.push_back(c);
  }
  std::sort(cands.begin(), cands.end(),
            [](const PitchCandidate& a, const PitchCandidate& b) {
              return a.score > b.score;
            });
  if (static_cast<int>(cands.size()) > cfg.max_candidates)
    cands.resize(cfg.max_candidates);
  // ascending frequency, so strict-< cost comparisons settle ties low
  std::sort(cands.begin(), cands.end(),
            [](const PitchCandidate& a, const PitchCandidate& b) {
              return a.freq < b.freq;
            });
  return cands;
}

}  // namespace detail

inline F0Track extract_f0(const AudioClip& clip, const PitchConfig& cfg = {}) {
  const int sr = clip.sample_rate;
  DSRC_CHECK(sr > 0, "extract_f0: clip has no sample rate");
  DSRC_CHECK(cfg.fmin > 0 && cfg.fmin < cfg.fmax && cfg.fmax < sr / 2.0,
             "extract_f0: invalid range, need 0 < fmin < fmax < sample_rate/2");
  DSRC_CHECK(sr >= 2 * cfg.fmax, "extract_f0: sample rate ", sr,
             " too low for fmax ", cfg.fmax);
  DSRC_CHECK(cfg.hop_ms > 0 && cfg.hop_ms <= cfg.window_ms,
             "extract_f0: need 0 < hop <= window");

  const int window = static_cast<int>(std::lround(cfg.window_ms * sr / 1000.0));
  const int hop = static_cast<int>(std::lround(cfg.hop_ms * sr / 1000.0));
  DSRC_CHECK(clip.size() >= static_cast<std::size_t>(window),
             "extract_f0: clip too short (", clip.size(), " samples, window ",
             window, ")");
  // correlation runs on a 2x linearly upsampled signal (half-sample lags)
  const double sr_up = 2.0 * sr;
  const int window_up = 2 * window - 1;
  const int lag_min =
      std::max(2, static_cast<int>(std::ceil(sr_up / cfg.fmax)));
  const int lag_max = static_cast<int>(std::floor(sr_up / cfg.fmin));
  DSRC_CHECK(lag_max > lag_min && lag_max <= window_up - 2,
             "extract_f0: invalid range, fmin ", cfg.fmin,
             " needs a longer analysis window");

  const int num_frames = frame_count(clip.size(), window, hop);

  // frame RMS and utterance peak, for the energy gate
  std::vector<double> rms(num_frames);
  double peak_rms = 0.0;
  for (int i = 0; i < num_frames; ++i) {
    const float* x = clip.samples.data() + static_cast<std::size_t>(i) * hop;
    double e = 0.0;
    for (int t = 0; t < window; ++t) e += static_cast<double>(x[t]) * x[t];
    rms[i] = std::sqrt(e / window);
    peak_rms = std::max(peak_rms, rms[i]);
  }
  const double rms_gate = peak_rms * std::pow(10.0, -cfg.energy_gate_db / 20.0);

  std::vector<std::vector<detail::PitchCandidate>> cands(num_frames);
  std::vector<std::uint8_t> voiced(num_frames, 0);
  std::vector<double> frame_up(window_up);
  for (int i = 0; i < num_frames; ++i) {
    if (peak_rms <= 0.0 || rms[i] < rms_gate) continue;  // gated out
    const float* x = clip.samples.data() + static_cast<std::size_t>(i) * hop;
    for (int t = 0; t < window; ++t) {
      frame_up[2 * t] = x[t];
      if (t + 1 < window) frame_up[2 * t + 1] = 0.5 * (x[t] + x[t + 1]);
    }
    cands[i] = detail::frame_candidates(frame_up.data(), window_up, lag_min,
                                        lag_max, sr_up, cfg);
    double peak_corr = 0.0;
    for (const auto& c : cands[i]) peak_corr = std::max(peak_corr, c.corr);
    voiced[i] = peak_corr > cfg.voicing_threshold ? 1 : 0;
  }

  // Viterbi over candidates; unvoiced frames are a single zero-cost state
  // that breaks the octave-penalty chain.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(num_frames);
  std::vector<std::vector<int>> back(num_frames);
  std::vector<double> prev_cost;  // costs of previous frame's states
  std::vector<double> prev_freq;
  for (int i = 0; i < num_frames; ++i) {
    const int n_states = voiced[i] ? static_cast<int>(cands[i].size()) : 1;
    cost[i].assign(n_states, kInf);
    back[i].assign(n_states, -1);
    for (int s = 0; s < n_states; ++s) {
      const double local = voiced[i] ? 1.0 - cands[i][s].score : 0.0;
      const double f = voiced[i] ? cands[i][s].freq : 0.0;
      if (i == 0) {
        cost[i][s] = local;
        continue;
      }
      for (std::size_t p = 0; p < prev_cost.size(); ++p) {
        double trans = 0.0;
        if (f > 0.0 && prev_freq[p] > 0.0)
          trans = cfg.octave_cost * std::abs(std::log2(f / prev_freq[p]));
        const double total = prev_cost[p] + trans + local;
        if (total < cost[i][s]) {
          cost[i][s] = total;
          back[i][s] = static_cast<int>(p);
        }
      }
    }
    prev_cost = cost[i];
    prev_freq.assign(n_states, 0.0);
    for (int s = 0; s < n_states; ++s)
      prev_freq[s] = voiced[i] ? cands[i][s].freq : 0.0;
  }

  F0Track track;
  track.frame_rate = 1000.0 / cfg.hop_ms;
  track.f0.assign(num_frames, 0.0f);
  track.voiced = voiced;
  if (num_frames > 0) {
    int best = 0;
    for (std::size_t s = 1; s < cost[num_frames - 1].size(); ++s)
      if (cost[num_frames - 1][s] < cost[num_frames - 1][best])
        best = static_cast<int>(s);
    for (int i = num_frames - 1; i >= 0; --i) {
      if (voiced[i] && !cands[i].empty())
        track.f0[i] = static_cast<float>(cands[i][best].freq);
      best = back[i][best];
      if (best < 0) best = 0;
    }
  }
  // a voiced frame that somehow lost all candidates reverts to unvoiced
  for (int i = 0; i < num_frames; ++i)
    if (voiced[i] && track.f0[i] <= 0.0f) track.voiced[i] = 0;
  return track;
}

// Arithmetic mean of f0 over voiced frames across all tracks.
inline double speaker_mean_f0(std::span<const F0Track> tracks) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const F0Track& t : tracks) {
    DSRC_CHECK(t.f0.size() == t.voiced.size(), "speaker_mean_f0: corrupt track");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.voiced[i]) {
        sum += t.f0[i];
        ++n;
      }
    }
  }
  DSRC_CHECK(n > 0, "speaker_mean_f0: no voiced frames in input");
  return sum / static_cast<double>(n);
}

inline double speaker_mean_f0(const F0Track& track) {
  return speaker_mean_f0(std::span<const F0Track>(&track, 1));
}

// Sets every voiced frame to `mean`; voicing decisions are untouched.
inline F0Track flatten_f0(const F0Track& track, double mean) {
  DSRC_CHECK(mean > 0.0 && std::isfinite(mean),
             "flatten_f0: mean must be positive and finite, got ", mean);
  F0Track out = track;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.f0[i] = out.voiced[i] ? static_cast<float>(mean) : 0.0f;
  return out;
}

// F0 track file: magic "F0TK", version u8, frame_rate f32 LE, count u32 LE,
// then per frame f32 f0 + u8 voiced.
inline void save_f0_track(const std::string& path, const F0Track& track) {
  detail::ByteWriter w;
  w.put_raw("F0TK", 4);
  w.put_u8(1);
  w.put_f32(static_cast<float>(track.frame_rate));
  w.put_u32(static_cast<std::uint32_t>(track.size()));
  for (std::size_t i = 0; i < track.size(); ++i) {
    w.put_f32(track.f0[i]);
    w.put_u8(track.voiced[i] ? 1 : 0);
  }
  detail::write_file(path, w.bytes);
}

inline F0Track load_f0_track(const std::string& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  detail::ByteReader r(bytes, "F0TK " + path);
  r.expect_magic("F0TK");
  const int version = r.get_u8();
  DSRC_CHECK_FMT(version == 1, "F0TK ", path, ": unsupported version ",
                 version);
  F0Track track;
  track.frame_rate = r.get_f32();
  const std::uint32_t count = r.get_u32();
  track.f0.resize(count);
  track.voiced.resize(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    track.f0[i] = r.get_f32();
    track.voiced[i] = r.get_u8() ? 1 : 0;
  }
  DSRC_CHECK_FMT(r.remaining() == 0, "F0TK ", path, ": trailing bytes");
  return track;
}

}  // namespace dsrc
