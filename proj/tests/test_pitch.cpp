// tests/test_pitch.cpp
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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/metrics.hpp"
#include "dsrc/pitch.hpp"
#include "oracles.hpp"

namespace {

dsrc::AudioClip sine(double freq, double seconds, int sr = 16000,
                     double amp = 0.5) {
  dsrc::AudioClip clip;
  clip.sample_rate = sr;
  clip.samples.resize(static_cast<std::size_t>(seconds * sr));
  for (std::size_t t = 0; t < clip.samples.size(); ++t)
    clip.samples[t] = static_cast<float>(amp * std::sin(2.0 * M_PI * freq * t / sr));
  return clip;
}

dsrc::AudioClip sawtooth(double freq, double seconds, int sr = 16000,
                         double amp = 0.4) {
  dsrc::AudioClip clip;
  clip.sample_rate = sr;
  clip.samples.resize(static_cast<std::size_t>(seconds * sr));
  for (std::size_t t = 0; t < clip.samples.size(); ++t) {
    const double phase = std::fmod(freq * t / sr, 1.0);
    clip.samples[t] = static_cast<float>(amp * (2.0 * phase - 1.0));
  }
  return clip;
}

double median_voiced_f0(const dsrc::F0Track& track) {
  std::vector<float> voiced;
  for (std::size_t i = 0; i < track.size(); ++i)
    if (track.voiced[i]) voiced.push_back(track.f0[i]);
  REQUIRE(!voiced.empty());
  std::sort(voiced.begin(), voiced.end());
  return voiced[voiced.size() / 2];
}

double voiced_fraction(const dsrc::F0Track& track, std::size_t begin,
                       std::size_t end) {
  std::size_t v = 0;
  for (std::size_t i = begin; i < end; ++i) v += track.voiced[i] ? 1 : 0;
  return static_cast<double>(v) / static_cast<double>(end - begin);
}

}  // namespace

TEST_CASE("pure sine at 220 Hz is tracked") {
  const dsrc::F0Track track = dsrc::extract_f0(sine(220.0, 2.0));
  REQUIRE(track.frame_rate == Catch::Approx(200.0));
  REQUIRE(voiced_fraction(track, 0, track.size()) >= 0.9);
  REQUIRE(median_voiced_f0(track) == Catch::Approx(220.0).epsilon(0.05));
}

TEST_CASE("sines and sawtooths across the range have low gross error") {
  for (const double f : {110.0, 220.0, 330.0}) {
    for (const bool saw : {false, true}) {
      const dsrc::AudioClip clip = saw ? sawtooth(f, 2.0) : sine(f, 2.0);
      const dsrc::F0Track track = dsrc::extract_f0(clip);
      REQUIRE(voiced_fraction(track, 0, track.size()) >= 0.9);
      REQUIRE(median_voiced_f0(track) == Catch::Approx(f).epsilon(0.05));
      std::size_t voiced = 0, gross = 0;
      for (std::size_t i = 0; i < track.size(); ++i) {
        if (!track.voiced[i]) continue;
        ++voiced;
        if (std::abs(track.f0[i] - f) / f > 0.2) ++gross;
      }
      REQUIRE(static_cast<double>(gross) < 0.05 * static_cast<double>(voiced));
    }
  }
}

TEST_CASE("digital silence is fully unvoiced") {
  dsrc::AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.assign(16000, 0.0f);
  const dsrc::F0Track track = dsrc::extract_f0(clip);
  for (std::size_t i = 0; i < track.size(); ++i) {
    REQUIRE(track.voiced[i] == 0);
    REQUIRE(track.f0[i] == 0.0f);
  }
}

TEST_CASE("amplitude ramp to zero loses voicing in the tail") {
  dsrc::AudioClip clip = sine(220.0, 2.0);
  const std::size_t half = clip.samples.size() / 2;
  for (std::size_t t = half; t < clip.samples.size(); ++t) {
    const double fade = 1.0 - static_cast<double>(t - half) / half;
    clip.samples[t] *= static_cast<float>(fade * fade);
  }
  const dsrc::F0Track track = dsrc::extract_f0(clip);
  const std::size_t mid = track.size() / 2;
  REQUIRE(voiced_fraction(track, 0, mid) >
          voiced_fraction(track, mid, track.size()));
}

TEST_CASE("extract_f0 is deterministic and respects the range invariant") {
  const dsrc::AudioClip clip = sine(150.0, 1.0);
  const dsrc::PitchConfig cfg;
  const dsrc::F0Track a = dsrc::extract_f0(clip, cfg);
  const dsrc::F0Track b = dsrc::extract_f0(clip, cfg);
  REQUIRE(a.f0 == b.f0);
  REQUIRE(a.voiced == b.voiced);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.voiced[i]) {
      REQUIRE(a.f0[i] >= cfg.fmin);
      REQUIRE(a.f0[i] <= cfg.fmax);
    } else {
      REQUIRE(a.f0[i] == 0.0f);
    }
  }
}

TEST_CASE("extract_f0 error paths") {
  REQUIRE_THROWS_AS(dsrc::extract_f0(sine(220.0, 0.01)), dsrc::Error);
  dsrc::PitchConfig bad;
  bad.fmin = 500.0;
  bad.fmax = 400.0;
  REQUIRE_THROWS_AS(dsrc::extract_f0(sine(220.0, 1.0), bad), dsrc::Error);
  bad = dsrc::PitchConfig{};
  bad.fmax = 9000.0;
  REQUIRE_THROWS_AS(dsrc::extract_f0(sine(220.0, 1.0), bad), dsrc::Error);
}

TEST_CASE("speaker_mean_f0 averages voiced frames only") {
  dsrc::F0Track t;
  t.frame_rate = 200.0;
  t.f0 = {100.0f, 110.0f, 90.0f, 0.0f};
  t.voiced = {1, 1, 1, 0};
  REQUIRE(dsrc::speaker_mean_f0(t) == Catch::Approx(100.0));

  dsrc::F0Track a, b;
  a.frame_rate = b.frame_rate = 200.0;
  a.f0 = {100.0f};
  a.voiced = {1};
  b.f0 = {200.0f};
  b.voiced = {1};
  const std::vector<dsrc::F0Track> tracks = {a, b};
  REQUIRE(dsrc::speaker_mean_f0(tracks) == Catch::Approx(150.0));

  dsrc::F0Track unvoiced;
  unvoiced.f0 = {0.0f, 0.0f};
  unvoiced.voiced = {0, 0};
  REQUIRE_THROWS_AS(dsrc::speaker_mean_f0(unvoiced), dsrc::Error);
}

TEST_CASE("flatten_f0 rewrites voiced frames and keeps voicing") {
  dsrc::F0Track t;
  t.frame_rate = 200.0;
  t.f0 = {100.0f, 110.0f, 90.0f, 0.0f};
  t.voiced = {1, 1, 1, 0};
  const dsrc::F0Track flat = dsrc::flatten_f0(t, 100.0);
  REQUIRE(flat.f0 == std::vector<float>{100.0f, 100.0f, 100.0f, 0.0f});
  REQUIRE(flat.voiced == t.voiced);

  // idempotent for a fixed mean
  const dsrc::F0Track twice = dsrc::flatten_f0(flat, 100.0);
  REQUIRE(twice.f0 == flat.f0);
  REQUIRE(twice.voiced == flat.voiced);

  // never changes voicing decisions, for any mean
  for (const double mean : {55.5, 100.0, 123.4, 399.0})
    REQUIRE(dsrc::vde(t, dsrc::flatten_f0(t, mean)) == 0.0);

  REQUIRE_THROWS_AS(dsrc::flatten_f0(t, 0.0), dsrc::Error);
  REQUIRE_THROWS_AS(dsrc::flatten_f0(t, -10.0), dsrc::Error);
}

TEST_CASE("FFE of a gently flattened two-frame track is zero") {
  dsrc::F0Track t;
  t.f0 = {100.0f, 130.0f};
  t.voiced = {1, 1};
  const dsrc::F0Track flat = dsrc::flatten_f0(t, 115.0);
  // per-frame deviations 15% and ~11.5%, both within the 20% bound
  REQUIRE(dsrc::ffe(t, flat) == 0.0);
  REQUIRE(oracle::naive_ffe(t, flat) == 0.0);
}

TEST_CASE("F0 track file round-trips") {
  dsrc::F0Track t;
  t.frame_rate = 200.0;
  t.f0 = {0.0f, 123.5f, 99.25f};
  t.voiced = {0, 1, 1};
  const std::string path =
      (std::filesystem::temp_directory_path() / "dsrc_track.f0tk").string();
  dsrc::save_f0_track(path, t);
  const dsrc::F0Track back = dsrc::load_f0_track(path);
  REQUIRE(back.frame_rate == t.frame_rate);
  REQUIRE(back.f0 == t.f0);
  REQUIRE(back.voiced == t.voiced);

  // byte-level round trip
  const auto bytes = dsrc::detail::read_file(path);
  dsrc::save_f0_track(path, back);
  REQUIRE(dsrc::detail::read_file(path) == bytes);

  // truncation is rejected
  auto cut = bytes;
  cut.pop_back();
  dsrc::detail::write_file(path, cut);
  REQUIRE_THROWS_AS(dsrc::load_f0_track(path), dsrc::FormatError);
  std::remove(path.c_str());
}
