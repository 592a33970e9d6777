// tests/test_signal.cpp
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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/io.hpp"
#include "dsrc/mel.hpp"
#include "oracles.hpp"

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

dsrc::AudioClip tone(double freq, double seconds, int sr = 16000,
                     double amp = 0.5) {
  dsrc::AudioClip clip;
  clip.sample_rate = sr;
  const auto n = static_cast<std::size_t>(seconds * sr);
  clip.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    clip.samples[t] = static_cast<float>(amp * std::sin(2.0 * M_PI * freq * t / sr));
  return clip;
}

// raw 16-bit interleaved WAV writer, independent of the library writer
void write_wav_raw(const std::string& path,
                   const std::vector<std::vector<std::int16_t>>& channels,
                   int sr) {
  dsrc::detail::ByteWriter w;
  const int nch = static_cast<int>(channels.size());
  const auto frames = static_cast<std::uint32_t>(channels[0].size());
  const std::uint32_t data_bytes = frames * 2 * nch;
  w.put_raw("RIFF", 4);
  w.put_u32(36 + data_bytes);
  w.put_raw("WAVE", 4);
  w.put_raw("fmt ", 4);
  w.put_u32(16);
  w.put_u16(1);
  w.put_u16(static_cast<std::uint16_t>(nch));
  w.put_u32(static_cast<std::uint32_t>(sr));
  w.put_u32(static_cast<std::uint32_t>(sr * 2 * nch));
  w.put_u16(static_cast<std::uint16_t>(2 * nch));
  w.put_u16(16);
  w.put_raw("data", 4);
  w.put_u32(data_bytes);
  for (std::uint32_t i = 0; i < frames; ++i)
    for (int c = 0; c < nch; ++c)
      w.put_u16(static_cast<std::uint16_t>(channels[c][i]));
  dsrc::detail::write_file(path, w.bytes);
}

}  // namespace

TEST_CASE("load_audio reads 16-bit mono silence") {
  const std::string path = temp_path("dsrc_silence.wav");
  write_wav_raw(path, {std::vector<std::int16_t>(16000, 0)}, 16000);
  const dsrc::AudioClip clip = dsrc::load_audio(path);
  REQUIRE(clip.sample_rate == 16000);
  REQUIRE(clip.samples.size() == 16000);
  for (float s : clip.samples) REQUIRE(s == 0.0f);
  std::remove(path.c_str());
}

TEST_CASE("load_audio scales -32768 to exactly -1") {
  const std::string path = temp_path("dsrc_scale.wav");
  write_wav_raw(path, {{-32768, 32767, 0, -16384}}, 16000);
  const dsrc::AudioClip clip = dsrc::load_audio(path);
  REQUIRE(clip.samples[0] == -1.0f);
  REQUIRE(clip.samples[1] == Catch::Approx(32767.0 / 32768.0));
  REQUIRE(clip.samples[2] == 0.0f);
  REQUIRE(clip.samples[3] == -0.5f);
  std::remove(path.c_str());
}

TEST_CASE("load_audio takes the first channel of a stereo file") {
  std::mt19937_64 rng(7);
  std::vector<std::int16_t> left(500), right(500);
  for (int i = 0; i < 500; ++i) {
    left[i] = static_cast<std::int16_t>(oracle::uniform_int(rng, -3000, 3000));
    right[i] = static_cast<std::int16_t>(oracle::uniform_int(rng, -3000, 3000));
  }
  const std::string path = temp_path("dsrc_stereo.wav");
  write_wav_raw(path, {left, right}, 8000);
  const dsrc::AudioClip clip = dsrc::load_audio(path);
  REQUIRE(clip.samples.size() == 500);  // length preserved
  for (int i = 0; i < 500; ++i)         // channel-split oracle
    REQUIRE(clip.samples[i] == Catch::Approx(left[i] / 32768.0));
  std::remove(path.c_str());
}

TEST_CASE("load_audio error paths") {
  REQUIRE_THROWS_AS(dsrc::load_audio(temp_path("dsrc_does_not_exist.wav")),
                    dsrc::IoError);

  const std::string path = temp_path("dsrc_empty.wav");
  write_wav_raw(path, {{1}}, 16000);
  // truncate the data chunk to zero frames
  auto bytes = dsrc::detail::read_file(path);
  bytes[40] = bytes[41] = bytes[42] = bytes[43] = 0;  // data size
  bytes.resize(44);
  dsrc::detail::write_file(path, bytes);
  REQUIRE_THROWS_AS(dsrc::load_audio(path), dsrc::FormatError);
  std::remove(path.c_str());
}

TEST_CASE("save then load round-trips sample values") {
  dsrc::AudioClip clip = tone(440.0, 0.05);
  const std::string path = temp_path("dsrc_roundtrip.wav");
  dsrc::save_audio(path, clip);
  const dsrc::AudioClip back = dsrc::load_audio(path);
  REQUIRE(back.samples.size() == clip.samples.size());
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    REQUIRE(std::abs(back.samples[i] - clip.samples[i]) < 1.0f / 32000.0f);
  std::remove(path.c_str());
}

TEST_CASE("mel of silence sits at the log floor") {
  dsrc::AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.assign(4096, 0.0f);
  dsrc::MelConfig cfg;
  const dsrc::MelSpectrogram mel = dsrc::mel_spectrogram(clip, cfg);
  REQUIRE(mel.num_frames == dsrc::frame_count(4096, cfg.window, cfg.hop));
  for (double v : mel.values) REQUIRE(v == std::log(cfg.log_floor));
}

TEST_CASE("frame count formula") {
  dsrc::MelConfig cfg;
  // T = window + 3 hops -> exactly 4 frames
  dsrc::AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.assign(cfg.window + 3 * cfg.hop, 0.1f);
  REQUIRE(dsrc::mel_spectrogram(clip, cfg).num_frames == 4);

  // property over random shapes
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const int window = oracle::uniform_int(rng, 1, 300);
    const int hop = oracle::uniform_int(rng, 1, window);
    const std::size_t t =
        static_cast<std::size_t>(window) + oracle::uniform_int(rng, 0, 1000);
    const int expected = static_cast<int>((t - window) / hop) + 1;
    REQUIRE(dsrc::frame_count(t, window, hop) == expected);
  }
}

TEST_CASE("pure tone peaks in the mel band nearest its frequency") {
  dsrc::MelConfig cfg;
  const dsrc::AudioClip clip = tone(1000.0, 0.5);
  const dsrc::MelSpectrogram mel = dsrc::mel_spectrogram(clip, cfg);

  // band centers from the filterbank construction
  const std::vector<double> centers = dsrc::mel_band_centers_hz(cfg);
  int nearest = 0;
  for (int b = 1; b < cfg.mel_bands; ++b)
    if (std::abs(centers[b] - 1000.0) < std::abs(centers[nearest] - 1000.0))
      nearest = b;

  for (int t = 0; t < mel.num_frames; ++t) {
    int argmax = 0;
    for (int b = 1; b < cfg.mel_bands; ++b)
      if (mel.at(t, b) > mel.at(t, argmax)) argmax = b;
    REQUIRE(argmax == nearest);
  }
}

TEST_CASE("mel matches the direct-DFT oracle") {
  dsrc::MelConfig cfg;
  cfg.fft_size = 256;
  cfg.window = 256;
  cfg.hop = 128;
  cfg.mel_bands = 20;
  cfg.fmax = 8000.0;
  dsrc::AudioClip clip = tone(523.0, 0.08);
  std::mt19937_64 rng(3);
  for (auto& s : clip.samples)
    s += static_cast<float>(oracle::uniform(rng, -0.01, 0.01));
  const dsrc::MelSpectrogram mel = dsrc::mel_spectrogram(clip, cfg);
  const std::vector<double> ref = oracle::naive_mel(clip, cfg);
  REQUIRE(mel.values.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    REQUIRE(mel.values[i] == Catch::Approx(ref[i]).margin(1e-8));
}

TEST_CASE("doubling amplitude raises above-floor cells by log 4") {
  dsrc::MelConfig cfg;
  dsrc::AudioClip clip = tone(700.0, 0.3, 16000, 0.25);
  dsrc::AudioClip doubled = clip;
  for (auto& s : doubled.samples) s *= 2.0f;
  const dsrc::MelSpectrogram a = dsrc::mel_spectrogram(clip, cfg);
  const dsrc::MelSpectrogram b = dsrc::mel_spectrogram(doubled, cfg);
  const double floor_val = std::log(cfg.log_floor);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] > floor_val + 1.0 && b.values[i] > floor_val + 1.0)
      REQUIRE(b.values[i] - a.values[i] == Catch::Approx(std::log(4.0)).margin(1e-6));
  }
}

TEST_CASE("mel is deterministic") {
  const dsrc::AudioClip clip = tone(333.0, 0.2);
  dsrc::MelConfig cfg;
  const dsrc::MelSpectrogram a = dsrc::mel_spectrogram(clip, cfg);
  const dsrc::MelSpectrogram b = dsrc::mel_spectrogram(clip, cfg);
  REQUIRE(a.values == b.values);
}

TEST_CASE("mel rejects short clips and bad configs") {
  dsrc::MelConfig cfg;
  dsrc::AudioClip clip = tone(440.0, 0.01);  // 160 samples < window
  REQUIRE_THROWS_AS(dsrc::mel_spectrogram(clip, cfg), dsrc::Error);

  dsrc::MelConfig bad = cfg;
  bad.hop = bad.window + 1;
  REQUIRE_THROWS_AS(dsrc::mel_spectrogram(tone(440.0, 0.5), bad), dsrc::Error);
  bad = cfg;
  bad.fmax = 9000.0;  // above Nyquist at 16 kHz
  REQUIRE_THROWS_AS(dsrc::mel_spectrogram(tone(440.0, 0.5), bad), dsrc::Error);
  bad = cfg;
  bad.log_floor = 0.0;
  REQUIRE_THROWS_AS(dsrc::mel_spectrogram(tone(440.0, 0.5), bad), dsrc::Error);
}
