// dsrc/runconfig.hpp
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
// Run configuration for the CLI: a flat "[section]" / "key = value" text
// file mapped onto the pipeline configs. Unknown keys are rejected.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dsrc/bitstream.hpp"
#include "dsrc/common.hpp"
#include "dsrc/mel.hpp"
#include "dsrc/pitch.hpp"
#include "dsrc/vocoder.hpp"

namespace dsrc {

struct RunConfig {
  CodecConfig codec;
  PitchConfig pitch;
  MelConfig mel;
  GeneratorConfig generator;  // vocabularies mirror the codec fields
  DiscriminatorConfig discriminator;
  int feature_hop = 0;     // 0: use codec.content_hop
  int f0_downsample = 16;  // F0 frames per code window
  std::uint64_t seed = 0;

  // Paths may also be "random:SEED" (weights) or "random:SEED:N"
  // (speaker table) to synthesize seeded artifacts in memory.
  std::string content_codebook;
  std::string f0_codebook;
  std::string generator_weights;
  std::string discriminator_weights;
  std::string speaker_table;
};

// Default upsample factorization for a content hop.
inline std::vector<int> upsample_rates_for_hop(int hop) {
  if (hop == 320) return {5, 4, 4, 2, 2};
  if (hop == 160) return {5, 4, 2, 2, 2};
  std::vector<int> rates;
  int rest = hop;
  for (int f : {5, 4, 3, 2}) {
    while (rest % f == 0) {
      rates.push_back(f);
      rest /= f;
    }
  }
  if (rest > 1) rates.push_back(rest);
  return rates;
}

namespace detail {

class IniFile {
 public:
  explicit IniFile(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        DSRC_CHECK_FMT(t.back() == ']', path, ":", line_no,
                       ": unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const std::size_t eq = t.find('=');
      DSRC_CHECK_FMT(eq != std::string::npos, path, ":", line_no,
                     ": expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      DSRC_CHECK_FMT(!key.empty(), path, ":", line_no, ": empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      DSRC_CHECK_FMT(!values_.count(full), path, ":", line_no,
                     ": duplicate key \"", full, "\"");
      values_[full] = value;
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& dflt) {
    consumed_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? dflt : it->second;
  }
  double get_double(const std::string& key, double dflt) {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    return parse_double(key, it->second);
  }
  int get_int(const std::string& key, int dflt) {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    return parse_int(key, it->second);
  }
  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    DSRC_CHECK_FMT(used == it->second.size(), path_, ": key \"", key,
                   "\": bad integer \"", it->second, "\"");
    return v;
  }
  std::vector<int> get_int_list(const std::string& key,
                                std::vector<int> dflt) {
    consumed_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return dflt;
    std::vector<int> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ','))
      out.push_back(parse_int(key, trim(item)));
    DSRC_CHECK_FMT(!out.empty(), path_, ": key \"", key, "\": empty list");
    return out;
  }

  void reject_unknown() const {
    for (const auto& [key, value] : values_)
      DSRC_CHECK_FMT(consumed_.count(key), path_, ": unknown key \"", key,
                     "\"");
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  int parse_int(const std::string& key, const std::string& v) const {
    std::size_t used = 0;
    int out = 0;
    try {
      out = std::stoi(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    DSRC_CHECK_FMT(used == v.size(), path_, ": key \"", key,
                   "\": bad integer \"", v, "\"");
    return out;
  }
  double parse_double(const std::string& key, const std::string& v) const {
    std::size_t used = 0;
    double out = 0;
    try {
      out = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    DSRC_CHECK_FMT(used == v.size(), path_, ": key \"", key,
                   "\": bad number \"", v, "\"");
    return out;
  }

  std::string path_;
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

}  // namespace detail

inline RunConfig load_run_config(const std::string& path) {
  detail::IniFile ini(path);
  RunConfig rc;

  rc.seed = ini.get_u64("seed", 0);

  rc.codec.sample_rate = ini.get_int("codec.sample_rate", 16000);
  rc.codec.content_hop = ini.get_int("codec.content_hop", 320);
  rc.codec.content_vocab = ini.get_int("codec.content_vocab", 100);
  rc.codec.f0_vocab = ini.get_int("codec.f0_vocab", 20);
  rc.codec.f0_group = ini.get_int("codec.f0_group", 0);
  rc.f0_downsample = ini.get_int("codec.f0_downsample", 16);

  rc.pitch.window_ms = ini.get_double("pitch.window_ms", 20.0);
  rc.pitch.hop_ms = ini.get_double("pitch.hop_ms", 5.0);
  rc.pitch.fmin = ini.get_double("pitch.fmin", 60.0);
  rc.pitch.fmax = ini.get_double("pitch.fmax", 400.0);
  rc.pitch.voicing_threshold = ini.get_double("pitch.voicing_threshold", 0.45);
  rc.pitch.energy_gate_db = ini.get_double("pitch.energy_gate_db", 30.0);
  rc.pitch.octave_cost = ini.get_double("pitch.octave_cost", 0.35);
  rc.pitch.octave_bias = ini.get_double("pitch.octave_bias", 0.01);

  rc.mel.fft_size = ini.get_int("mel.fft_size", 1024);
  rc.mel.window = ini.get_int("mel.window", 1024);
  rc.mel.hop = ini.get_int("mel.hop", 256);
  rc.mel.mel_bands = ini.get_int("mel.mel_bands", 80);
  rc.mel.fmin = ini.get_double("mel.fmin", 0.0);
  rc.mel.fmax = ini.get_double("mel.fmax", 8000.0);
  rc.mel.log_floor = ini.get_double("mel.log_floor", 1e-5);

  rc.feature_hop = ini.get_int("features.hop", 0);

  rc.generator.content_embed_dim = ini.get_int("vocoder.content_embed_dim", 128);
  rc.generator.f0_embed_dim = ini.get_int("vocoder.f0_embed_dim", 128);
  rc.generator.hidden_channels = ini.get_int("vocoder.hidden_channels", 128);
  rc.generator.upsample_rates = ini.get_int_list(
      "vocoder.upsample_rates", upsample_rates_for_hop(rc.codec.content_hop));
  rc.discriminator.channels =
      ini.get_int_list("discriminator.channels", {8, 16, 32});

  rc.content_codebook = ini.get_string("paths.content_codebook", "");
  rc.f0_codebook = ini.get_string("paths.f0_codebook", "");
  rc.generator_weights = ini.get_string("paths.generator", "");
  rc.discriminator_weights = ini.get_string("paths.discriminator", "");
  rc.speaker_table = ini.get_string("paths.speaker_table", "");

  ini.reject_unknown();

  // The F0 code rate is the pitch frame rate / downsample; express it in
  // content frames per F0 code unless the file pinned it explicitly.
  if (rc.codec.f0_group == 0) {
    const double pitch_rate = 1000.0 / rc.pitch.hop_ms;
    const double content_rate = rc.codec.content_frame_rate();
    const double group =
        content_rate / (pitch_rate / rc.f0_downsample);
    rc.codec.f0_group = std::max(1, static_cast<int>(std::lround(group)));
  }

  rc.generator.content_vocab = rc.codec.content_vocab;
  rc.generator.f0_vocab = rc.codec.f0_vocab;
  validate(rc.codec);
  return rc;
}

}  // namespace dsrc
