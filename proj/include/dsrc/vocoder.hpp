// dsrc/vocoder.hpp
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
// Forward-only neural vocoder. The generator embeds content and F0 codes
// through look-up tables, concatenates the per-frame speaker embedding,
// and runs a transposed-convolution upsampling stack with multi-kernel
// residual dilated blocks. Multi-period and multi-scale discriminator
// ensembles record per-layer activations for the loss suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/common.hpp"
#include "dsrc/quantize.hpp"
#include "dsrc/tensor.hpp"

namespace dsrc {

// ---------------------------------------------------------------------------
// configs

struct GeneratorConfig {
  int content_vocab = 100;
  int f0_vocab = 20;
  int content_embed_dim = 128;
  int f0_embed_dim = 128;
  int speaker_dim = 256;
  int hidden_channels = 128;
  std::vector<int> upsample_rates = {5, 4, 4, 2, 2};  // product = content hop
  std::vector<int> resblock_kernels = {3, 7, 11};
  std::vector<int> resblock_dilations = {1, 3, 5};

  int input_dim() const { return content_embed_dim + f0_embed_dim + speaker_dim; }
  int upsample_product() const {
    int p = 1;
    for (int r : upsample_rates) p *= r;
    return p;
  }
  // channel width entering stage i (stage 0 is fed by the pre conv)
  int stage_channels(int i) const {
    return std::max(hidden_channels >> i, 2);
  }
  int num_stages() const { return static_cast<int>(upsample_rates.size()); }
};

inline void validate(const GeneratorConfig& cfg) {
  DSRC_CHECK(cfg.content_vocab >= 1 && cfg.f0_vocab >= 1,
             "generator: vocab sizes must be >= 1");
  DSRC_CHECK(cfg.content_embed_dim >= 1 && cfg.f0_embed_dim >= 1,
             "generator: embedding dims must be >= 1");
  DSRC_CHECK(cfg.speaker_dim == 256, "generator: speaker_dim must be 256");
  DSRC_CHECK(cfg.hidden_channels >= 2, "generator: hidden_channels too small");
  DSRC_CHECK(!cfg.upsample_rates.empty(), "generator: no upsample rates");
  for (int r : cfg.upsample_rates)
    DSRC_CHECK(r >= 1, "generator: upsample rate must be >= 1");
  DSRC_CHECK(!cfg.resblock_kernels.empty() && !cfg.resblock_dilations.empty(),
             "generator: residual block shape is empty");
  for (int k : cfg.resblock_kernels)
    DSRC_CHECK(k >= 1 && k % 2 == 1, "generator: residual kernels must be odd");
}

struct DiscriminatorConfig {
  std::vector<int> periods = {2, 3, 5, 7, 11};
  std::vector<int> scales = {1, 2, 4};
  std::vector<int> channels = {8, 16, 32};  // hidden widths of the stacks
};

// ---------------------------------------------------------------------------
// planar signal buffers and convolution primitives

namespace detail {

constexpr float kLeakySlope = 0.1f;

struct Plane {
  int channels = 0;
  int length = 0;
  std::vector<float> data;  // channels x length

  static Plane zeros(int ch, int len) {
    Plane p;
    p.channels = ch;
    p.length = len;
    p.data.assign(static_cast<std::size_t>(ch) * len, 0.0f);
    return p;
  }
  float* row(int c) { return data.data() + static_cast<std::size_t>(c) * length; }
  const float* row(int c) const {
    return data.data() + static_cast<std::size_t>(c) * length;
  }
};

inline void leaky_relu_inplace(Plane& p) {
  for (float& v : p.data) v = v > 0.0f ? v : kLeakySlope * v;
}

// 1-D convolution with "same" zero padding; weight is [out, in, k].
inline Plane conv1d_same(const Plane& in, const Tensor& weight,
                         const Tensor& bias, int dilation) {
  const int out_ch = weight.shape[0];
  const int in_ch = weight.shape[1];
  const int k = weight.shape[2];
  const int pad = dilation * (k - 1) / 2;
  const int len = in.length;
  Plane out = Plane::zeros(out_ch, len);
  std::vector<double> acc(len);
  for (int o = 0; o < out_ch; ++o) {
    std::fill(acc.begin(), acc.end(), static_cast<double>(bias.values[o]));
    for (int ci = 0; ci < in_ch; ++ci) {
      const float* x = in.row(ci);
      const float* w =
          weight.values.data() + (static_cast<std::size_t>(o) * in_ch + ci) * k;
      for (int j = 0; j < k; ++j) {
        const double wj = w[j];
        if (wj == 0.0) continue;
        const int off = j * dilation - pad;
        const int t0 = std::max(0, -off);
        const int t1 = std::min(len, len - off);
        for (int t = t0; t < t1; ++t) acc[t] += wj * x[t + off];
      }
    }
    float* y = out.row(o);
    for (int t = 0; t < len; ++t) y[t] = static_cast<float>(acc[t]);
  }
  return out;
}

// Transposed 1-D convolution with stride s and kernel k >= s; the full
// output of length (L-1)*s + k is trimmed by (k-s)/2 leading samples to
// exactly L*s, which keeps the per-stage length law exact.
inline Plane conv_transpose1d(const Plane& in, const Tensor& weight,
                              const Tensor& bias, int stride) {
  const int out_ch = weight.shape[0];
  const int in_ch = weight.shape[1];
  const int k = weight.shape[2];
  DSRC_CHECK(k >= stride, "conv_transpose1d: kernel smaller than stride");
  const int full = (in.length - 1) * stride + k;
  const int target = in.length * stride;
  const int left = (k - stride) / 2;
  Plane out = Plane::zeros(out_ch, target);
  std::vector<double> acc(full);
  for (int o = 0; o < out_ch; ++o) {
    std::fill(acc.begin(), acc.end(), static_cast<double>(bias.values[o]));
    for (int ci = 0; ci < in_ch; ++ci) {
      const float* x = in.row(ci);
      const float* w =
          weight.values.data() + (static_cast<std::size_t>(o) * in_ch + ci) * k;
      for (int i = 0; i < in.length; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        double* a = acc.data() + static_cast<std::size_t>(i) * stride;
        for (int j = 0; j < k; ++j) a[j] += w[j] * xi;
      }
    }
    float* y = out.row(o);
    for (int t = 0; t < target; ++t) y[t] = static_cast<float>(acc[t + left]);
  }
  return out;
}

// 2-D convolution over [channels, rows, cols] where the kernel spans
// (k, 1): each column is filtered independently along rows.
struct Grid {
  int channels = 0, rows = 0, cols = 0;
  std::vector<float> data;  // channels x rows x cols

  static Grid zeros(int ch, int r, int c) {
    Grid g;
    g.channels = ch;
    g.rows = r;
    g.cols = c;
    g.data.assign(static_cast<std::size_t>(ch) * r * c, 0.0f);
    return g;
  }
  float at(int c, int r, int col) const {
    return data[(static_cast<std::size_t>(c) * rows + r) * cols + col];
  }
  float& at(int c, int r, int col) {
    return data[(static_cast<std::size_t>(c) * rows + r) * cols + col];
  }
};

inline void leaky_relu_inplace(Grid& g) {
  for (float& v : g.data) v = v > 0.0f ? v : kLeakySlope * v;
}

inline Grid conv2d_rows(const Grid& in, const Tensor& weight,
                        const Tensor& bias, int stride, int pad) {
  const int out_ch = weight.shape[0];
  const int in_ch = weight.shape[1];
  const int k = weight.shape[2];
  const int out_rows = (in.rows + 2 * pad - k) / stride + 1;
  DSRC_CHECK(out_rows >= 1, "conv2d: input has too few rows");
  Grid out = Grid::zeros(out_ch, out_rows, in.cols);
  for (int o = 0; o < out_ch; ++o) {
    for (int r = 0; r < out_rows; ++r) {
      for (int col = 0; col < in.cols; ++col) {
        double acc = bias.values[o];
        for (int ci = 0; ci < in_ch; ++ci) {
          const float* w = weight.values.data() +
                           (static_cast<std::size_t>(o) * in_ch + ci) * k;
          for (int j = 0; j < k; ++j) {
            const int ri = r * stride + j - pad;
            if (ri < 0 || ri >= in.rows) continue;
            acc += static_cast<double>(w[j]) * in.at(ci, ri, col);
          }
        }
        out.at(o, r, col) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

// Strided 1-D convolution with "same"-style padding at the given stride.
inline Plane conv1d_strided(const Plane& in, const Tensor& weight,
                            const Tensor& bias, int stride, int pad) {
  const int out_ch = weight.shape[0];
  const int in_ch = weight.shape[1];
  const int k = weight.shape[2];
  const int out_len = (in.length + 2 * pad - k) / stride + 1;
  DSRC_CHECK(out_len >= 1, "conv1d: input too short");
  Plane out = Plane::zeros(out_ch, out_len);
  for (int o = 0; o < out_ch; ++o) {
    float* y = out.row(o);
    for (int t = 0; t < out_len; ++t) {
      double acc = bias.values[o];
      for (int ci = 0; ci < in_ch; ++ci) {
        const float* x = in.row(ci);
        const float* w = weight.values.data() +
                         (static_cast<std::size_t>(o) * in_ch + ci) * k;
        for (int j = 0; j < k; ++j) {
          const int ti = t * stride + j - pad;
          if (ti < 0 || ti >= in.length) continue;
          acc += static_cast<double>(w[j]) * x[ti];
        }
      }
      y[t] = static_cast<float>(acc);
    }
  }
  return out;
}

// Non-overlapping mean pooling; remainder samples are dropped.
inline Plane mean_pool(const Plane& in, int factor) {
  if (factor == 1) return in;
  const int out_len = in.length / factor;
  DSRC_CHECK(out_len >= 1, "mean_pool: clip too short to pool x", factor);
  Plane out = Plane::zeros(in.channels, out_len);
  for (int c = 0; c < in.channels; ++c) {
    const float* x = in.row(c);
    float* y = out.row(c);
    for (int t = 0; t < out_len; ++t) {
      double s = 0.0;
      for (int j = 0; j < factor; ++j) s += x[t * factor + j];
      y[t] = static_cast<float>(s / factor);
    }
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// generator

// Names and shapes of every tensor a generator needs, in file order.
inline std::vector<std::pair<std::string, std::vector<int>>>
generator_tensor_shapes(const GeneratorConfig& cfg) {
  validate(cfg);
  std::vector<std::pair<std::string, std::vector<int>>> out;
  out.emplace_back("lut_content",
                   std::vector<int>{cfg.content_vocab, cfg.content_embed_dim});
  out.emplace_back("lut_f0", std::vector<int>{cfg.f0_vocab, cfg.f0_embed_dim});
  out.emplace_back("conv_pre.weight",
                   std::vector<int>{cfg.stage_channels(0), cfg.input_dim(), 7});
  out.emplace_back("conv_pre.bias", std::vector<int>{cfg.stage_channels(0)});
  for (int i = 0; i < cfg.num_stages(); ++i) {
    const int ci = cfg.stage_channels(i);
    const int co = cfg.stage_channels(i + 1);
    const std::string up = "up." + std::to_string(i);
    out.emplace_back(up + ".weight",
                     std::vector<int>{co, ci, 2 * cfg.upsample_rates[i]});
    out.emplace_back(up + ".bias", std::vector<int>{co});
    for (std::size_t j = 0; j < cfg.resblock_kernels.size(); ++j) {
      const int k = cfg.resblock_kernels[j];
      for (std::size_t d = 0; d < cfg.resblock_dilations.size(); ++d) {
        const std::string base = "res." + std::to_string(i) + "." +
                                 std::to_string(j) + "." + std::to_string(d);
        out.emplace_back(base + ".conv1.weight", std::vector<int>{co, co, k});
        out.emplace_back(base + ".conv1.bias", std::vector<int>{co});
        out.emplace_back(base + ".conv2.weight", std::vector<int>{co, co, k});
        out.emplace_back(base + ".conv2.bias", std::vector<int>{co});
      }
    }
  }
  out.emplace_back(
      "conv_post.weight",
      std::vector<int>{1, cfg.stage_channels(cfg.num_stages()), 7});
  out.emplace_back("conv_post.bias", std::vector<int>{1});
  return out;
}

class Generator {
 public:
  Generator(GeneratorConfig cfg, WeightMap weights)
      : cfg_(std::move(cfg)), w_(std::move(weights)) {
    const auto required = generator_tensor_shapes(cfg_);
    for (const auto& [name, shape] : required) {
      const Tensor& t = w_.expect(name, shape);
      for (float v : t.values)
        DSRC_CHECK(std::isfinite(v), "generator: non-finite weight in \"",
                   name, "\"");
    }
    DSRC_CHECK_DIM(w_.size() == required.size(),
                   "generator: weight file has ", w_.size(), " tensors, ",
                   required.size(), " expected");
  }

  static Generator load(const std::string& path, const GeneratorConfig& cfg) {
    return Generator(cfg, load_weights(path));
  }

  const GeneratorConfig& config() const { return cfg_; }
  const WeightMap& weights() const { return w_; }

  // Resynthesizes a waveform from (content codes, F0 codes, speaker
  // embedding). The F0 sequence is held to the content frame rate by
  // repetition; output length is exactly L x product(upsample_rates).
  AudioClip generate(const UnitSequence& content, const F0CodeSequence& f0,
                     std::span<const float> speaker) const {
    const std::size_t L = content.codes.size();
    DSRC_CHECK(L >= 1, "generate: empty content sequence");
    DSRC_CHECK(!f0.codes.empty(), "generate: empty F0 sequence");
    DSRC_CHECK_DIM(static_cast<int>(speaker.size()) == cfg_.speaker_dim,
                   "generate: speaker embedding has dim ", speaker.size(),
                   ", expected ", cfg_.speaker_dim);
    DSRC_CHECK_DIM(content.vocab == cfg_.content_vocab &&
                   f0.vocab == cfg_.f0_vocab,
                   "generate: sequence vocab does not match generator config");

    // integer rate ratio between content and F0 code streams
    DSRC_CHECK(content.frame_rate > 0 && f0.frame_rate > 0,
               "generate: sequences must carry frame rates");
    const double ratio = content.frame_rate / f0.frame_rate;
    const int r = static_cast<int>(std::lround(ratio));
    DSRC_CHECK(r >= 1 && std::abs(ratio - r) < 1e-6,
               "generate: content rate ", content.frame_rate,
               " is not an integer multiple of F0 rate ", f0.frame_rate);
    DSRC_CHECK(f0.codes.size() * static_cast<std::size_t>(r) >= L,
               "generate: F0 sequence too short for ", L, " content frames");

    const Tensor& lut_c = *w_.find("lut_content");
    const Tensor& lut_f = *w_.find("lut_f0");

    detail::Plane x =
        detail::Plane::zeros(cfg_.input_dim(), static_cast<int>(L));
    for (std::size_t t = 0; t < L; ++t) {
      const int zc = content.codes[t];
      DSRC_CHECK(zc >= 0 && zc < cfg_.content_vocab, "generate: content code ",
                 zc, " out of vocab ", cfg_.content_vocab);
      const int zf = f0.codes[t / r];
      DSRC_CHECK(zf >= 0 && zf < cfg_.f0_vocab, "generate: F0 code ", zf,
                 " out of vocab ", cfg_.f0_vocab);
      for (int d = 0; d < cfg_.content_embed_dim; ++d)
        x.row(d)[t] = lut_c.values[static_cast<std::size_t>(zc) *
                                       cfg_.content_embed_dim + d];
      for (int d = 0; d < cfg_.f0_embed_dim; ++d)
        x.row(cfg_.content_embed_dim + d)[t] =
            lut_f.values[static_cast<std::size_t>(zf) * cfg_.f0_embed_dim + d];
      for (int d = 0; d < cfg_.speaker_dim; ++d)
        x.row(cfg_.content_embed_dim + cfg_.f0_embed_dim + d)[t] = speaker[d];
    }

    x = detail::conv1d_same(x, *w_.find("conv_pre.weight"),
                            *w_.find("conv_pre.bias"), 1);

    for (int i = 0; i < cfg_.num_stages(); ++i) {
      detail::leaky_relu_inplace(x);
      const std::string up = "up." + std::to_string(i);
      x = detail::conv_transpose1d(x, *w_.find(up + ".weight"),
                                   *w_.find(up + ".bias"),
                                   cfg_.upsample_rates[i]);
      // multi-kernel residual blocks, averaged
      detail::Plane mrf =
          detail::Plane::zeros(x.channels, x.length);
      for (std::size_t j = 0; j < cfg_.resblock_kernels.size(); ++j) {
        detail::Plane b = x;
        for (std::size_t d = 0; d < cfg_.resblock_dilations.size(); ++d) {
          const std::string base = "res." + std::to_string(i) + "." +
                                   std::to_string(j) + "." + std::to_string(d);
          detail::Plane t = b;
          detail::leaky_relu_inplace(t);
          t = detail::conv1d_same(t, *w_.find(base + ".conv1.weight"),
                                  *w_.find(base + ".conv1.bias"),
                                  cfg_.resblock_dilations[d]);
          detail::leaky_relu_inplace(t);
          t = detail::conv1d_same(t, *w_.find(base + ".conv2.weight"),
                                  *w_.find(base + ".conv2.bias"), 1);
          for (std::size_t n = 0; n < b.data.size(); ++n) b.data[n] += t.data[n];
        }
        for (std::size_t n = 0; n < mrf.data.size(); ++n) mrf.data[n] += b.data[n];
      }
      const float inv = 1.0f / static_cast<float>(cfg_.resblock_kernels.size());
      for (float& v : mrf.data) v *= inv;
      x = std::move(mrf);
    }

    detail::leaky_relu_inplace(x);
    x = detail::conv1d_same(x, *w_.find("conv_post.weight"),
                            *w_.find("conv_post.bias"), 1);

    AudioClip out;
    out.sample_rate = content.frame_rate > 0
                          ? static_cast<int>(std::lround(
                                content.frame_rate * cfg_.upsample_product()))
                          : 16000;
    out.samples.resize(x.length);
    const float* y = x.row(0);
    for (int t = 0; t < x.length; ++t) out.samples[t] = std::tanh(y[t]);
    return out;
  }

 private:
  GeneratorConfig cfg_;
  WeightMap w_;
};

// ---------------------------------------------------------------------------
// discriminators

// Per sub-discriminator: every recorded layer activation, the last entry
// being the final score map.
struct ActivationStack {
  std::vector<Tensor> activations;

  const Tensor& scores() const {
    DSRC_CHECK(!activations.empty(), "activation stack is empty");
    return activations.back();
  }
  std::size_t num_layers() const { return activations.size(); }
};

inline std::vector<std::pair<std::string, std::vector<int>>>
discriminator_tensor_shapes(const DiscriminatorConfig& cfg) {
  DSRC_CHECK(!cfg.periods.empty() && !cfg.scales.empty() &&
                 !cfg.channels.empty(),
             "discriminator: empty config");
  std::vector<std::pair<std::string, std::vector<int>>> out;
  for (int p : cfg.periods) {
    int in_ch = 1;
    for (std::size_t l = 0; l < cfg.channels.size(); ++l) {
      const std::string base =
          "mpd." + std::to_string(p) + ".conv" + std::to_string(l);
      out.emplace_back(base + ".weight",
                       std::vector<int>{cfg.channels[l], in_ch, 5});
      out.emplace_back(base + ".bias", std::vector<int>{cfg.channels[l]});
      in_ch = cfg.channels[l];
    }
    const std::string base = "mpd." + std::to_string(p) + ".score";
    out.emplace_back(base + ".weight", std::vector<int>{1, in_ch, 3});
    out.emplace_back(base + ".bias", std::vector<int>{1});
  }
  for (int s : cfg.scales) {
    int in_ch = 1;
    for (std::size_t l = 0; l < cfg.channels.size(); ++l) {
      const std::string base =
          "msd." + std::to_string(s) + ".conv" + std::to_string(l);
      out.emplace_back(base + ".weight",
                       std::vector<int>{cfg.channels[l], in_ch, 15});
      out.emplace_back(base + ".bias", std::vector<int>{cfg.channels[l]});
      in_ch = cfg.channels[l];
    }
    const std::string base = "msd." + std::to_string(s) + ".score";
    out.emplace_back(base + ".weight", std::vector<int>{1, in_ch, 3});
    out.emplace_back(base + ".bias", std::vector<int>{1});
  }
  return out;
}

class Discriminators {
 public:
  Discriminators(DiscriminatorConfig cfg, WeightMap weights)
      : cfg_(std::move(cfg)), w_(std::move(weights)) {
    const auto required = discriminator_tensor_shapes(cfg_);
    for (const auto& [name, shape] : required) {
      const Tensor& t = w_.expect(name, shape);
      for (float v : t.values)
        DSRC_CHECK(std::isfinite(v), "discriminator: non-finite weight in \"",
                   name, "\"");
    }
    DSRC_CHECK_DIM(w_.size() == required.size(),
                   "discriminator: weight file has ", w_.size(), " tensors, ",
                   required.size(), " expected");
  }

  static Discriminators load(const std::string& path,
                             const DiscriminatorConfig& cfg) {
    return Discriminators(cfg, load_weights(path));
  }

  const DiscriminatorConfig& config() const { return cfg_; }
  const std::vector<int>& periods() const { return cfg_.periods; }
  const std::vector<int>& scales() const { return cfg_.scales; }
  std::size_t num_sub_discriminators() const {
    return cfg_.periods.size() + cfg_.scales.size();
  }

  // Multi-period stacks: the signal is end-padded to the least multiple
  // of p at or above its length, reshaped to p columns, and filtered by
  // strided 2-D convolutions along the time rows.
  std::vector<ActivationStack> discriminate_mpd(const AudioClip& clip) const {
    DSRC_CHECK(!clip.samples.empty(), "discriminate_mpd: empty clip");
    std::vector<ActivationStack> stacks;
    stacks.reserve(cfg_.periods.size());
    for (int p : cfg_.periods) {
      const std::size_t n = clip.samples.size();
      const std::size_t rows = (n + p - 1) / p;
      detail::Grid g = detail::Grid::zeros(1, static_cast<int>(rows), p);
      for (std::size_t t = 0; t < n; ++t)
        g.data[t] = clip.samples[t];  // row-major fill, zero end padding
      ActivationStack stack;
      for (std::size_t l = 0; l < cfg_.channels.size(); ++l) {
        const std::string base =
            "mpd." + std::to_string(p) + ".conv" + std::to_string(l);
        g = detail::conv2d_rows(g, *w_.find(base + ".weight"),
                                *w_.find(base + ".bias"), /*stride=*/3,
                                /*pad=*/2);
        detail::leaky_relu_inplace(g);
        stack.activations.push_back(grid_tensor(g));
      }
      const std::string base = "mpd." + std::to_string(p) + ".score";
      g = detail::conv2d_rows(g, *w_.find(base + ".weight"),
                              *w_.find(base + ".bias"), /*stride=*/1,
                              /*pad=*/1);
      stack.activations.push_back(grid_tensor(g));
      stacks.push_back(std::move(stack));
    }
    return stacks;
  }

  // Multi-scale stacks on the original, x2 and x4 mean-pooled signals.
  std::vector<ActivationStack> discriminate_msd(const AudioClip& clip) const {
    const int max_scale = *std::max_element(cfg_.scales.begin(),
                                            cfg_.scales.end());
    DSRC_CHECK(static_cast<int>(clip.samples.size()) >= max_scale,
               "discriminate_msd: clip too short to pool x", max_scale);
    detail::Plane base_plane = detail::Plane::zeros(
        1, static_cast<int>(clip.samples.size()));
    std::copy(clip.samples.begin(), clip.samples.end(), base_plane.data.begin());

    std::vector<ActivationStack> stacks;
    stacks.reserve(cfg_.scales.size());
    for (int s : cfg_.scales) {
      detail::Plane x = detail::mean_pool(base_plane, s);
      ActivationStack stack;
      for (std::size_t l = 0; l < cfg_.channels.size(); ++l) {
        const std::string base =
            "msd." + std::to_string(s) + ".conv" + std::to_string(l);
        x = detail::conv1d_strided(x, *w_.find(base + ".weight"),
                                   *w_.find(base + ".bias"), /*stride=*/2,
                                   /*pad=*/7);
        detail::leaky_relu_inplace(x);
        stack.activations.push_back(plane_tensor(x));
      }
      const std::string base = "msd." + std::to_string(s) + ".score";
      x = detail::conv1d_strided(x, *w_.find(base + ".weight"),
                                 *w_.find(base + ".bias"), /*stride=*/1,
                                 /*pad=*/1);
      stack.activations.push_back(plane_tensor(x));
      stacks.push_back(std::move(stack));
    }
    return stacks;
  }

  // All J = periods + scales sub-discriminator stacks, MPD first.
  std::vector<ActivationStack> discriminate_all(const AudioClip& clip) const {
    std::vector<ActivationStack> all = discriminate_mpd(clip);
    std::vector<ActivationStack> msd = discriminate_msd(clip);
    for (auto& s : msd) all.push_back(std::move(s));
    return all;
  }

 private:
  static Tensor grid_tensor(const detail::Grid& g) {
    Tensor t;
    t.shape = {g.channels, g.rows, g.cols};
    t.values = g.data;
    return t;
  }
  static Tensor plane_tensor(const detail::Plane& p) {
    Tensor t;
    t.shape = {p.channels, p.length};
    t.values = p.data;
    return t;
  }

  DiscriminatorConfig cfg_;
  WeightMap w_;
};

// ---------------------------------------------------------------------------
// seeded weight initialization (uniform in [-scale, scale])

namespace detail {

inline WeightMap random_weights(
    const std::vector<std::pair<std::string, std::vector<int>>>& shapes,
    std::uint64_t seed, float scale) {
  std::mt19937_64 rng(seed);
  WeightMap w;
  for (const auto& [name, shape] : shapes) {
    Tensor& t = w.add(name, shape);
    for (auto& v : t.values)
      v = static_cast<float>((2.0 * next_unit(rng) - 1.0) * scale);
  }
  return w;
}

}  // namespace detail

inline WeightMap random_generator_weights(const GeneratorConfig& cfg,
                                          std::uint64_t seed,
                                          float scale = 0.1f) {
  return detail::random_weights(generator_tensor_shapes(cfg), seed, scale);
}

inline WeightMap random_discriminator_weights(const DiscriminatorConfig& cfg,
                                              std::uint64_t seed,
                                              float scale = 0.1f) {
  return detail::random_weights(discriminator_tensor_shapes(cfg), seed, scale);
}

inline WeightMap zero_generator_weights(const GeneratorConfig& cfg) {
  return detail::random_weights(generator_tensor_shapes(cfg), 0, 0.0f);
}

// ---------------------------------------------------------------------------
// speaker table

struct SpeakerTable {
  Tensor table;  // [num_speakers, 256]

  int num_speakers() const { return table.shape.empty() ? 0 : table.shape[0]; }
  std::span<const float> embedding(int speaker_id) const {
    DSRC_CHECK_DIM(speaker_id >= 0 && speaker_id < num_speakers(),
                   "speaker table: id ", speaker_id, " out of range (",
                   num_speakers(), " speakers)");
    return {table.values.data() + static_cast<std::size_t>(speaker_id) * 256,
            256};
  }
};

inline SpeakerTable make_random_speaker_table(int num_speakers,
                                              std::uint64_t seed) {
  DSRC_CHECK(num_speakers >= 1, "speaker table: need at least one speaker");
  std::mt19937_64 rng(seed);
  SpeakerTable st;
  st.table = make_tensor({num_speakers, 256});
  for (auto& v : st.table.values)
    v = static_cast<float>(2.0 * detail::next_unit(rng) - 1.0);
  return st;
}

inline void save_speaker_table(const std::string& path,
                               const SpeakerTable& st) {
  WeightMap w;
  Tensor& t = w.add("speaker_table", st.table.shape);
  t.values = st.table.values;
  save_weights(path, w);
}

inline SpeakerTable load_speaker_table(const std::string& path) {
  const WeightMap w = load_weights(path);
  const Tensor* t = w.find("speaker_table");
  DSRC_CHECK_DIM(t != nullptr, "speaker table ", path,
                 ": missing tensor \"speaker_table\"");
  DSRC_CHECK_DIM(t->shape.size() == 2 && t->shape[1] == 256, "speaker table ",
                 path, ": expected shape [N, 256], found ",
                 shape_string(t->shape));
  for (float v : t->values)
    DSRC_CHECK(std::isfinite(v), "speaker table ", path,
               ": non-finite embedding value");
  SpeakerTable st;
  st.table = *t;
  return st;
}

}  // namespace dsrc
