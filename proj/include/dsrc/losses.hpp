// dsrc/losses.hpp
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
// Forward-only training objective: least-squares adversarial terms, L1
// Mel reconstruction, per-layer feature matching, and their weighted
// combination across all sub-discriminators.

#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dsrc/audio.hpp"
#include "dsrc/common.hpp"
#include "dsrc/mel.hpp"
#include "dsrc/vocoder.hpp"

namespace dsrc {

struct LossWeights {
  double lambda_fm = 2.0;
  double lambda_r = 45.0;
};

struct LossReport {
  std::vector<double> adv;  // per sub-discriminator, generated scores
  std::vector<double> fm;   // per sub-discriminator
  std::vector<double> d;    // per sub-discriminator, discriminator loss
  double recon = 0.0;
  double g_total = 0.0;  // sum_j (adv_j + lambda_fm * fm_j) + lambda_r * recon
  double d_total = 0.0;  // sum_j d_j
  LossWeights weights;

  // flat key -> value table, one per line
  std::string to_text() const {
    std::ostringstream os;
    for (std::size_t j = 0; j < adv.size(); ++j)
      os << "adv." << j << "\t" << adv[j] << "\n";
    for (std::size_t j = 0; j < fm.size(); ++j)
      os << "fm." << j << "\t" << fm[j] << "\n";
    for (std::size_t j = 0; j < d.size(); ++j)
      os << "d." << j << "\t" << d[j] << "\n";
    os << "recon\t" << recon << "\n";
    os << "g_total\t" << g_total << "\n";
    os << "d_total\t" << d_total << "\n";
    return os.str();
  }
};

// Generator-side adversarial term: mean over score elements of (1 - s)^2.
inline double adv_loss_g(std::span<const float> scores_fake) {
  DSRC_CHECK(!scores_fake.empty(), "adv_loss_g: empty score map");
  double acc = 0.0;
  for (float s : scores_fake) {
    const double d = 1.0 - s;
    acc += d * d;
  }
  return acc / static_cast<double>(scores_fake.size());
}

// Discriminator term: mean[(1 - s_real)^2] + mean[(s_fake)^2].
inline double d_loss(std::span<const float> scores_real,
                     std::span<const float> scores_fake) {
  DSRC_CHECK(!scores_real.empty() && !scores_fake.empty(),
             "d_loss: empty score map");
  double real_acc = 0.0;
  for (float s : scores_real) {
    const double d = 1.0 - s;
    real_acc += d * d;
  }
  double fake_acc = 0.0;
  for (float s : scores_fake) fake_acc += static_cast<double>(s) * s;
  return real_acc / static_cast<double>(scores_real.size()) +
         fake_acc / static_cast<double>(scores_fake.size());
}

// Mean absolute difference between the log-Mel spectrograms of the two
// signals.
inline double recon_loss(const AudioClip& x, const AudioClip& x_hat,
                         const MelConfig& cfg) {
  DSRC_CHECK_DIM(x.samples.size() == x_hat.samples.size(),
                 "recon_loss: length mismatch, ", x.samples.size(), " vs ",
                 x_hat.samples.size());
  const MelSpectrogram mx = mel_spectrogram(x, cfg);
  const MelSpectrogram mh = mel_spectrogram(x_hat, cfg);
  double acc = 0.0;
  for (std::size_t i = 0; i < mx.values.size(); ++i)
    acc += std::abs(mx.values[i] - mh.values[i]);
  return acc / static_cast<double>(mx.values.size());
}

// Feature matching: sum over layers of the mean absolute activation
// difference (the 1/M_i weighting of an L1 sum over M_i elements).
inline double fm_loss(const ActivationStack& real, const ActivationStack& fake) {
  DSRC_CHECK_DIM(real.num_layers() == fake.num_layers(),
                 "fm_loss: stacks have ", real.num_layers(), " vs ",
                 fake.num_layers(), " layers");
  double total = 0.0;
  for (std::size_t i = 0; i < real.num_layers(); ++i) {
    const Tensor& a = real.activations[i];
    const Tensor& b = fake.activations[i];
    DSRC_CHECK_DIM(a.shape == b.shape, "fm_loss: layer ", i, " has shape ",
                   shape_string(a.shape), " vs ", shape_string(b.shape));
    double acc = 0.0;
    for (std::size_t n = 0; n < a.values.size(); ++n)
      acc += std::abs(static_cast<double>(a.values[n]) - b.values[n]);
    total += acc / static_cast<double>(a.numel());
  }
  return total;
}

// Full objective over J matched sub-discriminator stacks.
inline LossReport total_losses(const AudioClip& x, const AudioClip& x_hat,
                               std::span<const ActivationStack> real_stacks,
                               std::span<const ActivationStack> fake_stacks,
                               const LossWeights& weights = {},
                               const MelConfig& mel_cfg = {}) {
  DSRC_CHECK_DIM(real_stacks.size() == fake_stacks.size() &&
                     !real_stacks.empty(),
                 "total_losses: need J >= 1 matching stacks, got ",
                 real_stacks.size(), " real and ", fake_stacks.size(),
                 " fake");
  DSRC_CHECK(weights.lambda_fm >= 0 && weights.lambda_r >= 0,
             "total_losses: loss weights must be nonnegative");
  LossReport report;
  report.weights = weights;
  const std::size_t j_count = real_stacks.size();
  report.adv.resize(j_count);
  report.fm.resize(j_count);
  report.d.resize(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    report.adv[j] = adv_loss_g(fake_stacks[j].scores().values);
    report.fm[j] = fm_loss(real_stacks[j], fake_stacks[j]);
    report.d[j] = d_loss(real_stacks[j].scores().values,
                         fake_stacks[j].scores().values);
  }
  report.recon = recon_loss(x, x_hat, mel_cfg);
  double g = 0.0, d = 0.0;
  for (std::size_t j = 0; j < j_count; ++j) {
    g += report.adv[j] + weights.lambda_fm * report.fm[j];
    d += report.d[j];
  }
  report.g_total = g + weights.lambda_r * report.recon;
  report.d_total = d;
  return report;
}

}  // namespace dsrc
