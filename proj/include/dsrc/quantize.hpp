// dsrc/quantize.hpp
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
// Discretization machinery: batch k-means (k-means++ init, Lloyd
// iterations) for content units, a codebook learned with exponential
// moving averages and random restarts for dead codes, and the windowed
// featurizer that maps F0 tracks to and from code sequences.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dsrc/common.hpp"
#include "dsrc/features.hpp"
#include "dsrc/io.hpp"
#include "dsrc/pitch.hpp"

namespace dsrc {

struct UnitSequence {
  std::vector<int> codes;   // each in [0, vocab)
  int vocab = 0;
  double frame_rate = 0.0;  // Hz
};

struct F0CodeSequence {
  std::vector<int> codes;   // each in [0, vocab)
  int vocab = 0;
  double frame_rate = 0.0;  // Hz; source track rate / downsample
  int downsample = 16;      // F0 frames per code
};

namespace detail {

// [0, 1) with 53 random bits; avoids std::uniform_real_distribution,
// whose output is implementation-defined.
inline double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t next_index(std::mt19937_64& rng, std::size_t n) {
  const auto i = static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n));
  return std::min(i, n - 1);
}

template <typename Scalar>
double squared_distance(const double* a, const Scalar* b, int dim) {
  double d2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - static_cast<double>(b[i]);
    d2 += d * d;
  }
  return d2;
}

}  // namespace detail

struct Codebook {
  int k = 0;
  int dim = 0;
  std::vector<double> vectors;    // k x dim
  std::vector<double> usage_ema;  // per code, nonnegative
  std::vector<double> sum_ema;    // k x dim
  double decay = 0.99;
  double restart_threshold = 1.0;
  std::uint64_t seed = 0;

  static constexpr double kUsageEps = 1e-8;

  // draws restart targets; reseed() puts it in a known state
  std::mt19937_64 restart_rng{0};

  const double* vec(int i) const {
    return vectors.data() + static_cast<std::size_t>(i) * dim;
  }

  void reseed(std::uint64_t s) {
    seed = s;
    restart_rng.seed(s);
  }
};

inline Codebook make_codebook(int k, int dim, double decay = 0.99,
                              double restart_threshold = 1.0,
                              std::uint64_t seed = 0) {
  DSRC_CHECK(k >= 1, "codebook: K must be >= 1, got ", k);
  DSRC_CHECK(dim >= 1, "codebook: dim must be >= 1, got ", dim);
  DSRC_CHECK(decay >= 0.0 && decay < 1.0, "codebook: decay must be in [0,1)");
  DSRC_CHECK(restart_threshold >= 0.0,
             "codebook: restart_threshold must be nonnegative");
  Codebook cb;
  cb.k = k;
  cb.dim = dim;
  cb.decay = decay;
  cb.restart_threshold = restart_threshold;
  cb.vectors.assign(static_cast<std::size_t>(k) * dim, 0.0);
  cb.sum_ema.assign(static_cast<std::size_t>(k) * dim, 0.0);
  cb.usage_ema.assign(k, 1.0);
  cb.reseed(seed);
  return cb;
}

// Nearest code under squared Euclidean distance; ties go to the lowest index.
template <typename Scalar>
int nearest_code(const Codebook& cb, const Scalar* v) {
  int best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cb.k; ++i) {
    const double d2 = detail::squared_distance(cb.vec(i), v, cb.dim);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// k-means

struct KMeansOptions {
  int k = 100;
  int max_iters = 100;
  double tol = 1e-6;  // relative inertia improvement
  std::uint64_t seed = 0;
};

struct KMeansStats {
  std::vector<double> inertia_per_iter;  // recorded at each assignment step
  int iterations = 0;
  std::vector<int> cluster_sizes;
};

// Lloyd's algorithm with seeded k-means++ initialization. Empty clusters
// are reseeded to the point currently farthest from its own centroid.
inline Codebook kmeans_fit(std::span<const FeatureSequence> features,
                           const KMeansOptions& opt,
                           KMeansStats* stats = nullptr) {
  DSRC_CHECK(opt.k >= 1, "kmeans_fit: K must be >= 1");
  DSRC_CHECK(opt.max_iters >= 1, "kmeans_fit: max_iters must be >= 1");
  DSRC_CHECK(!features.empty(), "kmeans_fit: no input features");

  const int dim = features[0].dim;
  std::vector<const float*> points;
  for (const FeatureSequence& fs : features) {
    DSRC_CHECK_DIM(fs.dim == dim, "kmeans_fit: feature dim mismatch, ", fs.dim,
                   " vs ", dim);
    for (int i = 0; i < fs.count; ++i) points.push_back(fs.row(i).data());
  }
  const std::size_t n = points.size();
  DSRC_CHECK(n >= static_cast<std::size_t>(opt.k), "kmeans_fit: only ", n,
             " points for K=", opt.k);
  for (const float* p : points)
    for (int d = 0; d < dim; ++d)
      DSRC_CHECK(std::isfinite(p[d]), "kmeans_fit: non-finite input value");

  Codebook cb = make_codebook(opt.k, dim, 0.99, 1.0, opt.seed);
  std::mt19937_64 rng(opt.seed);

  // k-means++ seeding
  {
    const std::size_t first = detail::next_index(rng, n);
    for (int d = 0; d < dim; ++d) cb.vectors[d] = points[first][d];
    std::vector<double> d2(n);
    for (int c = 1; c < opt.k; ++c) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < c; ++j)
          best = std::min(best,
                          detail::squared_distance(cb.vec(j), points[i], dim));
        d2[i] = best;
        total += best;
      }
      std::size_t pick;
      if (total > 0.0) {
        const double target = detail::next_unit(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = detail::next_index(rng, n);  // all points already covered
      }
      for (int d = 0; d < dim; ++d)
        cb.vectors[static_cast<std::size_t>(c) * dim + d] = points[pick][d];
    }
  }

  std::vector<int> assign(n, -1);
  std::vector<int> counts(opt.k, 0);
  KMeansStats local_stats;
  KMeansStats& st = stats ? *stats : local_stats;
  st.inertia_per_iter.clear();

  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opt.max_iters; ++iter) {
    // assignment
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (int c = 0; c < opt.k; ++c) {
        const double d2 = detail::squared_distance(cb.vec(c), points[i], dim);
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
      inertia += best_d2;
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    st.inertia_per_iter.push_back(inertia);
    st.iterations = iter + 1;

    const bool converged =
        !changed ||
        (prev_inertia - inertia) <= opt.tol * std::max(prev_inertia, 1e-300);
    prev_inertia = inertia;

    // update step (means), also run on the final pass so centroids and
    // cluster sizes are consistent with the last assignment
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(cb.sum_ema.begin(), cb.sum_ema.end(), 0.0);  // reused as scratch
    for (std::size_t i = 0; i < n; ++i) {
      counts[assign[i]] += 1;
      double* s = cb.sum_ema.data() + static_cast<std::size_t>(assign[i]) * dim;
      for (int d = 0; d < dim; ++d) s[d] += points[i][d];
    }
    for (int c = 0; c < opt.k; ++c) {
      if (counts[c] == 0) continue;
      double* v = cb.vectors.data() + static_cast<std::size_t>(c) * dim;
      const double* s = cb.sum_ema.data() + static_cast<std::size_t>(c) * dim;
      for (int d = 0; d < dim; ++d) v[d] = s[d] / counts[c];
    }
    // reseed empty clusters to the worst-fit point
    std::vector<char> taken(n, 0);
    for (int c = 0; c < opt.k; ++c) {
      if (counts[c] != 0) continue;
      double worst = -1.0;
      std::size_t worst_i = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (taken[i]) continue;
        const double d2 =
            detail::squared_distance(cb.vec(assign[i]), points[i], dim);
        if (d2 > worst) {
          worst = d2;
          worst_i = i;
        }
      }
      taken[worst_i] = 1;
      double* v = cb.vectors.data() + static_cast<std::size_t>(c) * dim;
      for (int d = 0; d < dim; ++d) v[d] = points[worst_i][d];
    }

    if (converged) break;
  }

  st.cluster_sizes.assign(counts.begin(), counts.end());

  // EMA state consistent with the final centroids
  for (int c = 0; c < opt.k; ++c) {
    cb.usage_ema[c] = std::max(1.0, static_cast<double>(counts[c]));
    double* s = cb.sum_ema.data() + static_cast<std::size_t>(c) * dim;
    double* v = cb.vectors.data() + static_cast<std::size_t>(c) * dim;
    for (int d = 0; d < dim; ++d) {
      s[d] = v[d] * cb.usage_ema[c];
      v[d] = s[d] / std::max(cb.usage_ema[c], Codebook::kUsageEps);
    }
  }
  return cb;
}

inline Codebook kmeans_fit(const FeatureSequence& features,
                           const KMeansOptions& opt,
                           KMeansStats* stats = nullptr) {
  return kmeans_fit(std::span<const FeatureSequence>(&features, 1), opt, stats);
}

// Per-frame nearest-codebook assignment.
inline UnitSequence quantize(const FeatureSequence& features,
                             const Codebook& cb) {
  DSRC_CHECK_DIM(features.dim == cb.dim, "quantize: feature dim ",
                 features.dim, " does not match codebook dim ", cb.dim);
  UnitSequence seq;
  seq.vocab = cb.k;
  seq.frame_rate = features.frame_rate;
  seq.codes.resize(features.count);
  for (int i = 0; i < features.count; ++i)
    seq.codes[i] = nearest_code(cb, features.row(i).data());
  return seq;
}

// ---------------------------------------------------------------------------
// EMA vector quantizer

struct VqUpdateReport {
  std::vector<int> counts;     // batch vectors assigned per code
  std::vector<int> restarted;  // codes reinitialized this update
};

// One EMA update on a batch of row-major vectors: decayed usage counts and
// vector sums, codebook rows rewritten as sum/usage, then any code whose
// usage fell below the restart threshold is moved onto a random batch vector.
inline VqUpdateReport vq_ema_update(Codebook& cb,
                                    std::span<const float> batch) {
  DSRC_CHECK(!batch.empty(), "vq_ema_update: empty batch");
  DSRC_CHECK_DIM(batch.size() % cb.dim == 0, "vq_ema_update: batch size ",
                 batch.size(), " is not a multiple of dim ", cb.dim);
  const std::size_t count = batch.size() / cb.dim;
  for (float v : batch)
    DSRC_CHECK(std::isfinite(v), "vq_ema_update: non-finite batch value");

  VqUpdateReport report;
  report.counts.assign(cb.k, 0);
  std::vector<double> batch_sum(static_cast<std::size_t>(cb.k) * cb.dim, 0.0);
  for (std::size_t i = 0; i < count; ++i) {
    const float* x = batch.data() + i * cb.dim;
    const int code = nearest_code(cb, x);
    report.counts[code] += 1;
    double* s = batch_sum.data() + static_cast<std::size_t>(code) * cb.dim;
    for (int d = 0; d < cb.dim; ++d) s[d] += x[d];
  }

  const double g = cb.decay;
  for (int c = 0; c < cb.k; ++c) {
    cb.usage_ema[c] = g * cb.usage_ema[c] + (1.0 - g) * report.counts[c];
    double* s = cb.sum_ema.data() + static_cast<std::size_t>(c) * cb.dim;
    const double* bs = batch_sum.data() + static_cast<std::size_t>(c) * cb.dim;
    double* v = cb.vectors.data() + static_cast<std::size_t>(c) * cb.dim;
    for (int d = 0; d < cb.dim; ++d) {
      s[d] = g * s[d] + (1.0 - g) * bs[d];
      v[d] = s[d] / std::max(cb.usage_ema[c], Codebook::kUsageEps);
    }
  }

  for (int c = 0; c < cb.k; ++c) {
    if (cb.usage_ema[c] >= cb.restart_threshold) continue;
    const std::size_t pick = detail::next_index(cb.restart_rng, count);
    const float* x = batch.data() + pick * cb.dim;
    double* v = cb.vectors.data() + static_cast<std::size_t>(c) * cb.dim;
    double* s = cb.sum_ema.data() + static_cast<std::size_t>(c) * cb.dim;
    for (int d = 0; d < cb.dim; ++d) {
      v[d] = x[d];
      s[d] = x[d];
    }
    cb.usage_ema[c] = 1.0;
    report.restarted.push_back(c);
  }
  return report;
}

// Codebook initialized on k distinct random rows of a batch.
inline Codebook codebook_from_batch(int k, int dim,
                                    std::span<const float> batch,
                                    double decay = 0.99,
                                    double restart_threshold = 1.0,
                                    std::uint64_t seed = 0) {
  DSRC_CHECK(dim >= 1 && batch.size() % dim == 0,
             "codebook_from_batch: bad batch shape");
  const std::size_t count = batch.size() / dim;
  DSRC_CHECK(count >= static_cast<std::size_t>(k),
             "codebook_from_batch: only ", count, " vectors for K=", k);
  Codebook cb = make_codebook(k, dim, decay, restart_threshold, seed);
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  for (int c = 0; c < k; ++c) {  // partial Fisher-Yates
    const std::size_t j = c + detail::next_index(rng, count - c);
    std::swap(order[c], order[j]);
    const float* x = batch.data() + order[c] * dim;
    double* v = cb.vectors.data() + static_cast<std::size_t>(c) * dim;
    double* s = cb.sum_ema.data() + static_cast<std::size_t>(c) * dim;
    for (int d = 0; d < dim; ++d) {
      v[d] = x[d];
      s[d] = x[d];
    }
    cb.usage_ema[c] = 1.0;
  }
  return cb;
}

// ---------------------------------------------------------------------------
// F0 windowing featurizer

// Features of one window of `down` F0 frames starting at `start`:
// [log f0, voicing flag] per frame, zeros past the end of the track.
inline std::vector<float> f0_window_features(const F0Track& track,
                                             std::size_t start, int down) {
  std::vector<float> v(static_cast<std::size_t>(2) * down, 0.0f);
  for (int j = 0; j < down; ++j) {
    const std::size_t t = start + j;
    if (t >= track.size() || !track.voiced[t]) continue;
    v[2 * j] = std::log(track.f0[t]);
    v[2 * j + 1] = 1.0f;
  }
  return v;
}

// All window features of a track, row-major [ceil(T/down) x 2*down].
inline std::vector<float> f0_window_batch(const F0Track& track, int down) {
  DSRC_CHECK(track.size() > 0, "f0 windows: empty track");
  const std::size_t num_windows = (track.size() + down - 1) / down;
  std::vector<float> batch;
  batch.reserve(num_windows * 2 * down);
  for (std::size_t w = 0; w < num_windows; ++w) {
    const std::vector<float> f = f0_window_features(track, w * down, down);
    batch.insert(batch.end(), f.begin(), f.end());
  }
  return batch;
}

// Splits the track into non-overlapping windows (the final partial window
// zero-padded) and assigns each to its nearest code.
inline F0CodeSequence f0_encode(const F0Track& track, const Codebook& cb) {
  DSRC_CHECK(track.size() > 0, "f0_encode: empty track");
  DSRC_CHECK_DIM(cb.dim % 2 == 0, "f0_encode: codebook dim ", cb.dim,
                 " is not 2 x downsample");
  const int down = cb.dim / 2;
  F0CodeSequence seq;
  seq.vocab = cb.k;
  seq.downsample = down;
  seq.frame_rate = track.frame_rate / down;
  const std::size_t num_windows = (track.size() + down - 1) / down;
  seq.codes.resize(num_windows);
  for (std::size_t w = 0; w < num_windows; ++w) {
    const std::vector<float> f = f0_window_features(track, w * down, down);
    seq.codes[w] = nearest_code(cb, f.data());
  }
  return seq;
}

// Inverse of the windowed featurizer applied to each code's vector.
inline F0Track f0_decode(const F0CodeSequence& codes, const Codebook& cb) {
  DSRC_CHECK_DIM(cb.dim % 2 == 0, "f0_decode: codebook dim ", cb.dim,
                 " is not 2 x downsample");
  const int down = cb.dim / 2;
  DSRC_CHECK_DIM(codes.downsample == down, "f0_decode: sequence downsample ",
                 codes.downsample, " does not match codebook (", down, ")");
  F0Track track;
  track.frame_rate = codes.frame_rate * down;
  track.f0.reserve(codes.codes.size() * down);
  track.voiced.reserve(codes.codes.size() * down);
  for (int code : codes.codes) {
    DSRC_CHECK(code >= 0 && code < cb.k, "f0_decode: code ", code,
               " out of range for K=", cb.k);
    const double* v = cb.vec(code);
    for (int j = 0; j < down; ++j) {
      const bool voiced = v[2 * j + 1] > 0.5;
      track.voiced.push_back(voiced ? 1 : 0);
      track.f0.push_back(
          voiced ? static_cast<float>(std::exp(v[2 * j])) : 0.0f);
    }
  }
  return track;
}

// ---------------------------------------------------------------------------
// Codebook file: magic "CDBK", version u8, K u32 LE, dim u32 LE, decay f32,
// restart_threshold f32, vectors f32 LE row-major, usage_ema f32 LE x K.

inline void save_codebook(const std::string& path, const Codebook& cb) {
  detail::ByteWriter w;
  w.put_raw("CDBK", 4);
  w.put_u8(1);
  w.put_u32(static_cast<std::uint32_t>(cb.k));
  w.put_u32(static_cast<std::uint32_t>(cb.dim));
  w.put_f32(static_cast<float>(cb.decay));
  w.put_f32(static_cast<float>(cb.restart_threshold));
  for (double v : cb.vectors) w.put_f32(static_cast<float>(v));
  for (double u : cb.usage_ema) w.put_f32(static_cast<float>(u));
  detail::write_file(path, w.bytes);
}

inline Codebook load_codebook(const std::string& path) {
  const std::vector<std::uint8_t> bytes = detail::read_file(path);
  detail::ByteReader r(bytes, "CDBK " + path);
  r.expect_magic("CDBK");
  const int version = r.get_u8();
  DSRC_CHECK_FMT(version == 1, "CDBK ", path, ": unsupported version ",
                 version);
  const auto k = static_cast<int>(r.get_u32());
  const auto dim = static_cast<int>(r.get_u32());
  DSRC_CHECK_FMT(k >= 1 && dim >= 1, "CDBK ", path, ": bad K or dim");
  const double decay = r.get_f32();
  const double threshold = r.get_f32();
  Codebook cb = make_codebook(k, dim, decay, threshold, 0);
  for (auto& v : cb.vectors) {
    v = r.get_f32();
    DSRC_CHECK_FMT(std::isfinite(v), "CDBK ", path, ": non-finite vector");
  }
  for (auto& u : cb.usage_ema) {
    u = r.get_f32();
    DSRC_CHECK_FMT(std::isfinite(u) && u >= 0.0, "CDBK ", path,
                   ": bad usage value");
  }
  DSRC_CHECK_FMT(r.remaining() == 0, "CDBK ", path, ": trailing bytes");
  // EMA sums consistent with the stored vectors
  for (int c = 0; c < cb.k; ++c) {
    const double u = std::max(cb.usage_ema[c], Codebook::kUsageEps);
    for (int d = 0; d < dim; ++d)
      cb.sum_ema[static_cast<std::size_t>(c) * dim + d] =
          cb.vectors[static_cast<std::size_t>(c) * dim + d] * u;
  }
  return cb;
}

}  // namespace dsrc
