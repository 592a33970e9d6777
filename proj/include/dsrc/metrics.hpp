// dsrc/metrics.hpp
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
// Objective evaluation: voicing decision error, F0 frame error, equal
// error rate over scored verification trials, and token error rate.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dsrc/common.hpp"
#include "dsrc/pitch.hpp"

namespace dsrc {

// Fraction of frames whose voicing decision differs from the reference.
inline double vde(const F0Track& ref, const F0Track& hyp) {
  DSRC_CHECK_DIM(ref.size() == hyp.size(), "vde: length mismatch, ",
                 ref.size(), " vs ", hyp.size());
  DSRC_CHECK(ref.size() > 0, "vde: empty tracks");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    if ((ref.voiced[i] != 0) != (hyp.voiced[i] != 0)) ++errors;
  return static_cast<double>(errors) / static_cast<double>(ref.size());
}

// Fraction of frames with a voicing error or, when both frames are
// voiced, a pitch deviation of more than 20% of the reference pitch.
// A frame contributes at most once.
inline double ffe(const F0Track& ref, const F0Track& hyp) {
  DSRC_CHECK_DIM(ref.size() == hyp.size(), "ffe: length mismatch, ",
                 ref.size(), " vs ", hyp.size());
  DSRC_CHECK(ref.size() > 0, "ffe: empty tracks");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const bool rv = ref.voiced[i] != 0;
    const bool hv = hyp.voiced[i] != 0;
    if (rv != hv) {
      ++errors;
      continue;
    }
    if (rv && hv) {
      DSRC_CHECK(ref.f0[i] > 0.0f, "ffe: reference voiced frame ", i,
                 " has f0 = 0");
      const double deviation =
          std::abs(static_cast<double>(hyp.f0[i]) - ref.f0[i]) / ref.f0[i];
      if (deviation > 0.2) ++errors;  // strictly more than 20%
    }
  }
  return static_cast<double>(errors) / static_cast<double>(ref.size());
}

struct ScoredTrial {
  double score = 0.0;
  bool is_target = false;
};

// Equal error rate: sweep thresholds over the distinct scores, with
// FAR(t) = fraction of non-targets scoring >= t and FRR(t) = fraction of
// targets scoring < t, and linearly interpolate between the two sweep
// points that bracket the FAR = FRR crossing.
inline double eer(std::span<const ScoredTrial> trials) {
  std::vector<double> targets, non_targets;
  for (const ScoredTrial& t : trials) {
    DSRC_CHECK(std::isfinite(t.score), "eer: non-finite score");
    (t.is_target ? targets : non_targets).push_back(t.score);
  }
  DSRC_CHECK(!targets.empty(), "eer: no target trials");
  DSRC_CHECK(!non_targets.empty(), "eer: no non-target trials");
  std::sort(targets.begin(), targets.end());
  std::sort(non_targets.begin(), non_targets.end());

  std::vector<double> thresholds;
  thresholds.reserve(targets.size() + non_targets.size() + 1);
  for (double s : targets) thresholds.push_back(s);
  for (double s : non_targets) thresholds.push_back(s);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  // one threshold above every score: FAR = 0, FRR = 1
  thresholds.push_back(thresholds.back() + 1.0);

  const auto far_at = [&](double t) {
    const auto above = non_targets.end() -
                       std::lower_bound(non_targets.begin(),
                                        non_targets.end(), t);
    return static_cast<double>(above) / static_cast<double>(non_targets.size());
  };
  const auto frr_at = [&](double t) {
    const auto below =
        std::lower_bound(targets.begin(), targets.end(), t) - targets.begin();
    return static_cast<double>(below) / static_cast<double>(targets.size());
  };

  // FAR is non-increasing and FRR non-decreasing in t; at the lowest
  // threshold FAR = 1 >= FRR, so the first sign change brackets the
  // crossing.
  double prev_far = 1.0, prev_frr = 0.0;
  for (double t : thresholds) {
    const double far = far_at(t);
    const double frr = frr_at(t);
    if (far <= frr) {
      const double d_prev = prev_far - prev_frr;  // >= 0
      const double d_cur = far - frr;             // <= 0
      if (d_prev - d_cur <= 0.0) return frr;      // degenerate: already equal
      const double alpha = d_prev / (d_prev - d_cur);
      return prev_frr + alpha * (frr - prev_frr);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return 0.0;  // unreachable: the final sentinel threshold has FAR <= FRR
}

// Levenshtein distance over tokens (unit substitution/insertion/deletion
// costs) divided by the reference length. Serves both WER and PER; may
// exceed 1 when the hypothesis is longer than the reference.
template <typename Token>
double error_rate(std::span<const Token> ref, std::span<const Token> hyp) {
  DSRC_CHECK(!ref.empty(), "error_rate: empty reference");
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[m]) / static_cast<double>(n);
}

inline double error_rate(const std::vector<std::string>& ref,
                         const std::vector<std::string>& hyp) {
  return error_rate(std::span<const std::string>(ref),
                    std::span<const std::string>(hyp));
}

// Trials file: text lines "score<TAB>0|1" (1 marks a target trial).
inline std::vector<ScoredTrial> load_trials(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trials file: " + path);
  std::vector<ScoredTrial> trials;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ScoredTrial t;
    int label = -1;
    if (!(ls >> t.score >> label) || (label != 0 && label != 1))
      throw FormatError(detail::str_cat("trials ", path, ": bad line ",
                                        line_no, ": \"", line, "\""));
    t.is_target = label == 1;
    trials.push_back(t);
  }
  DSRC_CHECK_FMT(!trials.empty(), "trials ", path, ": no trials");
  return trials;
}

// Token file: whitespace-separated tokens, all lines concatenated.
inline std::vector<std::string> load_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open token file: " + path);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace dsrc
