// dsrc/fft.hpp
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
// Self-contained discrete Fourier transform for real frames: iterative
// radix-2 when the size is a power of two, direct DFT otherwise.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace dsrc::detail {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline void fft_radix2(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> u = a[i + k];
        std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Power spectrum |X_k|^2 for k = 0..n/2 of a real frame zero-padded to n.
inline std::vector<double> power_spectrum(const std::vector<double>& frame,
                                          std::size_t n) {
  std::vector<double> power(n / 2 + 1, 0.0);
  if (is_power_of_two(n)) {
    std::vector<std::complex<double>> a(n, {0.0, 0.0});
    for (std::size_t i = 0; i < frame.size() && i < n; ++i) a[i] = frame[i];
    fft_radix2(a);
    for (std::size_t k = 0; k <= n / 2; ++k) power[k] = std::norm(a[k]);
  } else {
    // Direct DFT; only hit for unusual fft sizes, correctness over speed.
    const std::size_t m = std::min(frame.size(), n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double ang =
            -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(t) /
            static_cast<double>(n);
        re += frame[t] * std::cos(ang);
        im += frame[t] * std::sin(ang);
      }
      power[k] = re * re + im * im;
    }
  }
  return power;
}

}  // namespace dsrc::detail
