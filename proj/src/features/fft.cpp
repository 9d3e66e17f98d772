// Copyright 2026 The H2V Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <utility>

#include "h2v/error.hpp"
#include "h2v/features.hpp"

namespace h2v {

void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) fail(ErrorKind::kConfig, "fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
  if (inverse) {
    for (auto& v : a) v /= static_cast<double>(n);
  }
}

void fft2d(std::vector<std::complex<double>>& a, int w, int h, bool inverse) {
  std::vector<std::complex<double>> line(w);
  for (int y = 0; y < h; ++y) {
    std::copy(a.begin() + static_cast<std::ptrdiff_t>(y) * w,
              a.begin() + static_cast<std::ptrdiff_t>(y + 1) * w, line.begin());
    fft_radix2(line, inverse);
    std::copy(line.begin(), line.end(), a.begin() + static_cast<std::ptrdiff_t>(y) * w);
  }
  line.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) line[y] = a[static_cast<std::size_t>(y) * w + x];
    fft_radix2(line, inverse);
    for (int y = 0; y < h; ++y) a[static_cast<std::size_t>(y) * w + x] = line[y];
  }
}

}  // namespace h2v
