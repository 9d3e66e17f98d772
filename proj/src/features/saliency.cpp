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

#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"
#include "h2v/features.hpp"

namespace h2v {

namespace {

using Grid = std::vector<double>;

int reflect(int i, int n) {
  while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
  return i;
}

Grid gaussian_blur(const Grid& src, int n, double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * r + 1);
  double ks = 0.0;
  for (int i = -r; i <= r; ++i) ks += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (auto& v : k) v /= ks;
  Grid tmp(src.size(), 0.0), out(src.size(), 0.0);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * src[y * n + reflect(x + i, n)];
      tmp[y * n + x] = s;
    }
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i) s += k[i + r] * tmp[reflect(y + i, n) * n + x];
      out[y * n + x] = s;
    }
  }
  return out;
}

}  // namespace

FeatureMap spectral_residual_saliency(const Frame& frame, const SaliencyConfig& cfg) {
  const int n = cfg.size;
  if (n < 4 || (n & (n - 1)) != 0) fail(ErrorKind::kConfig, "saliency size must be a power of two >= 4");
  const int gw = grid_cells(frame.width());
  const int gh = grid_cells(frame.height());
  FeatureMap out(gw, gh, 1);

  const Frame small = resize_area(frame.to_gray(), n, n);
  Grid img(static_cast<std::size_t>(n) * n);
  double mean = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) mean += img[i] = small.data()[i];
  mean /= static_cast<double>(img.size());
  double var = 0.0;
  for (auto& v : img) {
    v -= mean;
    var += v * v;
  }
  if (std::sqrt(var / static_cast<double>(img.size())) < 1e-6) return out;

  std::vector<std::complex<double>> spec(img.begin(), img.end());
  fft2d(spec, n, n, false);
  Grid logamp(spec.size()), phase(spec.size());
  double peak = 0.0;
  for (const auto& v : spec) peak = std::max(peak, std::abs(v));
  // Exact spectral zeros (e.g. sinc nulls of flat boxes) would dominate the
  // residual; the log is floored relative to the peak amplitude.
  const double amp_floor = cfg.amplitude_floor * peak;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    logamp[i] = std::log(std::abs(spec[i]) + amp_floor);
    phase[i] = std::arg(spec[i]);
  }
  // The mean was removed, so the DC log-amplitude is meaningless; borrow the
  // mean of its circular neighbours.
  const auto at = [&](const Grid& g, int x, int y) { return g[((y + n) % n) * n + (x + n) % n]; };
  double dc = 0.0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      if (dx || dy) dc += at(logamp, dx, dy);
    }
  }
  logamp[0] = dc / 8.0;

  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double box = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) box += at(logamp, x + dx, y + dy);
      }
      const std::size_t i = static_cast<std::size_t>(y) * n + x;
      spec[i] = std::polar(std::exp(logamp[i] - box / 9.0), phase[i]);
    }
  }
  spec[0] = 0.0;
  fft2d(spec, n, n, true);
  Grid power(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) power[i] = std::norm(spec[i]);
  power = gaussian_blur(power, n, cfg.blur_sigma);

  // Bilinear upscale back to input resolution, then the mean of each cell.
  Frame pf(n, n, 1);
  for (std::size_t i = 0; i < power.size(); ++i) pf.data()[i] = static_cast<float>(power[i]);
  const Frame up = resize_bilinear(pf, frame.width(), frame.height());
  std::vector<double> cells(static_cast<std::size_t>(gw) * gh, 0.0);
  std::vector<int> counts(cells.size(), 0);
  for (int y = 0; y < up.height(); ++y) {
    for (int x = 0; x < up.width(); ++x) {
      const std::size_t c = static_cast<std::size_t>(y / kFeatureStride) * gw + x / kFeatureStride;
      cells[c] += up.at(x, y);
      ++counts[c];
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] /= counts[i];
  const auto [lo, hi] = std::minmax_element(cells.begin(), cells.end());
  const double range = *hi - *lo;
  if (!(range > 1e-12 * *hi)) return out;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = static_cast<float>((cells[i] - *lo) / range);
  }
  return out;
}

}  // namespace h2v
