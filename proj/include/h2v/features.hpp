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

#pragma once

#include <complex>
#include <filesystem>
#include <memory>
#include <vector>

#include "h2v/frame.hpp"
#include "h2v/nn/models.hpp"
#include "h2v/nn/tensor.hpp"

namespace h2v {

inline constexpr int kFeatureStride = 16;

// Cells of the stride-16 grid covering `pixels`.
inline int grid_cells(int pixels) { return (pixels + kFeatureStride - 1) / kFeatureStride; }

// Channel-major (C,H,W) map on the stride-16 grid.
struct FeatureMap {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {}

  float& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float max_value() const;
  float min_value() const;
  double mean() const;
};

struct FeatureStack {
  FeatureMap sal;
  FeatureMap blur;
  FeatureMap embed;

  int width() const { return sal.width; }
  int height() const { return sal.height; }
  int channels() const { return 2 + embed.channels; }
  // [sal, blur, embed...] as one map.
  FeatureMap concat() const;
  // concat() as a (1, 2+C, H, W) tensor for RoIAlign.
  nn::Tensor to_tensor() const;
};

// 1-D radix-2 FFT in place; size must be a power of two. inverse applies 1/n.
void fft_radix2(std::vector<std::complex<double>>& a, bool inverse);
// Rows then columns of a row-major w x h grid; both powers of two.
void fft2d(std::vector<std::complex<double>>& a, int w, int h, bool inverse);

struct TenengradConfig {
  double grad_threshold = 0.05;
};

// Sobel magnitude (kernels scaled by 1/8, replicated border) on luma,
// zeroed below the threshold, averaged per 16x16 cell, divided by the
// frame's max cell unless that max is below 1e-6.
FeatureMap tenengrad_map(const Frame& frame, const TenengradConfig& cfg = {});

struct SaliencyConfig {
  int size = 64;               // spectral step resolution, power of two
  double blur_sigma = 2.5;     // Gaussian on the squared response, in spectral pixels
  double amplitude_floor = 1e-3;  // added to |F| before the log, relative to max |F|
};

// Spectral residual saliency, bilinearly resampled to the stride-16 grid
// and min-max normalized.
FeatureMap spectral_residual_saliency(const Frame& frame, const SaliencyConfig& cfg = {});

// Per-frame producer of one stack component at the stride-16 grid.
class FeatureProvider {
 public:
  virtual ~FeatureProvider() = default;
  virtual int channels() const = 0;
  virtual FeatureMap compute(const Frame& frame) = 0;
};

class SaliencyProvider : public FeatureProvider {
 public:
  explicit SaliencyProvider(SaliencyConfig cfg = {}) : cfg_(cfg) {}
  int channels() const override { return 1; }
  FeatureMap compute(const Frame& frame) override { return spectral_residual_saliency(frame, cfg_); }

 private:
  SaliencyConfig cfg_;
};

class TenengradProvider : public FeatureProvider {
 public:
  explicit TenengradProvider(TenengradConfig cfg = {}) : cfg_(cfg) {}
  int channels() const override { return 1; }
  FeatureMap compute(const Frame& frame) override { return tenengrad_map(frame, cfg_); }

 private:
  TenengradConfig cfg_;
};

// Runs the encoder on RGB (gray replicated) and bilinearly resizes its
// output to the stride-16 grid.
class EncoderProvider : public FeatureProvider {
 public:
  explicit EncoderProvider(nn::EncoderModel& encoder) : encoder_(encoder) {}
  int channels() const override { return encoder_.config().channels; }
  FeatureMap compute(const Frame& frame) override;

 private:
  nn::EncoderModel& encoder_;
};

class ZeroProvider : public FeatureProvider {
 public:
  explicit ZeroProvider(int channels) : channels_(channels) {}
  int channels() const override { return channels_; }
  FeatureMap compute(const Frame& frame) override {
    return FeatureMap(grid_cells(frame.width()), grid_cells(frame.height()), channels_);
  }

 private:
  int channels_;
};

// (1,3,H,W) tensor of the frame; gray frames are replicated to 3 channels.
nn::Tensor frame_to_tensor(const Frame& frame);

// Throws kConfig when the embedding has no channels, kDimensionMismatch when
// a provider returns a map off the stride-16 grid.
FeatureStack build_feature_stack(const Frame& frame, FeatureProvider& sal, FeatureProvider& blur,
                                 FeatureProvider& embed);
FeatureStack build_feature_stack(const Frame& frame, nn::EncoderModel& encoder);

// Writes each channel as an 8-bit PGM, min-max scaled: <prefix>_sal.pgm,
// <prefix>_blur.pgm, <prefix>_embed<k>.pgm.
void dump_feature_stack(const FeatureStack& stack, const std::filesystem::path& dir,
                        const std::string& prefix);

}  // namespace h2v
