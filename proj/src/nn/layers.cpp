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

#include "h2v/nn/layers.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"

namespace h2v::nn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;
using MapVec = Eigen::Map<Eigen::VectorXd>;

void he_uniform(Tensor& t, int fan_in, Rng& rng, double gain) {
  const double bound = gain * std::sqrt(6.0 / fan_in);
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& v : t.data) v = dist(rng);
}

}  // namespace

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + ")";
}

void check_finite(const Tensor& t, const char* op) {
  for (double v : t.data) {
    if (!std::isfinite(v)) fail(ErrorKind::kFault, std::string("non-finite value after ") + op);
  }
}

void zero_grads(const ParamList& params) {
  for (auto* p : params) p->grad.zero();
}

std::size_t count_params(const ParamList& params) {
  std::size_t n = 0;
  for (const auto* p : params) n += p->value.size();
  return n;
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::string name, int in_ch, int out_ch, int kernel, int stride)
    : in_ch_(in_ch),
      out_ch_(out_ch),
      kernel_(kernel),
      stride_(stride),
      pad_(kernel / 2),
      weight_(name + ".weight", {out_ch, in_ch, kernel, kernel}),
      bias_(name + ".bias", {out_ch}) {}

void Conv2d::init(Rng& rng, double gain) {
  he_uniform(weight_.value, in_ch_ * kernel_ * kernel_, rng, gain);
  bias_.value.zero();
}

Tensor Conv2d::forward(const Tensor& x) {
  if (x.rank() != 4 || x.dim(1) != in_ch_) {
    fail(ErrorKind::kConfig, "conv " + weight_.name + " expects " + std::to_string(in_ch_) +
                                 " channels, got shape " + shape_str(x.shape));
  }
  const int n_count = x.dim(0);
  const int h = x.dim(2);
  const int w = x.dim(3);
  const int ho = out_size(h);
  const int wo = out_size(w);
  const int rows = in_ch_ * kernel_ * kernel_;
  const int cols = ho * wo;
  const std::size_t total = static_cast<std::size_t>(n_count) * cols;
  in_shape_ = x.shape;
  // One im2col matrix for the whole batch: column n*cols + p is output
  // pixel p of item n.
  cols_.assign(static_cast<std::size_t>(rows) * total, 0.0);
  for (int n = 0; n < n_count; ++n) {
    const double* in = x.data.data() + static_cast<std::size_t>(n) * in_ch_ * h * w;
    for (int c = 0; c < in_ch_; ++c) {
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          const std::size_t row = static_cast<std::size_t>(c) * kernel_ * kernel_ + ky * kernel_ + kx;
          double* dst = cols_.data() + row * total + static_cast<std::size_t>(n) * cols;
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = oy * stride_ + ky - pad_;
            if (iy < 0 || iy >= h) continue;
            const double* src = in + (static_cast<std::size_t>(c) * h + iy) * w;
            for (int ox = 0; ox < wo; ++ox) {
              const int ix = ox * stride_ + kx - pad_;
              if (ix >= 0 && ix < w) dst[oy * wo + ox] = src[ix];
            }
          }
        }
      }
    }
  }
  const ConstMapMat wmat(weight_.value.data.data(), out_ch_, rows);
  const Eigen::Map<const Eigen::VectorXd> bvec(bias_.value.data.data(), out_ch_);
  RowMat out = wmat * ConstMapMat(cols_.data(), rows, static_cast<Eigen::Index>(total));
  out.colwise() += bvec;
  Tensor y({n_count, out_ch_, ho, wo});
  for (int n = 0; n < n_count; ++n) {
    for (int o = 0; o < out_ch_; ++o) {
      const double* src = out.data() + static_cast<std::size_t>(o) * total + static_cast<std::size_t>(n) * cols;
      std::copy(src, src + cols, y.data.data() + (static_cast<std::size_t>(n) * out_ch_ + o) * cols);
    }
  }
  check_finite(y, "conv2d");
  return y;
}

Tensor Conv2d::backward(const Tensor& dy) {
  const int n_count = in_shape_[0];
  const int h = in_shape_[2];
  const int w = in_shape_[3];
  const int ho = dy.dim(2);
  const int wo = dy.dim(3);
  const int rows = in_ch_ * kernel_ * kernel_;
  const int cols = ho * wo;
  const std::size_t total = static_cast<std::size_t>(n_count) * cols;
  RowMat g(out_ch_, static_cast<Eigen::Index>(total));
  for (int n = 0; n < n_count; ++n) {
    for (int o = 0; o < out_ch_; ++o) {
      const double* src = dy.data.data() + (static_cast<std::size_t>(n) * out_ch_ + o) * cols;
      std::copy(src, src + cols, g.data() + static_cast<std::size_t>(o) * total + static_cast<std::size_t>(n) * cols);
    }
  }
  const ConstMapMat col(cols_.data(), rows, static_cast<Eigen::Index>(total));
  MapMat(weight_.grad.data.data(), out_ch_, rows).noalias() += g * col.transpose();
  MapVec(bias_.grad.data.data(), out_ch_) += g.rowwise().sum();
  const ConstMapMat wmat(weight_.value.data.data(), out_ch_, rows);
  const RowMat dcol = wmat.transpose() * g;
  Tensor dx(in_shape_);
  for (int n = 0; n < n_count; ++n) {
    double* dxn = dx.data.data() + static_cast<std::size_t>(n) * in_ch_ * h * w;
    for (int c = 0; c < in_ch_; ++c) {
      for (int ky = 0; ky < kernel_; ++ky) {
        for (int kx = 0; kx < kernel_; ++kx) {
          const std::size_t row = static_cast<std::size_t>(c) * kernel_ * kernel_ + ky * kernel_ + kx;
          const double* src = dcol.data() + row * total + static_cast<std::size_t>(n) * cols;
          for (int oy = 0; oy < ho; ++oy) {
            const int iy = oy * stride_ + ky - pad_;
            if (iy < 0 || iy >= h) continue;
            double* dst = dxn + (static_cast<std::size_t>(c) * h + iy) * w;
            for (int ox = 0; ox < wo; ++ox) {
              const int ix = ox * stride_ + kx - pad_;
              if (ix >= 0 && ix < w) dst[ix] += src[oy * wo + ox];
            }
          }
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------- Linear

Linear::Linear(std::string name, int in, int out)
    : in_(in), out_(out), weight_(name + ".weight", {out, in}), bias_(name + ".bias", {out}) {}

void Linear::init(Rng& rng, double gain) {
  he_uniform(weight_.value, in_, rng, gain);
  bias_.value.zero();
}

Tensor Linear::forward(const Tensor& x) {
  if (x.rank() != 2 || x.dim(1) != in_) {
    fail(ErrorKind::kConfig, "linear " + weight_.name + " expects " + std::to_string(in_) +
                                 " features, got shape " + shape_str(x.shape));
  }
  x_ = x;
  const int n = x.dim(0);
  Tensor y({n, out_});
  const ConstMapMat wmat(weight_.value.data.data(), out_, in_);
  const Eigen::Map<const Eigen::RowVectorXd> b(bias_.value.data.data(), out_);
  MapMat out(y.data.data(), n, out_);
  out.noalias() = ConstMapMat(x.data.data(), n, in_) * wmat.transpose();
  out.rowwise() += b;
  check_finite(y, "linear");
  return y;
}

Tensor Linear::backward(const Tensor& dy) {
  const int n = x_.dim(0);
  const ConstMapMat g(dy.data.data(), n, out_);
  const ConstMapMat xin(x_.data.data(), n, in_);
  MapMat(weight_.grad.data.data(), out_, in_).noalias() += g.transpose() * xin;
  Eigen::Map<Eigen::RowVectorXd>(bias_.grad.data.data(), out_) += g.colwise().sum();
  Tensor dx({n, in_});
  MapMat(dx.data.data(), n, in_).noalias() = g * ConstMapMat(weight_.value.data.data(), out_, in_);
  return dx;
}

// ---------------------------------------------------------------- ReLU

Tensor ReLU::forward(const Tensor& x) {
  Tensor y = x;
  mask_.assign(x.size(), false);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y.data[i] > 0.0) {
      mask_[i] = true;
    } else {
      y.data[i] = 0.0;
    }
  }
  return y;
}

Tensor ReLU::backward(const Tensor& dy) const {
  Tensor dx = dy;
  for (std::size_t i = 0; i < dx.size(); ++i) {
    if (!mask_[i]) dx.data[i] = 0.0;
  }
  return dx;
}

// ---------------------------------------------------------------- GAP

Tensor gap_forward(const Tensor& x) {
  const int n = x.dim(0);
  const int c = x.dim(1);
  const std::size_t hw = static_cast<std::size_t>(x.dim(2)) * x.dim(3);
  Tensor y({n, c});
  for (int i = 0; i < n * c; ++i) {
    const double* p = x.data.data() + i * hw;
    double s = 0.0;
    for (std::size_t k = 0; k < hw; ++k) s += p[k];
    y.data[i] = s / static_cast<double>(hw);
  }
  return y;
}

Tensor gap_backward(const Tensor& dy, const std::vector<int>& in_shape) {
  Tensor dx(in_shape);
  const std::size_t hw = static_cast<std::size_t>(in_shape[2]) * in_shape[3];
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const double g = dy.data[i] / static_cast<double>(hw);
    std::fill(dx.data.begin() + i * hw, dx.data.begin() + (i + 1) * hw, g);
  }
  return dx;
}

Tensor concat_features(const Tensor& a, const Tensor& b) {
  const int n = a.dim(0);
  const int da = a.dim(1);
  const int db = b.dim(1);
  Tensor y({n, da + db});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < da; ++j) y.at(i, j) = a.at(i, j);
    for (int j = 0; j < db; ++j) y.at(i, da + j) = b.at(i, j);
  }
  return y;
}

Tensor split_features_head(const Tensor& d, int a) {
  const int n = d.dim(0);
  Tensor y({n, a});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < a; ++j) y.at(i, j) = d.at(i, j);
  }
  return y;
}

// ---------------------------------------------------------------- Bottleneck

Bottleneck::Bottleneck(const std::string& name, int in_ch, int mid_ch, int out_ch, int stride)
    : reduce_(name + ".reduce", in_ch, mid_ch, 1, 1),
      conv_(name + ".conv", mid_ch, mid_ch, 3, stride),
      expand_(name + ".expand", mid_ch, out_ch, 1, 1),
      has_projection_(in_ch != out_ch || stride != 1) {
  if (has_projection_) project_ = Conv2d(name + ".project", in_ch, out_ch, 1, stride);
}

void Bottleneck::init(Rng& rng) {
  reduce_.init(rng);
  conv_.init(rng);
  expand_.init(rng, 0.25);
  if (has_projection_) project_.init(rng);
}

Tensor Bottleneck::forward(const Tensor& x) {
  Tensor h = relu1_.forward(reduce_.forward(x));
  h = relu2_.forward(conv_.forward(h));
  h = expand_.forward(h);
  if (has_projection_) {
    const Tensor skip = project_.forward(x);
    for (std::size_t i = 0; i < h.size(); ++i) h.data[i] += skip.data[i];
  } else {
    for (std::size_t i = 0; i < h.size(); ++i) h.data[i] += x.data[i];
  }
  return relu_out_.forward(h);
}

Tensor Bottleneck::backward(const Tensor& dy) {
  const Tensor d_sum = relu_out_.backward(dy);
  Tensor dx = reduce_.backward(relu1_.backward(conv_.backward(relu2_.backward(expand_.backward(d_sum)))));
  const Tensor d_skip = has_projection_ ? project_.backward(d_sum) : d_sum;
  for (std::size_t i = 0; i < dx.size(); ++i) dx.data[i] += d_skip.data[i];
  return dx;
}

void Bottleneck::collect(ParamList& out) {
  reduce_.collect(out);
  conv_.collect(out);
  expand_.collect(out);
  if (has_projection_) project_.collect(out);
}

void Bottleneck::append_pattern(std::vector<bool>& out) const {
  for (const auto* r : {&relu1_, &relu2_, &relu_out_}) {
    out.insert(out.end(), r->mask().begin(), r->mask().end());
  }
}

// ---------------------------------------------------------------- losses

double mse_loss(const Tensor& pred, const Tensor& target, Tensor* grad) {
  if (pred.size() != target.size() || pred.size() == 0) {
    fail(ErrorKind::kConfig, "mse_loss needs equal non-empty sizes");
  }
  const double n = static_cast<double>(pred.size());
  double s = 0.0;
  if (grad) *grad = Tensor(pred.shape);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    s += d * d;
    if (grad) grad->data[i] = 2.0 * d / n;
  }
  return s / n;
}

}  // namespace h2v::nn
