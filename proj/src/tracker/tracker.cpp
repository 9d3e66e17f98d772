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

#include "h2v/tracker.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"

namespace h2v {

namespace {

using Mat46 = Eigen::Matrix<double, 4, 6>;

Mat46 observation() {
  Mat46 h = Mat46::Zero();
  for (int i = 0; i < 4; ++i) h(i, i) = 1.0;
  return h;
}

// Prefix sums of I and I^2 with a zero first row and column.
struct Integral {
  int w = 0;
  std::vector<double> s, s2;

  explicit Integral(const Frame& g) : w(g.width() + 1) {
    const int h = g.height() + 1;
    s.assign(static_cast<std::size_t>(w) * h, 0.0);
    s2 = s;
    for (int y = 1; y < h; ++y) {
      double row = 0.0, row2 = 0.0;
      for (int x = 1; x < w; ++x) {
        const double v = g.at(x - 1, y - 1);
        row += v;
        row2 += v * v;
        s[y * w + x] = s[(y - 1) * w + x] + row;
        s2[y * w + x] = s2[(y - 1) * w + x] + row2;
      }
    }
  }
  double rect(const std::vector<double>& a, int x, int y, int rw, int rh) const {
    return a[(y + rh) * w + x + rw] - a[y * w + x + rw] - a[(y + rh) * w + x] + a[y * w + x];
  }
};

struct IntBox {
  int x, y, w, h;
};

IntBox to_int_box(const BBox& b, int fw, int fh) {
  int w = std::clamp(static_cast<int>(std::lround(b.w)), 2, fw);
  int h = std::clamp(static_cast<int>(std::lround(b.h)), 2, fh);
  const int x = std::clamp(static_cast<int>(std::lround(b.x)), 0, fw - w);
  const int y = std::clamp(static_cast<int>(std::lround(b.y)), 0, fh - h);
  return {x, y, w, h};
}

double ncc_at(const Frame& gray, const Integral& ii, const std::vector<double>& tz, double t_norm,
              int x, int y, int tw, int th) {
  const double n = static_cast<double>(tw) * th;
  const double sum = ii.rect(ii.s, x, y, tw, th);
  const double var = ii.rect(ii.s2, x, y, tw, th) - sum * sum / n;
  if (var < 1e-9 * n || t_norm <= 0.0) return 0.0;
  double cross = 0.0;
  for (int j = 0; j < th; ++j) {
    const float* row = &gray.data()[static_cast<std::size_t>(y + j) * gray.width() + x];
    const double* trow = &tz[static_cast<std::size_t>(j) * tw];
    for (int i = 0; i < tw; ++i) cross += trow[i] * row[i];
  }
  return cross / std::sqrt(t_norm * var);
}

}  // namespace

// ---------------------------------------------------------------- Kalman

BoxKalman::BoxKalman(const BBox& box, double sigma_p, double sigma_m) {
  const Point c = box.center();
  x_ << c.x, c.y, box.w, box.h, 0.0, 0.0;
  p_ = Cov::Zero();
  p_.diagonal() << sigma_m * sigma_m, sigma_m * sigma_m, sigma_m * sigma_m, sigma_m * sigma_m, 100.0, 100.0;
  f_ = Cov::Identity();
  f_(0, 4) = 1.0;
  f_(1, 5) = 1.0;
  const double q = sigma_p * sigma_p;
  q_ = Cov::Zero();
  for (int a = 0; a < 2; ++a) {
    q_(a, a) = 0.25 * q;
    q_(a, a + 4) = q_(a + 4, a) = 0.5 * q;
    q_(a + 4, a + 4) = q;
  }
  q_(2, 2) = q_(3, 3) = 0.25 * q;
  r_ = Eigen::Matrix4d::Identity() * sigma_m * sigma_m;
}

void BoxKalman::predict() {
  x_ = f_ * x_;
  p_ = f_ * p_ * f_.transpose() + q_;
  p_ = 0.5 * (p_ + p_.transpose());
}

void BoxKalman::update(const BBox& measured) {
  const Mat46 h = observation();
  const Point c = measured.center();
  const Eigen::Vector4d z(c.x, c.y, measured.w, measured.h);
  const Eigen::Matrix4d s = h * p_ * h.transpose() + r_;
  const Eigen::Matrix<double, 6, 4> k = p_ * h.transpose() * s.inverse();
  x_ += k * (z - h * x_);
  // Joseph form keeps the covariance symmetric positive semi-definite.
  const Cov ikh = Cov::Identity() - k * h;
  p_ = ikh * p_ * ikh.transpose() + k * r_ * k.transpose();
  p_ = 0.5 * (p_ + p_.transpose());
}

BBox BoxKalman::box() const {
  return {x_(0) - x_(2) / 2.0, x_(1) - x_(3) / 2.0, x_(2), x_(3)};
}

// ---------------------------------------------------------------- Tracker

void Tracker::init(const Frame& gray, const std::vector<BBox>& boxes) {
  if (gray.channels() != 1) fail(ErrorKind::kConfig, "tracker expects gray frames");
  tracks_.clear();
  for (const auto& b : boxes) {
    const IntBox ib = to_int_box(b, gray.width(), gray.height());
    Track tr;
    tr.box = {double(ib.x), double(ib.y), double(ib.w), double(ib.h)};
    tr.patch_template = crop(gray, ib.x, ib.y, ib.w, ib.h);
    tr.kalman = BoxKalman(tr.box, cfg_.sigma_p, cfg_.sigma_m);
    tracks_.push_back(std::move(tr));
  }
}

void Tracker::step(const Frame& gray) {
  if (gray.channels() != 1) fail(ErrorKind::kConfig, "tracker expects gray frames");
  for (auto& tr : tracks_) {
    if (!tr.lost) step_track(tr, gray);
  }
}

void Tracker::step_track(Track& tr, const Frame& gray) const {
  const int tw = tr.patch_template.width();
  const int th = tr.patch_template.height();
  tr.kalman.predict();
  const Point pc = tr.kalman.box().center();
  const int rx = static_cast<int>(std::ceil(cfg_.search_scale * tw));
  const int ry = static_cast<int>(std::ceil(cfg_.search_scale * th));
  const int x0 = static_cast<int>(std::lround(pc.x - tw / 2.0));
  const int y0 = static_cast<int>(std::lround(pc.y - th / 2.0));
  const int xa = std::max(0, x0 - rx), xb = std::min(gray.width() - tw, x0 + rx);
  const int ya = std::max(0, y0 - ry), yb = std::min(gray.height() - th, y0 + ry);
  if (xa > xb || ya > yb) {
    tr.lost = true;
    tr.confidence = 0.0;
    return;
  }

  std::vector<double> tz(tr.patch_template.data().begin(), tr.patch_template.data().end());
  double mean = 0.0;
  for (double v : tz) mean += v;
  mean /= static_cast<double>(tz.size());
  double t_norm = 0.0;
  for (auto& v : tz) {
    v -= mean;
    t_norm += v * v;
  }
  const Integral ii(gray);
  double best = -2.0, best_d = 0.0;
  int bx = xa, by = ya;
  for (int y = ya; y <= yb; ++y) {
    for (int x = xa; x <= xb; ++x) {
      const double v = ncc_at(gray, ii, tz, t_norm, x, y, tw, th);
      const double d = std::hypot(x - x0, y - y0);
      if (v > best + 1e-12 || (std::abs(v - best) <= 1e-12 && d < best_d)) {
        best = v;
        best_d = d;
        bx = x;
        by = y;
      }
    }
  }
  tr.confidence = std::clamp(best, 0.0, 1.0);
  if (tr.confidence < cfg_.lost_conf) {
    tr.lost = true;
    return;
  }
  tr.box = {double(bx), double(by), double(tw), double(th)};
  tr.kalman.update(tr.box);
  if (tr.confidence >= cfg_.tau_conf) {
    const Frame patch = crop(gray, bx, by, tw, th);
    auto& t = tr.patch_template.data();
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<float>((1.0 - cfg_.template_alpha) * t[i] + cfg_.template_alpha * patch.data()[i]);
    }
  }
}

// ---------------------------------------------------------------- verification

SelectionReason to_reason(VerificationCause c) {
  switch (c) {
    case VerificationCause::kLowConfidence: return SelectionReason::kLowConfidence;
    case VerificationCause::kCoverageViolation: return SelectionReason::kCoverageViolation;
    case VerificationCause::kTrackLost: return SelectionReason::kTrackLost;
  }
  return SelectionReason::kLowConfidence;
}

double coverage_excess(const std::vector<BBox>& boxes, const CropWindow& window) {
  if (boxes.empty()) return 0.0;
  BBox u = boxes.front();
  for (const auto& b : boxes) u = union_box(u, b);
  const BBox w = window.box();
  return std::max(0.0, w.left() - u.left()) + std::max(0.0, u.right() - w.right());
}

std::optional<VerificationCause> needs_reselection(const Track& primary,
                                                   const std::vector<BBox>& subject_boxes,
                                                   const CropWindow& window,
                                                   const TrackerConfig& cfg) {
  if (primary.lost) return VerificationCause::kTrackLost;
  if (primary.confidence < cfg.tau_conf) return VerificationCause::kLowConfidence;
  if (coverage_excess(subject_boxes, window) > cfg.coverage_slack * window.w) {
    return VerificationCause::kCoverageViolation;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- smoothing

std::vector<Point> kalman_smooth(const std::vector<Point>& centers, double sigma_p, double sigma_m) {
  if (centers.size() < 2) return centers;
  using Vec4 = Eigen::Vector4d;
  using Mat4 = Eigen::Matrix4d;
  Mat4 f = Mat4::Identity();
  f(0, 2) = f(1, 3) = 1.0;
  const double q = sigma_p * sigma_p;
  Mat4 qm = Mat4::Zero();
  for (int a = 0; a < 2; ++a) {
    qm(a, a) = 0.25 * q;
    qm(a, a + 2) = qm(a + 2, a) = 0.5 * q;
    qm(a + 2, a + 2) = q;
  }
  Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
  h(0, 0) = h(1, 1) = 1.0;
  const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * sigma_m * sigma_m;
  Vec4 x(centers[0].x, centers[0].y, 0.0, 0.0);
  Mat4 p = Mat4::Zero();
  p.diagonal() << sigma_m * sigma_m, sigma_m * sigma_m, 100.0, 100.0;

  std::vector<Point> out{centers[0]};
  out.reserve(centers.size());
  for (std::size_t t = 1; t < centers.size(); ++t) {
    x = f * x;
    p = f * p * f.transpose() + qm;
    const Eigen::Vector2d z(centers[t].x, centers[t].y);
    const Eigen::Matrix2d s = h * p * h.transpose() + r;
    const Eigen::Matrix<double, 4, 2> k = p * h.transpose() * s.inverse();
    x += k * (z - h * x);
    const Mat4 ikh = Mat4::Identity() - k * h;
    p = ikh * p * ikh.transpose() + k * r * k.transpose();
    out.push_back({x(0), x(1)});
  }
  return out;
}

}  // namespace h2v
