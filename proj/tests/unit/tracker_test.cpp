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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "h2v/crop_planner.hpp"
#include "h2v/metrics.hpp"
#include "h2v/tracker.hpp"

using namespace h2v;

namespace {

// Gray frame with a textured square whose top-left corner is at (x, y).
Frame scene(double x, double y, bool visible = true, int w = 160, int h = 120, int side = 16) {
  Frame f(w, h, 1, 0.3f);
  if (!visible) return f;
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      const int px = static_cast<int>(std::lround(x)) + i;
      const int py = static_cast<int>(std::lround(y)) + j;
      if (px < 0 || py < 0 || px >= w || py >= h) continue;
      f.at(px, py) = ((i / 4 + j / 4) % 2) ? 0.9f : 0.6f;
    }
  }
  return f;
}

}  // namespace

TEST_CASE("tracker: static square keeps a perfect match") {
  Tracker tr;
  tr.init(scene(50, 40), {{46, 36, 24, 24}});
  for (int t = 1; t < 10; ++t) {
    tr.step(scene(50, 40));
    CHECK(tr.tracks()[0].box == BBox{46, 36, 24, 24});
    CHECK(tr.tracks()[0].confidence > 0.99);
    CHECK_FALSE(needs_reselection(tr.tracks()[0], {tr.tracks()[0].box}, CropWindow{20, 0, 68, 120}));
  }
}

TEST_CASE("tracker: translating square stays within a pixel") {
  Tracker tr;
  tr.init(scene(10, 50), {{6, 46, 24, 24}});
  for (int t = 1; t <= 30; ++t) {
    tr.step(scene(10 + 3 * t, 50 + 0.5 * t));
    const Point c = tr.tracks()[0].box.center();
    const Point truth{10 + 3.0 * t + 8, std::lround(50 + 0.5 * t) + 8.0};
    CHECK(distance(c, truth) <= 1.0);
  }
}

TEST_CASE("tracker: disappearance is a lost track") {
  Tracker tr;
  tr.init(scene(60, 40), {{56, 36, 24, 24}});
  for (int t = 1; t < 15; ++t) tr.step(scene(60, 40));
  CHECK_FALSE(tr.tracks()[0].lost);
  tr.step(scene(60, 40, false));
  CHECK(tr.tracks()[0].confidence < tr.config().tau_conf);
  CHECK(tr.tracks()[0].lost);
  CHECK(needs_reselection(tr.tracks()[0], {}, CropWindow{0, 0, 68, 120}) == VerificationCause::kTrackLost);
}

TEST_CASE("needs_reselection rules") {
  Track t;
  t.box = {900, 400, 100, 100};
  t.confidence = 0.9;
  const CropWindow win = crop_window(950, 1920, 1080, {}).window;
  CHECK_FALSE(needs_reselection(t, {t.box}, win));
  t.confidence = 0.3;
  CHECK(needs_reselection(t, {t.box}, win) == VerificationCause::kLowConfidence);
  t.confidence = 0.9;
  // Two subjects spanning 80% of the width; the window covers ~32%.
  const std::vector<BBox> pair = {{192, 300, 100, 100}, {1636, 300, 100, 100}};
  CHECK(needs_reselection(t, pair, win) == VerificationCause::kCoverageViolation);
  // Overhang within the 5% slack is tolerated.
  const std::vector<BBox> edge = {{win.x - 20.0, 300, 100, 100}};
  CHECK(coverage_excess(edge, win) == doctest::Approx(20.0));
  CHECK_FALSE(needs_reselection(t, edge, win));
}

TEST_CASE("kalman covariance stays positive semi-definite") {
  std::mt19937 rng(2);
  std::normal_distribution<double> n(0.0, 5.0);
  BoxKalman kf({100, 100, 30, 40}, 1.0, 2.0);
  double worst = 1.0;
  for (int i = 0; i < 10000; ++i) {
    kf.predict();
    if (i % 3) kf.update({100 + n(rng), 100 + n(rng), 30 + n(rng) * 0.1, 40 + n(rng) * 0.1});
    const Eigen::SelfAdjointEigenSolver<BoxKalman::Cov> es(kf.covariance());
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("kalman_smooth behaviour") {
  CHECK(kalman_smooth({}).empty());
  CHECK(kalman_smooth({{3, 4}}).size() == 1);
  CHECK(kalman_smooth({{3, 4}})[0].x == 3.0);

  const std::vector<Point> flat(20, Point{50, 60});
  const auto s = kalman_smooth(flat);
  for (std::size_t t = 3; t < s.size(); ++t) CHECK(distance(s[t], flat[t]) < 0.5);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> jitter(-4.0, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> z;
    for (int t = 0; t < 120; ++t) z.push_back({200 + 0.3 * t + jitter(rng), 100 + jitter(rng)});
    const double before = jdr(z, 640);
    const double after = jdr(kalman_smooth(z), 640);
    CHECK(after <= 0.6 * before);
  }
}
