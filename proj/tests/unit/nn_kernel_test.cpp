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

#include <cmath>
#include <random>
#include <sstream>

#include "h2v/error.hpp"
#include "h2v/nn/checkpoint.hpp"
#include "h2v/nn/grad_check.hpp"
#include "h2v/nn/layers.hpp"
#include "h2v/nn/models.hpp"
#include "h2v/nn/optim.hpp"
#include "h2v/nn/roi_align.hpp"

using namespace h2v;
using namespace h2v::nn;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> d(lo, hi);
  for (auto& v : t.data) v = d(rng);
  return t;
}

double dot(const Tensor& a, const Tensor& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

std::vector<GradCheckVar> param_vars(const ParamList& params) {
  std::vector<GradCheckVar> v;
  for (auto* p : params) v.push_back({&p->value, &p->grad});
  return v;
}

}  // namespace

TEST_CASE("roi_align of a constant map is constant") {
  Tensor f({1, 3, 10, 12}, 0.7);
  const auto y = roi_align_forward(f, {BBox{13, 20, 77, 41}, BBox{-10, -5, 60, 30}, BBox{100, 90, 90, 80}});
  REQUIRE(y.shape == std::vector<int>{3, 3, 14, 14});
  // Every sample of the first box lies inside the map.
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 14; ++i) {
    for (int j = 0; j < 14; ++j) CHECK(y.at(0, c, i, j) == doctest::Approx(0.7).epsilon(1e-12));
    }
  }
}

TEST_CASE("roi_align on a ramp matches a dense oversampling oracle") {
  const int h = 16, w = 16;
  Tensor f({1, 1, h, w});
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f.at(0, 0, y, x) = x;
  }
  const BBox box{0, 16, 128, 96};  // feature cols [0,8), rows [1,7)
  const auto out = roi_align_forward(f, {box});
  const double bw = 8.0 / 14.0, bh = 6.0 / 14.0;
  double worst = 0.0;
  for (int py = 0; py < 14; ++py) {
    for (int px = 0; px < 14; ++px) {
    double acc = 0.0;
    for (int iy = 0; iy < 8; ++iy) {
      for (int ix = 0; ix < 8; ++ix) {
        acc += bilinear_sample(f.data.data(), h, w, 1.0 + (py + (iy + 0.5) / 8) * bh,
                               (px + (ix + 0.5) / 8) * bw);
      }
    }
    worst = std::max(worst, std::abs(out.at(0, 0, py, px) - acc / 64.0));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("roi_align rejects degenerate boxes") {
  Tensor f({1, 1, 8, 8}, 1.0);
  CHECK_THROWS_AS(roi_align_forward(f, {BBox{4, 4, 0, 10}}), Error);
  try {
    roi_align_forward(f, {BBox{4, 4, 10, -1}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kGeometry);
  }
}

constexpr int kSeeds = 50;

TEST_CASE("grad check: linear 8 -> 4") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    Linear fc("fc", 8, 4);
    fc.init(rng);
    Tensor x = random_tensor({3, 8}, rng);
    const Tensor r = random_tensor({3, 4}, rng);
    ParamList ps;
    fc.collect(ps);
    zero_grads(ps);
    fc.forward(x);
    const Tensor dx = fc.backward(r);
    auto vars = param_vars(ps);
    vars.push_back({&x, &dx});
    const auto res = grad_check([&] { return dot(fc.forward(x), r); }, {}, vars);
    CHECK(res.max_rel_error < 1e-4);
  }
}

TEST_CASE("grad check: relu away from the kink") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    ReLU relu;
    Tensor x = random_tensor({4, 6}, rng);
    for (auto& v : x.data) v = v >= 0 ? v + 0.1 : v - 0.1;
    const Tensor r = random_tensor({4, 6}, rng);
    relu.forward(x);
    const Tensor dx = relu.backward(r);
    const auto res = grad_check([&] { return dot(relu.forward(x), r); }, {}, {{&x, &dx}});
    CHECK(res.max_rel_error < 1e-6);
  }
}

TEST_CASE("grad check: roi_align") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    Tensor f = random_tensor({1, 2, 9, 11}, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<BBox> boxes;
    for (int i = 0; i < 3; ++i) {
      boxes.push_back({u(rng) * 120 - 10, u(rng) * 100 - 10, 10 + u(rng) * 80, 10 + u(rng) * 70});
    }
    RoiAlignConfig cfg;
    cfg.out_size = 5;
    const Tensor r = random_tensor({3, 2, 5, 5}, rng);
    const Tensor df = roi_align_backward(r, f.shape, boxes, cfg);
    const auto res =
        grad_check([&] { return dot(roi_align_forward(f, boxes, cfg), r); }, {}, {{&f, &df}});
    CHECK(res.max_rel_error < 1e-4);
  }
}

TEST_CASE("grad check: conv 3x3") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    const int stride = 1 + seed % 2;
    Conv2d conv("conv", 2, 3, 3, stride);
    conv.init(rng);
    Tensor x = random_tensor({2, 2, 7, 6}, rng);
    ParamList ps;
    conv.collect(ps);
    zero_grads(ps);
    const Tensor y = conv.forward(x);
    const Tensor r = random_tensor(y.shape, rng);
    const Tensor dx = conv.backward(r);
    auto vars = param_vars(ps);
    vars.push_back({&x, &dx});
    const auto res = grad_check([&] { return dot(conv.forward(x), r); }, {}, vars);
    CHECK(res.max_rel_error < 1e-4);
  }
}

TEST_CASE("grad check: gap") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    Tensor x = random_tensor({2, 3, 4, 5}, rng);
    const Tensor r = random_tensor({2, 3}, rng);
    const Tensor dx = gap_backward(r, x.shape);
    const auto res = grad_check([&] { return dot(gap_forward(x), r); }, {}, {{&x, &dx}});
    CHECK(res.max_rel_error < 1e-4);
  }
}

TEST_CASE("grad check: bottleneck") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    const bool project = seed % 2 == 0;
    Bottleneck block("b", project ? 3 : 4, 2, 4, project ? 2 : 1);
    block.init(rng);
    Tensor x = random_tensor({2, project ? 3 : 4, 6, 6}, rng);
    ParamList ps;
    block.collect(ps);
    zero_grads(ps);
    const Tensor y = block.forward(x);
    const Tensor r = random_tensor(y.shape, rng);
    const Tensor dx = block.backward(r);
    auto vars = param_vars(ps);
    vars.push_back({&x, &dx});
    std::vector<bool> pat;
    const auto res = grad_check(
        [&] { return dot(block.forward(x), r); },
        [&] {
          pat.clear();
          block.append_pattern(pat);
          return pat;
        },
        vars);
    CHECK(res.max_rel_error < 1e-4);
    CHECK(res.skipped_kinks < res.checked);
  }
}

TEST_CASE("grad check: rank head with mse") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    RankHeadConfig hc;
    hc.in_channels = 3;
    hc.roi_size = 6;
    hc.mid = 2;
    hc.width = 4;
    hc.fc1 = 6;
    hc.fc2 = 4;
    RankHead head(hc);
    head.init(rng);
    Tensor pooled = random_tensor({3, 3, 6, 6}, rng);
    Tensor loc = random_tensor({3, 4}, rng, 0.0, 1.0);
    const Tensor target = random_tensor({3, 1}, rng, 0.0, 1.0);
    auto ps = head.params();
    zero_grads(ps);
    Tensor g;
    mse_loss(head.forward(pooled, loc), target, &g);
    const Tensor dpool = head.backward(g);
    auto vars = param_vars(ps);
    vars.push_back({&pooled, &dpool});
    const auto res = grad_check([&] { return mse_loss(head.forward(pooled, loc), target, nullptr); },
                                [&] { return head.pattern(); }, vars);
    CHECK(res.max_rel_error < 1e-4);
    CHECK(res.skipped_kinks < res.checked);
  }
}

TEST_CASE("grad check: encoder and map resize") {
  for (int seed = 0; seed < kSeeds; ++seed) {
    Rng rng(1000 + seed);
    CAPTURE(seed);
    EncoderModel enc({4, 3, 2});
    enc.init(rng);
    Tensor img = random_tensor({1, 3, 13, 10}, rng, 0.0, 1.0);
    auto ps = enc.params();
    zero_grads(ps);
    const Tensor e = enc.forward(img);
    const Tensor rs = resize_map_forward(e, 2, 2);
    const Tensor r = random_tensor(rs.shape, rng);
    const Tensor dimg = enc.backward(resize_map_backward(r, e.shape));
    auto vars = param_vars(ps);
    vars.push_back({&img, &dimg});
    const auto res = grad_check([&] { return dot(resize_map_forward(enc.forward(img), 2, 2), r); },
                                [&] { return enc.pattern(); }, vars);
    CHECK(res.skipped_kinks < res.checked);
    CHECK(res.max_rel_error < 1e-4);
  }
}

TEST_CASE("gap backward conserves gradient mass") {
  Rng rng(7);
  const Tensor dy = random_tensor({2, 3}, rng);
  const Tensor dx = gap_backward(dy, {2, 3, 5, 4});
  for (int n = 0; n < 2; ++n) {
    for (int c = 0; c < 3; ++c) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 4; ++j) s += dx.at(n, c, i, j);
    }
    CHECK(s == doctest::Approx(dy.at(n, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("forward passes are deterministic given the seed") {
  const auto run = [] {
    Rng rng(42);
    RankHead head;
    head.init(rng);
    Tensor pooled = random_tensor({4, 10, 14, 14}, rng);
    Tensor loc = random_tensor({4, 4}, rng, 0.0, 1.0);
    return head.forward(pooled, loc).data;
  };
  CHECK(run() == run());
}

TEST_CASE("learning rate schedule and sgd") {
  CHECK(lr_schedule(0) == doctest::Approx(0.01));
  CHECK(lr_schedule(9) == doctest::Approx(0.01));
  CHECK(lr_schedule(10) == doctest::Approx(0.001));
  CHECK(lr_schedule(25) == doctest::Approx(0.0001));

  Rng rng(3);
  Linear fc("fc", 3, 2);
  fc.init(rng);
  ParamList ps;
  fc.collect(ps);
  zero_grads(ps);
  const auto before = fc.weight().value.data;
  sgd_step(ps, 0.01);
  CHECK(fc.weight().value.data == before);

  fc.weight().grad.data[0] = 1.0;
  sgd_step(ps, 0.1);
  CHECK(fc.weight().value.data[0] == doctest::Approx(before[0] - 0.1));
  sgd_step(ps, 0.1);  // velocity 0.9 + 1
  CHECK(fc.weight().value.data[0] == doctest::Approx(before[0] - 0.1 - 0.19));

  fc.bias().grad.data[1] = std::nan("");
  try {
    sgd_step(ps, 0.1);
    FAIL("expected fault");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kFault);
    CHECK(std::string(e.what()).find("fc.bias") != std::string::npos);
  }
}

TEST_CASE("non-finite forward values trip a fault") {
  Linear fc("fc", 2, 1);
  fc.weight().value.data = {1.0, 1.0};
  Tensor x({1, 2});
  x.data = {std::numeric_limits<double>::infinity(), 0.0};
  CHECK_THROWS_AS(fc.forward(x), Error);
}

TEST_CASE("checkpoint round trip") {
  Rng rng(11);
  RankHeadConfig hc;
  hc.width = 8;
  RankHead a(hc), b(hc);
  a.init(rng);
  std::stringstream ss;
  write_checkpoint(ss, R"({"k":1})", a.params());
  CHECK(read_checkpoint(ss, b.params()) == R"({"k":1})");
  const auto pa = a.params();
  const auto pb = b.params();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t k = 0; k < pa[i]->value.size(); ++k) {
    CHECK(pb[i]->value.data[k] == static_cast<double>(static_cast<float>(pa[i]->value.data[k])));
    }
  }

  RankHeadConfig other = hc;
  other.width = 4;
  RankHead c(other);
  std::stringstream ss2;
  write_checkpoint(ss2, "{}", a.params());
  CHECK_THROWS_AS(read_checkpoint(ss2, c.params()), Error);

  std::stringstream bad("NOTACKPT........");
  CHECK_THROWS_AS(read_checkpoint(bad, b.params()), Error);
}
