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

#include "h2v/shots.hpp"

#include <algorithm>
#include <cmath>

#include "h2v/error.hpp"

namespace h2v {

void validate(const SbdConfig& cfg) {
  if (cfg.bins < 8) fail(ErrorKind::kConfig, "sbd.bins must be >= 8");
  if (cfg.min_len < 1) fail(ErrorKind::kConfig, "sbd.min_len must be >= 1");
  if (!(cfg.threshold > 0.0) || !(cfg.floor >= 0.0)) {
    fail(ErrorKind::kConfig, "sbd.threshold must be > 0 and sbd.floor >= 0");
  }
  if (cfg.window < 1) fail(ErrorKind::kConfig, "sbd.window must be >= 1");
}

std::vector<double> frame_histogram(const Frame& f, int bins) {
  const int ch = f.channels();
  std::vector<double> h(static_cast<std::size_t>(ch) * bins, 0.0);
  const auto& data = f.data();
  const std::size_t pixels = static_cast<std::size_t>(f.width()) * f.height();
  for (std::size_t i = 0; i < pixels; ++i) {
    for (int c = 0; c < ch; ++c) {
      const double p = std::clamp(static_cast<double>(data[i * ch + c]), 0.0, 1.0) * bins - 0.5;
      double* hc = h.data() + static_cast<std::size_t>(c) * bins;
      if (p <= 0.0) {
        hc[0] += 1.0;
      } else if (p >= bins - 1) {
        hc[bins - 1] += 1.0;
      } else {
        const int lo = static_cast<int>(p);
        const double frac = p - lo;
        hc[lo] += 1.0 - frac;
        hc[lo + 1] += frac;
      }
    }
  }
  for (auto& v : h) v /= static_cast<double>(pixels);
  return h;
}

double chi2_distance(const std::vector<double>& a, const std::vector<double>& b, int channels) {
  if (a.size() != b.size()) fail(ErrorKind::kDimensionMismatch, "histogram sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double sum = a[i] + b[i];
    if (sum > 0.0) s += (a[i] - b[i]) * (a[i] - b[i]) / sum;
  }
  return 0.5 * s / channels;
}

std::vector<double> frame_distances(const FrameSequence& seq, int bins) {
  std::vector<double> d;
  if (seq.size() < 2) return d;
  d.reserve(seq.size() - 1);
  const int ch = seq[0].channels();
  auto prev = frame_histogram(seq[0], bins);
  for (std::size_t t = 1; t < seq.size(); ++t) {
    if (seq[t].channels() != ch) fail(ErrorKind::kDimensionMismatch, "channel count changes");
    auto cur = frame_histogram(seq[t], bins);
    d.push_back(chi2_distance(prev, cur, ch));
    prev = std::move(cur);
  }
  return d;
}

std::vector<int> detect_cuts(const std::vector<double>& d, const SbdConfig& cfg) {
  std::vector<int> cuts;
  const int n = static_cast<int>(d.size());
  std::vector<double> win;
  for (int t = 0; t < n; ++t) {
    win.clear();
    for (int k = std::max(0, t - cfg.window); k <= std::min(n - 1, t + cfg.window); ++k) {
      if (k != t) win.push_back(d[k]);
    }
    double median = 0.0;
    if (!win.empty()) {
      const auto mid = win.begin() + static_cast<std::ptrdiff_t>(win.size() / 2);
      std::nth_element(win.begin(), mid, win.end());
      median = *mid;
      if (win.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(win.begin(), mid));
      }
    }
    if (d[t] > cfg.threshold * (median + cfg.floor)) cuts.push_back(t + 1);
  }
  return cuts;
}

std::vector<ShotSegment> segments_from_cuts(const std::vector<int>& cut_starts, int total,
                                            int min_len) {
  std::vector<ShotSegment> raw;
  int start = 0;
  for (int c : cut_starts) {
    if (c <= start || c >= total) continue;
    raw.push_back({start, c});
    start = c;
  }
  raw.push_back({start, total});

  std::vector<ShotSegment> out;
  for (const auto& s : raw) {
    if (!out.empty() && (s.length() < min_len || out.back().length() < min_len)) {
      // The second clause folds a short opening shot into its successor.
      out.back().end = s.end;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<ShotSegment> detect_shots(const FrameSequence& seq, const SbdConfig& cfg) {
  validate(cfg);
  if (seq.empty()) fail(ErrorKind::kEmptyInput, "detect_shots: empty sequence");
  const auto d = frame_distances(seq, cfg.bins);
  return segments_from_cuts(detect_cuts(d, cfg), static_cast<int>(seq.size()), cfg.min_len);
}

void validate_tiling(const std::vector<ShotSegment>& shots, int total) {
  int expect = 0;
  for (const auto& s : shots) {
    if (s.start != expect || s.end <= s.start) {
      fail(ErrorKind::kCoverage, "shots do not tile the video at frame " + std::to_string(expect));
    }
    expect = s.end;
  }
  if (expect != total) {
    fail(ErrorKind::kCoverage, "shots cover " + std::to_string(expect) + " of " +
                                   std::to_string(total) + " frames");
  }
}

nlohmann::json shots_to_json(const std::vector<ShotSegment>& shots) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : shots) arr.push_back({s.start, s.end});
  return {{"shots", arr}};
}

std::vector<ShotSegment> shots_from_json(const nlohmann::json& doc) {
  std::vector<ShotSegment> out;
  try {
    for (const auto& s : doc.at("shots")) {
      if (!s.is_array() || s.size() != 2) fail(ErrorKind::kSchema, "shot entry must be [start,end]");
      out.push_back({s[0].get<int>(), s[1].get<int>()});
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kSchema, std::string("shots JSON: ") + e.what());
  }
  return out;
}

}  // namespace h2v
