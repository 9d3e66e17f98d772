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

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "h2v/frame.hpp"

namespace h2v {

// Half-open frame range [start, end).
struct ShotSegment {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool contains(int t) const { return t >= start && t < end; }
  bool operator==(const ShotSegment&) const = default;
};

struct SbdConfig {
  int bins = 16;
  double threshold = 6.0;  // multiple of the local median distance
  double floor = 0.02;     // added to the median so static scenes need a real jump
  int min_len = 8;
  int window = 8;          // distances on each side feeding the rolling median
};

void validate(const SbdConfig& cfg);

// Per-channel histograms with linear soft binning, each channel summing to 1,
// concatenated channel-major.
std::vector<double> frame_histogram(const Frame& f, int bins);

// Symmetric chi-square distance 0.5 * sum (a-b)^2 / (a+b), averaged over
// channels, so identical frames give 0 and disjoint supports give 1.
double chi2_distance(const std::vector<double>& a, const std::vector<double>& b, int channels);

// d[t] = distance between frame t and t+1; size T-1.
std::vector<double> frame_distances(const FrameSequence& seq, int bins);

// Cut after frame t when d[t] > threshold * (median of the neighbouring
// distances within +-window, excluding d[t], + floor).
std::vector<int> detect_cuts(const std::vector<double>& d, const SbdConfig& cfg);

// Turns cut positions (first frame of each new shot) into a tiling of
// [0, T); shots shorter than min_len are merged into the previous shot, or
// into the next one when they open the video.
std::vector<ShotSegment> segments_from_cuts(const std::vector<int>& cut_starts, int total,
                                            int min_len);

std::vector<ShotSegment> detect_shots(const FrameSequence& seq, const SbdConfig& cfg = {});

// Throws kCoverage unless shots tile [0, total) in order.
void validate_tiling(const std::vector<ShotSegment>& shots, int total);

nlohmann::json shots_to_json(const std::vector<ShotSegment>& shots);
std::vector<ShotSegment> shots_from_json(const nlohmann::json& doc);

}  // namespace h2v
