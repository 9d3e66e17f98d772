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
#include <string>

#include "h2v/frame.hpp"

namespace h2v {

// Loads a directory of PNG/PPM/PGM images (lexicographic order) or a .y4m
// stream. All frames must share dims and be at least Frame::kMinDim.
FrameSequence load_frame_sequence(const std::filesystem::path& path);

// Writes frames as <dir>/<prefix><index:06>.<ext>.
void write_frame_directory(const FrameSequence& seq, const std::filesystem::path& dir,
                           const std::string& ext = ".ppm", const std::string& prefix = "");

// Writes to a directory, or to a Y4M stream when path ends in .y4m.
void save_frame_sequence(const FrameSequence& seq, const std::filesystem::path& path);

}  // namespace h2v
