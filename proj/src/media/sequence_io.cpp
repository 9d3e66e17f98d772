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

#include "h2v/sequence_io.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "h2v/error.hpp"
#include "h2v/image_io.hpp"
#include "h2v/y4m.hpp"

namespace h2v {

namespace fs = std::filesystem;

namespace {

bool is_image_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ".png" || e == ".ppm" || e == ".pgm" || e == ".pnm";
}

void check_sequence(const FrameSequence& seq) {
  if (seq.empty()) fail(ErrorKind::kEmptyInput, "frame sequence is empty");
  const int w = seq.frames.front().width();
  const int h = seq.frames.front().height();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const Frame& f = seq.frames[i];
    if (f.width() != w || f.height() != h) {
      fail(ErrorKind::kDimensionMismatch,
           "frame " + std::to_string(i) + " is " + std::to_string(f.width()) + "x" +
               std::to_string(f.height()) + ", expected " + std::to_string(w) + "x" +
               std::to_string(h));
    }
  }
  if (w < Frame::kMinDim || h < Frame::kMinDim) {
    fail(ErrorKind::kGeometry, "frames smaller than 16x16 are not supported");
  }
}

}  // namespace

FrameSequence load_frame_sequence(const fs::path& path) {
  FrameSequence seq;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && is_image_ext(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    seq.frames.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
      try {
        seq.frames.push_back(read_image(files[i]));
      } catch (const Error& e) {
        fail(ErrorKind::kIo, "frame " + std::to_string(i) + " (" + files[i].filename().string() +
                                 "): " + e.what());
      }
    }
  } else if (fs::is_regular_file(path)) {
    seq = read_y4m(path);
  } else {
    fail(ErrorKind::kIo, "no such input: " + path.string());
  }
  check_sequence(seq);
  return seq;
}

void write_frame_directory(const FrameSequence& seq, const fs::path& dir, const std::string& ext,
                           const std::string& prefix) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%06zu", i);
    write_image(seq.frames[i], dir / (prefix + name + ext));
  }
}

void save_frame_sequence(const FrameSequence& seq, const fs::path& path) {
  if (path.extension() == ".y4m") {
    write_y4m(seq, path);
  } else {
    write_frame_directory(seq, path);
  }
}

}  // namespace h2v
