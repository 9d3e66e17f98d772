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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2v/geometry.hpp"

namespace h2v {

// Ranks: 0 is a primary subject; 1..kMaxRank are ordered non-subjects.
inline constexpr int kMaxRank = 6;

struct AnnotationEntry {
  std::optional<BBox> face;
  std::optional<BBox> body;
  int rank = 0;

  // Face when present, else body (face is the preferred candidate box).
  const BBox& primary_box() const { return face ? *face : *body; }
};

struct AnnotationRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<AnnotationEntry> entries;

  bool is_multi_subject() const;
  // Boxes of all rank-0 entries, face preferred unless use_body is set.
  std::vector<BBox> subject_boxes(bool use_body = false) const;
};

struct AnnotationSet {
  std::vector<AnnotationRecord> records;

  const AnnotationRecord* find(const std::string& id) const;
};

// Throws kSchema on the first invariant violation, naming the record.
void validate(const AnnotationRecord& record);

AnnotationSet annotations_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const AnnotationSet& set);
AnnotationSet parse_annotations(const std::filesystem::path& path);
void write_annotations(const AnnotationSet& set, const std::filesystem::path& path);

// Detector output for one image. Boxes are clamped into the frame on parse.
struct CandidateEntry {
  std::optional<BBox> face;
  std::optional<BBox> body;
  double conf = 1.0;

  const BBox& primary_box() const { return face ? *face : *body; }
};

struct CandidateRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<CandidateEntry> entries;
};

struct CandidateFile {
  std::vector<CandidateRecord> records;

  const CandidateRecord* find(const std::string& id) const;
};

CandidateFile candidates_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const CandidateFile& file);
CandidateFile parse_candidates(const std::filesystem::path& path);
void write_candidates(const CandidateFile& file, const std::filesystem::path& path);

// Stable id used for per-frame records of a video.
std::string frame_id(int t);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace h2v
