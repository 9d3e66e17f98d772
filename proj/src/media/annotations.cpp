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

#include "h2v/annotations.hpp"

#include <array>
#include <fstream>
#include <set>

#include "h2v/error.hpp"

namespace h2v {

using nlohmann::json;

namespace {

std::optional<BBox> box_from_json(const json& j, const std::string& where) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || j.size() != 4) fail(ErrorKind::kSchema, where + ": box must be [x,y,w,h]");
  std::array<double, 4> a{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) fail(ErrorKind::kSchema, where + ": box values must be numbers");
    a[i] = j[i].get<double>();
  }
  const BBox b = BBox::from_array(a);
  if (!b.valid()) fail(ErrorKind::kSchema, where + ": box needs w > 0, h > 0 and finite coords");
  return b;
}

json box_to_json(const std::optional<BBox>& b) {
  if (!b) return nullptr;
  return json::array({b->x, b->y, b->w, b->h});
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    fail(ErrorKind::kSchema, where + ": missing key '" + key + "'");
  }
  return obj.at(key);
}

int require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) fail(ErrorKind::kSchema, where + ": '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace

bool AnnotationRecord::is_multi_subject() const {
  int n = 0;
  for (const auto& e : entries) n += e.rank == 0 ? 1 : 0;
  return n > 1;
}

std::vector<BBox> AnnotationRecord::subject_boxes(bool use_body) const {
  std::vector<BBox> out;
  for (const auto& e : entries) {
    if (e.rank != 0) continue;
    if (use_body && e.body) {
      out.push_back(*e.body);
    } else {
      out.push_back(e.primary_box());
    }
  }
  return out;
}

const AnnotationRecord* AnnotationSet::find(const std::string& id) const {
  for (const auto& r : records) {
    if (r.image_id == id) return &r;
  }
  return nullptr;
}

const CandidateRecord* CandidateFile::find(const std::string& id) const {
  for (const auto& r : records) {
    if (r.image_id == id) return &r;
  }
  return nullptr;
}

void validate(const AnnotationRecord& record) {
  const std::string where = "image '" + record.image_id + "'";
  if (record.image_id.empty()) fail(ErrorKind::kSchema, "record with empty id");
  if (record.width <= 0 || record.height <= 0) {
    fail(ErrorKind::kSchema, where + ": width and height must be positive");
  }
  std::set<int> seen;
  bool has_subject = false;
  for (const auto& e : record.entries) {
    if (!e.face && !e.body) fail(ErrorKind::kSchema, where + ": entry has neither face nor body");
    for (const auto* b : {&e.face, &e.body}) {
      if (*b && !(*b)->valid()) fail(ErrorKind::kSchema, where + ": invalid box");
    }
    if (e.rank < 0 || e.rank > kMaxRank) {
      fail(ErrorKind::kSchema, where + ": rank " + std::to_string(e.rank) + " outside 0..6");
    }
    if (e.rank == 0) {
      has_subject = true;
    } else if (!seen.insert(e.rank).second) {
      fail(ErrorKind::kSchema, where + ": duplicate rank " + std::to_string(e.rank));
    }
  }
  if (!has_subject) fail(ErrorKind::kSchema, where + ": no rank-0 entry");
}

AnnotationSet annotations_from_json(const json& doc) {
  AnnotationSet set;
  const json& images = require(doc, "images", "document");
  if (!images.is_array()) fail(ErrorKind::kSchema, "'images' must be an array");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& img = images[i];
    const std::string where = "images[" + std::to_string(i) + "]";
    AnnotationRecord rec;
    const json& id = require(img, "id", where);
    if (!id.is_string()) fail(ErrorKind::kSchema, where + ": 'id' must be a string");
    rec.image_id = id.get<std::string>();
    rec.width = require_int(img, "width", where);
    rec.height = require_int(img, "height", where);
    const json& entries = require(img, "entries", where);
    if (!entries.is_array()) fail(ErrorKind::kSchema, where + ": 'entries' must be an array");
    for (const auto& ej : entries) {
      AnnotationEntry e;
      e.face = box_from_json(require(ej, "face", where), where);
      e.body = box_from_json(require(ej, "body", where), where);
      e.rank = require_int(ej, "rank", where);
      rec.entries.push_back(e);
    }
    validate(rec);
    if (!ids.insert(rec.image_id).second) {
      fail(ErrorKind::kSchema, "duplicate image id '" + rec.image_id + "'");
    }
    set.records.push_back(std::move(rec));
  }
  return set;
}

json to_json(const AnnotationSet& set) {
  json images = json::array();
  for (const auto& r : set.records) {
    json entries = json::array();
    for (const auto& e : r.entries) {
      entries.push_back({{"face", box_to_json(e.face)}, {"body", box_to_json(e.body)}, {"rank", e.rank}});
    }
    images.push_back({{"id", r.image_id}, {"width", r.width}, {"height", r.height}, {"entries", entries}});
  }
  return {{"images", images}};
}

AnnotationSet parse_annotations(const std::filesystem::path& path) {
  return annotations_from_json(read_json_file(path));
}

void write_annotations(const AnnotationSet& set, const std::filesystem::path& path) {
  write_json_file(to_json(set), path);
}

CandidateFile candidates_from_json(const json& doc) {
  CandidateFile file;
  const json& images = require(doc, "images", "document");
  if (!images.is_array()) fail(ErrorKind::kSchema, "'images' must be an array");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& img = images[i];
    const std::string where = "images[" + std::to_string(i) + "]";
    CandidateRecord rec;
    const json& id = require(img, "id", where);
    if (!id.is_string()) fail(ErrorKind::kSchema, where + ": 'id' must be a string");
    rec.image_id = id.get<std::string>();
    rec.width = require_int(img, "width", where);
    rec.height = require_int(img, "height", where);
    if (rec.width <= 0 || rec.height <= 0) fail(ErrorKind::kSchema, where + ": bad frame dims");
    const json& entries = require(img, "entries", where);
    if (!entries.is_array()) fail(ErrorKind::kSchema, where + ": 'entries' must be an array");
    for (const auto& ej : entries) {
      CandidateEntry e;
      e.face = box_from_json(ej.value("face", json()), where);
      e.body = box_from_json(ej.value("body", json()), where);
      if (!e.face && !e.body) fail(ErrorKind::kSchema, where + ": candidate without a box");
      const json& conf = require(ej, "conf", where);
      if (!conf.is_number()) fail(ErrorKind::kSchema, where + ": 'conf' must be a number");
      e.conf = conf.get<double>();
      if (!(e.conf >= 0.0 && e.conf <= 1.0)) fail(ErrorKind::kSchema, where + ": conf outside [0,1]");
      for (auto* b : {&e.face, &e.body}) {
        if (!*b) continue;
        *b = clamp_to_frame(**b, rec.width, rec.height);
        if (!*b) fail(ErrorKind::kSchema, where + ": candidate box lies outside the frame");
      }
      rec.entries.push_back(e);
    }
    file.records.push_back(std::move(rec));
  }
  return file;
}

json to_json(const CandidateFile& file) {
  json images = json::array();
  for (const auto& r : file.records) {
    json entries = json::array();
    for (const auto& e : r.entries) {
      entries.push_back({{"face", box_to_json(e.face)}, {"body", box_to_json(e.body)}, {"conf", e.conf}});
    }
    images.push_back({{"id", r.image_id}, {"width", r.width}, {"height", r.height}, {"entries", entries}});
  }
  return {{"images", images}};
}

CandidateFile parse_candidates(const std::filesystem::path& path) {
  return candidates_from_json(read_json_file(path));
}

void write_candidates(const CandidateFile& file, const std::filesystem::path& path) {
  write_json_file(to_json(file), path);
}

std::string frame_id(int t) { return std::to_string(t); }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kSchema, path.string() + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::kIo, "cannot write " + path.string());
  out << doc.dump(1) << "\n";
  if (!out) fail(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace h2v
