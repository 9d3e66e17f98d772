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

#include <cstdio>
#include <set>

#include "h2v/error.hpp"
#include "h2v/pipeline.hpp"

namespace h2v {

using nlohmann::json;

void validate(const PipelineConfig& cfg) {
  if (cfg.aspect.num <= 0 || cfg.aspect.den <= 0) fail(ErrorKind::kConfig, "aspect must be positive");
  if (cfg.short_side < kFeatureStride) fail(ErrorKind::kConfig, "short_side must be at least 16");
  validate(cfg.sbd);
  validate(cfg.loss);
  const auto& t = cfg.tracker;
  if (t.tau_conf < 0.0 || t.tau_conf > 1.0 || t.lost_conf < 0.0 || t.lost_conf > t.tau_conf) {
    fail(ErrorKind::kConfig, "tracker thresholds need 0 <= lost_conf <= tau_conf <= 1");
  }
  if (t.coverage_slack < 0.0 || !(t.sigma_p > 0.0) || !(t.sigma_m > 0.0) || t.template_alpha < 0.0 ||
      t.template_alpha > 1.0 || !(t.search_scale > 0.0)) {
    fail(ErrorKind::kConfig, "tracker noise, slack, alpha or search scale out of range");
  }
  if (!(cfg.smoothing.sigma_p > 0.0) || !(cfg.smoothing.sigma_m > 0.0)) {
    fail(ErrorKind::kConfig, "smoothing sigmas must be positive");
  }
  if (cfg.max_slew < 1) fail(ErrorKind::kConfig, "max_slew must be at least 1");
  const auto& m = cfg.selection.mode;
  if (m != "nss" && m != "dss" && m != "rankss") {
    fail(ErrorKind::kConfig, "selection.mode must be nss, dss or rankss, got '" + m + "'");
  }
  if (cfg.selection.co_subject_margin < 0.0) fail(ErrorKind::kConfig, "co_subject_margin must be >= 0");
  const auto& tr = cfg.train;
  if (tr.images < 1 || tr.epochs < 0 || tr.batch < 1 || tr.rois_per_image < 1 || tr.head_mid < 1 ||
      tr.head_width < 1 || tr.head_fc1 < 1 || tr.head_fc2 < 1 || tr.encoder_channels < 1) {
    fail(ErrorKind::kConfig, "train section has a non-positive size");
  }
}

json to_json(const PipelineConfig& c) {
  return {
      {"aspect", c.aspect.str()},
      {"short_side", c.short_side},
      {"seed", c.seed},
      {"sbd",
       {{"bins", c.sbd.bins},
        {"threshold", c.sbd.threshold},
        {"floor", c.sbd.floor},
        {"min_len", c.sbd.min_len},
        {"window", c.sbd.window}}},
      {"loss",
       {{"w_pt", c.loss.w_pt},
        {"w_pair", c.loss.w_pair},
        {"epsilon", c.loss.epsilon},
        {"warmup_epochs", c.loss.warmup_epochs}}},
      {"tracker",
       {{"tau_conf", c.tracker.tau_conf},
        {"lost_conf", c.tracker.lost_conf},
        {"coverage_slack", c.tracker.coverage_slack},
        {"sigma_p", c.tracker.sigma_p},
        {"sigma_m", c.tracker.sigma_m},
        {"template_alpha", c.tracker.template_alpha},
        {"search_scale", c.tracker.search_scale}}},
      {"smoothing",
       {{"enabled", c.smoothing.enabled}, {"sigma_p", c.smoothing.sigma_p}, {"sigma_m", c.smoothing.sigma_m}}},
      {"planner", {{"max_slew", c.max_slew}}},
      {"selection",
       {{"mode", c.selection.mode},
        {"model", c.selection.model},
        {"co_subject_margin", c.selection.co_subject_margin}}},
      {"ablation", {{"sbd", c.ablation.sbd}, {"tracking", c.ablation.tracking}}},
      {"train",
       {{"images", c.train.images},
        {"data_seed", c.train.data_seed},
        {"epochs", c.train.epochs},
        {"batch", c.train.batch},
        {"rois_per_image", c.train.rois_per_image},
        {"labels", label_mode_name(c.train.labels)},
        {"head_mid", c.train.head_mid},
        {"head_width", c.train.head_width},
        {"head_fc1", c.train.head_fc1},
        {"head_fc2", c.train.head_fc2},
        {"encoder_channels", c.train.encoder_channels}}},
  };
}

namespace {

// Reads known keys of one object and rejects the rest.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(ErrorKind::kConfig, where() + " must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(ErrorKind::kConfig, "unknown config key " + key_path(it.key()));
    }
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      fail(ErrorKind::kConfig, "config key " + key_path(key) + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j) {
  PipelineConfig c;
  {
    Section root(j, "");
    std::string aspect = c.aspect.str();
    root.get("aspect", aspect);
    c.aspect = parse_aspect(aspect);
    root.get("short_side", c.short_side);
    root.get("seed", c.seed);
    if (const json* s = root.child("sbd")) {
      Section sec(*s, "sbd");
      sec.get("bins", c.sbd.bins);
      sec.get("threshold", c.sbd.threshold);
      sec.get("floor", c.sbd.floor);
      sec.get("min_len", c.sbd.min_len);
      sec.get("window", c.sbd.window);
    }
    if (const json* s = root.child("loss")) {
      Section sec(*s, "loss");
      sec.get("w_pt", c.loss.w_pt);
      sec.get("w_pair", c.loss.w_pair);
      sec.get("epsilon", c.loss.epsilon);
      sec.get("warmup_epochs", c.loss.warmup_epochs);
    }
    if (const json* s = root.child("tracker")) {
      Section sec(*s, "tracker");
      sec.get("tau_conf", c.tracker.tau_conf);
      sec.get("lost_conf", c.tracker.lost_conf);
      sec.get("coverage_slack", c.tracker.coverage_slack);
      sec.get("sigma_p", c.tracker.sigma_p);
      sec.get("sigma_m", c.tracker.sigma_m);
      sec.get("template_alpha", c.tracker.template_alpha);
      sec.get("search_scale", c.tracker.search_scale);
    }
    if (const json* s = root.child("smoothing")) {
      Section sec(*s, "smoothing");
      sec.get("enabled", c.smoothing.enabled);
      sec.get("sigma_p", c.smoothing.sigma_p);
      sec.get("sigma_m", c.smoothing.sigma_m);
    }
    if (const json* s = root.child("planner")) {
      Section sec(*s, "planner");
      sec.get("max_slew", c.max_slew);
    }
    if (const json* s = root.child("selection")) {
      Section sec(*s, "selection");
      sec.get("mode", c.selection.mode);
      sec.get("model", c.selection.model);
      sec.get("co_subject_margin", c.selection.co_subject_margin);
    }
    if (const json* s = root.child("ablation")) {
      Section sec(*s, "ablation");
      sec.get("sbd", c.ablation.sbd);
      sec.get("tracking", c.ablation.tracking);
    }
    if (const json* s = root.child("train")) {
      Section sec(*s, "train");
      sec.get("images", c.train.images);
      sec.get("data_seed", c.train.data_seed);
      sec.get("epochs", c.train.epochs);
      sec.get("batch", c.train.batch);
      sec.get("rois_per_image", c.train.rois_per_image);
      std::string labels = label_mode_name(c.train.labels);
      sec.get("labels", labels);
      c.train.labels = parse_label_mode(labels);
      sec.get("head_mid", c.train.head_mid);
      sec.get("head_width", c.train.head_width);
      sec.get("head_fc1", c.train.head_fc1);
      sec.get("head_fc2", c.train.head_fc2);
      sec.get("encoder_channels", c.train.encoder_channels);
    }
  }
  validate(c);
  return c;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  json j;
  try {
    j = read_json_file(path);
  } catch (const Error& e) {
    // A config that cannot be read or parsed is a configuration problem.
    fail(ErrorKind::kConfig, e.what());
  }
  return pipeline_config_from_json(j);
}

std::string config_hash(const PipelineConfig& cfg) {
  const std::string s = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace h2v
