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

#include <fstream>

#include "h2v/error.hpp"
#include "h2v/nn/checkpoint.hpp"
#include "h2v/select.hpp"

namespace h2v {

using nlohmann::json;

json to_json(const RankSsConfig& c) {
  return {{"type", "rankss"},
          {"short_side", c.short_side},
          {"encoder", {{"channels", c.encoder.channels}, {"width", c.encoder.width}, {"stages", c.encoder.stages}}},
          {"head",
           {{"in_channels", c.head.in_channels},
            {"roi_size", c.head.roi_size},
            {"mid", c.head.mid},
            {"width", c.head.width},
            {"fc1", c.head.fc1},
            {"fc2", c.head.fc2},
            {"loc_dim", c.head.loc_dim}}},
          {"roi",
           {{"out_size", c.roi.out_size},
            {"spatial_scale", c.roi.spatial_scale},
            {"sampling_ratio", c.roi.sampling_ratio}}}};
}

RankSsConfig rankss_config_from_json(const json& j) {
  try {
    RankSsConfig c;
    if (j.value("type", std::string()) != "rankss") fail(ErrorKind::kSchema, "checkpoint is not a Rank-SS model");
    c.short_side = j.at("short_side").get<int>();
    const auto& e = j.at("encoder");
    c.encoder = {e.at("channels").get<int>(), e.at("width").get<int>(), e.at("stages").get<int>()};
    const auto& h = j.at("head");
    c.head = {h.at("in_channels").get<int>(), h.at("roi_size").get<int>(), h.at("mid").get<int>(),
              h.at("width").get<int>(),       h.at("fc1").get<int>(),      h.at("fc2").get<int>(),
              h.at("loc_dim").get<int>()};
    const auto& r = j.at("roi");
    c.roi = {r.at("out_size").get<int>(), r.at("spatial_scale").get<double>(),
             r.at("sampling_ratio").get<int>()};
    return c;
  } catch (const json::exception& ex) {
    fail(ErrorKind::kSchema, std::string("Rank-SS config: ") + ex.what());
  }
}

namespace {

const RankSsConfig& checked(const RankSsConfig& c) {
  if (c.short_side < kFeatureStride) fail(ErrorKind::kConfig, "short_side must be at least 16");
  if (c.head.in_channels != 2 + c.encoder.channels) {
    fail(ErrorKind::kConfig, "Rank-SS head expects " + std::to_string(c.head.in_channels) +
                                 " channels but the stack has " + std::to_string(2 + c.encoder.channels));
  }
  if (c.head.roi_size != c.roi.out_size) fail(ErrorKind::kConfig, "head roi_size differs from RoIAlign out_size");
  if (c.head.loc_dim != 4) fail(ErrorKind::kConfig, "location prior has 4 components");
  return c;
}

}  // namespace

RankSsModel::RankSsModel(const RankSsConfig& c) : cfg(checked(c)), encoder(c.encoder), head(c.head) {}

void RankSsModel::init(nn::Rng& rng) {
  encoder.init(rng);
  head.init(rng);
}

nn::ParamList RankSsModel::params() {
  nn::ParamList p = encoder.params();
  const nn::ParamList h = head.params();
  p.insert(p.end(), h.begin(), h.end());
  return p;
}

RankSsInput prepare_rankss_input(const Frame& image, RankSsModel& model) {
  if (image.empty()) fail(ErrorKind::kEmptyInput, "Rank-SS input image is empty");
  const Frame resized = resize_short_side(image, model.cfg.short_side);
  RankSsInput in;
  in.fmap = build_feature_stack(resized, model.encoder).to_tensor();
  in.scale_x = static_cast<double>(resized.width()) / image.width();
  in.scale_y = static_cast<double>(resized.height()) / image.height();
  in.width = image.width();
  in.height = image.height();
  return in;
}

void rankss_rois(const RankSsInput& in, const std::vector<BBox>& boxes, const RankSsModel& model,
                 nn::Tensor* pooled, nn::Tensor* loc) {
  std::vector<BBox> scaled;
  scaled.reserve(boxes.size());
  *loc = nn::Tensor({static_cast<int>(boxes.size()), 4});
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const auto clipped = clamp_to_frame(boxes[i], in.width, in.height);
    if (!clipped) fail(ErrorKind::kGeometry, "candidate box lies outside the frame");
    scaled.push_back(scale_box(*clipped, in.scale_x, in.scale_y));
    const LocPrior p = location_prior(*clipped, in.width, in.height);
    for (int k = 0; k < 4; ++k) loc->at(static_cast<int>(i), k) = p[k];
  }
  *pooled = nn::roi_align_forward(in.fmap, scaled, model.cfg.roi);
}

std::vector<double> rankss_score(const RankSsInput& in, const std::vector<Candidate>& cands,
                                 RankSsModel& model) {
  if (cands.empty()) return {};
  std::vector<BBox> boxes;
  boxes.reserve(cands.size());
  for (const auto& c : cands) boxes.push_back(c.box);
  nn::Tensor pooled, loc;
  rankss_rois(in, boxes, model, &pooled, &loc);
  return model.head.forward(pooled, loc).data;
}

std::vector<double> rankss_score(const Frame& image, const std::vector<Candidate>& cands,
                                 RankSsModel& model) {
  if (cands.empty()) return {};
  return rankss_score(prepare_rankss_input(image, model), cands, model);
}

void save_rankss(RankSsModel& model, const std::string& path) {
  nn::save_checkpoint(path, to_json(model.cfg).dump(), model.params());
}

RankSsModel load_rankss(const std::string& path) {
  json cfg;
  try {
    cfg = json::parse(nn::read_checkpoint_config(path));
  } catch (const json::exception& ex) {
    fail(ErrorKind::kSchema, path + ": checkpoint config is not JSON: " + ex.what());
  }
  RankSsModel model(rankss_config_from_json(cfg));
  nn::load_checkpoint(path, model.params());
  return model;
}

void save_dss(DssModel& model, const std::string& path) {
  const json cfg = {{"type", "dss"}, {"dims", model.dims}};
  nn::save_checkpoint(path, cfg.dump(), model.mlp.params());
}

DssModel load_dss(const std::string& path) {
  std::vector<int> dims;
  try {
    const json cfg = json::parse(nn::read_checkpoint_config(path));
    if (cfg.value("type", std::string()) != "dss") fail(ErrorKind::kSchema, path + ": not a D-SS checkpoint");
    dims = cfg.at("dims").get<std::vector<int>>();
  } catch (const json::exception& ex) {
    fail(ErrorKind::kSchema, path + ": D-SS config: " + ex.what());
  }
  DssModel model(dims);
  nn::load_checkpoint(path, model.mlp.params());
  return model;
}

}  // namespace h2v
