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

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2v/annotations.hpp"
#include "h2v/features.hpp"
#include "h2v/geometry.hpp"
#include "h2v/nn/models.hpp"
#include "h2v/nn/optim.hpp"
#include "h2v/nn/roi_align.hpp"

namespace h2v {

// ---------------------------------------------------------------- candidates

using LocPrior = std::array<double, 4>;

// [x/W, y/H, w/W, h/H], each clamped to [0,1].
LocPrior location_prior(const BBox& box, int frame_w, int frame_h);

struct Candidate {
  BBox box;  // face when available, else body
  std::optional<BBox> body;
  LocPrior loc{};
};

std::vector<Candidate> make_candidates(const CandidateRecord& rec);
// Candidate list of an annotated record in entry order, with the entry ranks.
std::vector<Candidate> make_candidates(const AnnotationRecord& rec, std::vector<int>* ranks = nullptr);

struct ScoredCandidateSet {
  std::vector<Candidate> candidates;
  std::vector<double> scores;
  std::vector<double> labels;  // 1 for rank 0, else 0
  std::vector<int> ranks;      // -1 when unranked
};

// argmax of scores; ties by larger box area, then lower index. nullopt when
// empty.
std::optional<std::size_t> select_subject(const ScoredCandidateSet& set);
std::optional<std::size_t> select_subject(const std::vector<Candidate>& cands,
                                          const std::vector<double>& scores);

// ---------------------------------------------------------------- N-SS

// Area-weighted mean of a single-channel map over a pixel-space box.
// Clamps the box into the frame; throws kGeometry when it lies fully outside.
double box_mean(const FeatureMap& map, int channel, const BBox& box, int frame_w, int frame_h);

struct NssTerms {
  double sal = 0.0;
  double blur = 0.0;
  double size = 0.0;
  double pos = 0.0;
};

struct NssWeights {
  double sal = 0.3;
  double blur = 0.1;
  double size = 0.3;
  double pos = 0.3;
};

// size = box area / frame area; pos = 1 - 2 * |center - frame center| /
// diagonal. With raw_concat, size = (w/W + h/H)/2 and pos = (x/W + y/H)/2,
// the literal reading of concatenating the raw box.
NssTerms nss_terms(const FeatureStack& stack, const BBox& box, int frame_w, int frame_h,
                   bool raw_concat = false);
double nss_combine(const NssTerms& t, const NssWeights& w = {});
std::vector<double> nss_score(const FeatureStack& stack, const std::vector<Candidate>& cands,
                              int frame_w, int frame_h, const NssWeights& w = {},
                              bool raw_concat = false);

// ---------------------------------------------------------------- D-SS

inline constexpr int kDssFeatureDim = 2;  // box means of sal and blur

// [sal_mean, blur_mean, loc_prior...] per candidate as an (N, 6) tensor.
nn::Tensor dss_inputs(const FeatureStack& stack, const std::vector<Candidate>& cands, int frame_w,
                      int frame_h);

struct DssModel {
  std::vector<int> dims = {kDssFeatureDim + 4, 64, 32, 1};
  nn::Mlp mlp;

  DssModel();
  explicit DssModel(std::vector<int> dims);
  void init(nn::Rng& rng) { mlp.init(rng); }
};

// Throws kConfig when the MLP input width differs from |f_i| + 4.
std::vector<double> dss_score(const FeatureStack& stack, const std::vector<Candidate>& cands,
                              int frame_w, int frame_h, DssModel& model);

// ---------------------------------------------------------------- Rank-SS

struct RankSsConfig {
  int short_side = 128;
  nn::EncoderConfig encoder;
  nn::RankHeadConfig head;
  nn::RoiAlignConfig roi;
};

nlohmann::json to_json(const RankSsConfig& c);
RankSsConfig rankss_config_from_json(const nlohmann::json& j);

struct RankSsModel {
  RankSsConfig cfg;
  nn::EncoderModel encoder;
  nn::RankHead head;

  explicit RankSsModel(const RankSsConfig& c = {});
  void init(nn::Rng& rng);
  nn::ParamList params();
};

// Image resized to the model's short side with boxes mapped along.
struct RankSsInput {
  nn::Tensor fmap;  // (1, 2+C, gh, gw)
  double scale_x = 1.0;
  double scale_y = 1.0;
  int width = 0;   // original frame dims, for location priors
  int height = 0;
};

RankSsInput prepare_rankss_input(const Frame& image, RankSsModel& model);

// Pooled RoIs and location priors for boxes in original-frame pixels.
void rankss_rois(const RankSsInput& in, const std::vector<BBox>& boxes, const RankSsModel& model,
                 nn::Tensor* pooled, nn::Tensor* loc);

std::vector<double> rankss_score(const RankSsInput& in, const std::vector<Candidate>& cands,
                                 RankSsModel& model);
std::vector<double> rankss_score(const Frame& image, const std::vector<Candidate>& cands,
                                 RankSsModel& model);

void save_rankss(RankSsModel& model, const std::string& path);
RankSsModel load_rankss(const std::string& path);
void save_dss(DssModel& model, const std::string& path);
DssModel load_dss(const std::string& path);

// ---------------------------------------------------------------- losses

// (1/N) sum (s_i - l_i)^2.
double loss_pt(const std::vector<double>& scores, const std::vector<double>& labels,
               std::vector<double>* grad = nullptr);

struct PairLoss {
  double value = 0.0;
  bool active = false;   // false when fewer than 2 ranked candidates
  std::size_t pairs = 0;  // ordered pairs with distinct known ranks
};

// Mean over ordered pairs (i, j) of ranked candidates with different ranks
// of max(0, (s_j - s_i) * gamma + eps), gamma = +1 when rank_i is better.
// Unranked (-1) candidates are excluded. hinge, when given, receives the
// active-term mask per pair for kink detection.
PairLoss loss_pair(const std::vector<double>& scores, const std::vector<int>& ranks, double eps,
                   std::vector<double>* grad = nullptr, std::vector<bool>* hinge = nullptr);

struct LossConfig {
  double w_pt = 0.5;
  double w_pair = 1.5;
  double epsilon = 0.1;
  int warmup_epochs = 30;
};

void validate(const LossConfig& c);

struct CombinedLoss {
  double total = 0.0;
  double l_pt = 0.0;
  double l_pair = 0.0;
};

CombinedLoss combined_loss(const std::vector<double>& scores, const std::vector<double>& labels,
                           const std::vector<int>& ranks, const LossConfig& cfg, int epoch,
                           std::vector<double>* grad = nullptr, std::vector<bool>* hinge = nullptr);

// ---------------------------------------------------------------- training

enum class LabelMode { kSoft, kHard };
LabelMode parse_label_mode(const std::string& s);
const char* label_mode_name(LabelMode m);

// Soft mode keeps rank 0 and maps every other known rank to 1.
std::vector<int> mode_ranks(const std::vector<int>& ranks, LabelMode mode);

// Uniform jitter of +-jitter * size in position and scale, resampled until
// IoU with the source reaches min_iou and the box stays inside the frame.
BBox perturb_box(const BBox& src, int frame_w, int frame_h, std::mt19937_64& rng,
                 double jitter = 0.1, double min_iou = 0.5);

struct TrainSample {
  Frame image;
  AnnotationRecord record;
};

struct TrainConfig {
  LossConfig loss;
  LabelMode labels = LabelMode::kHard;
  int epochs = 80;
  int batch = 4;
  int rois_per_image = 20;
  unsigned long long seed = 1;
  nn::LrSchedule lr;
  double momentum = 0.9;
  RankSsConfig model;
};

struct EpochLog {
  int epoch = 0;  // 1-based, after the epoch
  double l_pt = 0.0;
  double l_pair = 0.0;
  double violation_rate = 0.0;
  double lr = 0.0;
};

nlohmann::json to_json(const EpochLog& e);

// Fraction of annotated pairs (mode-dependent) whose better-ranked member
// does not score strictly higher.
double violation_rate(const std::vector<std::vector<double>>& scores,
                      const std::vector<std::vector<int>>& ranks, LabelMode mode);

using EpochCallback = std::function<void(const EpochLog&)>;

// Throws kConfig on an empty dataset. Deterministic given cfg.seed.
RankSsModel train_rankss(const std::vector<TrainSample>& data, const TrainConfig& cfg,
                         std::vector<EpochLog>* log = nullptr, const EpochCallback& on_epoch = {});

struct DssTrainConfig {
  int epochs = 80;
  int batch = 4;
  unsigned long long seed = 1;
  nn::LrSchedule lr;
  double momentum = 0.9;
};

DssModel train_dss(const std::vector<TrainSample>& data, const DssTrainConfig& cfg,
                   std::vector<EpochLog>* log = nullptr);

// Top-1 accuracy of a scorer over annotated samples: the pick must be a
// rank-0 entry.
using Scorer = std::function<std::vector<double>(const TrainSample&, const std::vector<Candidate>&)>;
double top1_accuracy(const std::vector<TrainSample>& data, const Scorer& scorer);

}  // namespace h2v
