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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "h2v/annotations.hpp"
#include "h2v/crop_plan.hpp"
#include "h2v/error.hpp"
#include "h2v/image_io.hpp"
#include "h2v/metrics.hpp"
#include "h2v/pipeline.hpp"
#include "h2v/select.hpp"
#include "h2v/sequence_io.hpp"
#include "h2v/shots.hpp"
#include "h2v/synth.hpp"
#include "h2v/y4m.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace h2v;

namespace {

void log_event(const std::string& level, const std::string& event, json fields = json::object()) {
  fields["level"] = level;
  fields["event"] = event;
  std::cerr << fields.dump() << "\n";
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::kIo, "cannot write " + path);
  os << text;
}

Frame load_image_for(const fs::path& dir, const std::string& id) {
  for (const char* ext : {".png", ".ppm", ".pgm"}) {
    const fs::path p = dir / (id + ext);
    if (fs::exists(p)) return read_image(p);
  }
  fail(ErrorKind::kIo, "no image for id " + id + " in " + dir.string());
}

PipelineConfig config_or_default(const std::string& path) {
  return path.empty() ? PipelineConfig{} : load_pipeline_config(path);
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string kind = "images";
  int count = 100;
  unsigned long long seed = 1;
  std::string out;
  std::string video_kind = "random";
  bool crossfade = false;
  double jitter = 0.0;
  int min_shots = 2;
  int max_shots = 4;
};

int run_synth(const SynthArgs& a) {
  fs::create_directories(a.out);
  const fs::path out(a.out);
  if (a.kind == "images") {
    const auto data = make_image_dataset(a.count, SceneSampler{}, a.seed);
    AnnotationSet ann;
    CandidateFile cand;
    for (const auto& im : data) {
      write_png(im.image, out / (im.annotation.image_id + ".png"));
      ann.records.push_back(im.annotation);
      cand.records.push_back(im.candidates);
    }
    write_annotations(ann, out / "annotations.json");
    write_candidates(cand, out / "candidates.json");
    log_event("info", "synth_images", {{"count", a.count}, {"out", a.out}});
    return 0;
  }
  SyntheticVideoSpec spec;
  if (a.video_kind == "two-shot") {
    spec = two_shot_fixture(a.seed);
  } else if (a.video_kind == "random") {
    VideoSampler vs;
    vs.transition = a.crossfade ? Transition::kCrossfade : Transition::kHardCut;
    vs.min_shots = a.min_shots;
    vs.max_shots = a.max_shots;
    std::mt19937_64 rng(a.seed);
    spec = sample_video(vs, rng);
  } else {
    fail(ErrorKind::kConfig, "video kind must be random or two-shot");
  }
  if (a.jitter > 0.0) spec.box_jitter = a.jitter;
  const SyntheticVideo v = render_video(spec);
  write_y4m(v.frames, out / "video.y4m", Y4mChroma::k444);
  write_annotations(v.annotations, out / "annotations.json");
  write_candidates(v.candidates, out / "candidates.json");
  write_json_file(json{{"cuts", v.cut_frames}}, out / "cuts.json");
  log_event("info", "synth_video", {{"frames", v.frames.size()}, {"cuts", v.cut_frames}, {"out", a.out}});
  return 0;
}

// ---------------------------------------------------------------- shots

int run_shots(const std::string& input, const std::string& output, const std::string& config,
              std::optional<double> threshold, std::optional<int> min_len) {
  PipelineConfig cfg = config_or_default(config);
  if (threshold) cfg.sbd.threshold = *threshold;
  if (min_len) cfg.sbd.min_len = *min_len;
  validate(cfg.sbd);
  const FrameSequence seq = load_frame_sequence(input);
  const auto shots = detect_shots(seq, cfg.sbd);
  write_text(shots_to_json(shots).dump(2) + "\n", output);
  log_event("info", "shots", {{"frames", seq.size()}, {"shots", shots.size()}});
  return 0;
}

// ---------------------------------------------------------------- select

int run_select(const std::string& images, const std::string& candidates, const std::string& config,
               const std::string& mode, const std::string& model, const std::string& output) {
  PipelineConfig cfg = config_or_default(config);
  if (!mode.empty()) cfg.selection.mode = mode;
  if (!model.empty()) cfg.selection.model = model;
  validate(cfg);
  const CandidateFile cand = parse_candidates(candidates);
  auto scorer = make_scorer(cfg.selection);
  std::vector<ImagePrediction> preds;
  for (const auto& rec : cand.records) {
    const auto cands = make_candidates(rec);
    if (cands.empty()) {
      log_event("warn", "no_candidates", {{"id", rec.image_id}});
      continue;
    }
    const Frame img = load_image_for(images, rec.image_id);
    const auto pick = select_subject(cands, scorer->score(img, cands));
    preds.push_back({rec.image_id, cands[*pick].box});
  }
  write_text(predictions_to_json(preds).dump(2) + "\n", output);
  log_event("info", "select", {{"mode", cfg.selection.mode}, {"images", preds.size()}});
  return 0;
}

// ---------------------------------------------------------------- train

std::vector<TrainSample> training_data(const PipelineConfig& cfg, const std::string& images,
                                       const std::string& annotations) {
  std::vector<TrainSample> data;
  if (!annotations.empty()) {
    const AnnotationSet ann = parse_annotations(annotations);
    for (const auto& rec : ann.records) data.push_back({load_image_for(images, rec.image_id), rec});
    return data;
  }
  for (auto& im : make_image_dataset(cfg.train.images, SceneSampler{}, cfg.train.data_seed, "train")) {
    data.push_back({std::move(im.image), std::move(im.annotation)});
  }
  return data;
}

int run_train(const std::string& mode, const std::string& labels, const std::string& config,
              const std::string& out, const std::string& log_path, const std::string& images,
              const std::string& annotations, std::optional<int> epochs,
              std::optional<unsigned long long> seed) {
  PipelineConfig cfg = config_or_default(config);
  if (!labels.empty()) cfg.train.labels = parse_label_mode(labels);
  if (epochs) cfg.train.epochs = *epochs;
  if (seed) cfg.seed = *seed;
  validate(cfg);
  if (mode == "nss") {
    log_event("info", "train_skipped", {{"mode", "nss"}, {"reason", "N-SS has fixed weights"}});
    return 0;
  }
  if (mode != "dss" && mode != "rankss") fail(ErrorKind::kConfig, "train mode must be nss, dss or rankss");
  if (out.empty()) fail(ErrorKind::kConfig, "train needs --out");
  const auto data = training_data(cfg, images, annotations);
  std::ofstream log_file;
  if (!log_path.empty()) {
    log_file.open(log_path);
    if (!log_file) fail(ErrorKind::kIo, "cannot write " + log_path);
  }
  const auto emit = [&](const EpochLog& e) {
    const std::string line = to_json(e).dump();
    if (log_file.is_open()) {
      log_file << line << "\n";
      log_file.flush();
    } else {
      std::cerr << line << "\n";
    }
  };
  const auto t0 = std::chrono::steady_clock::now();
  if (mode == "rankss") {
    TrainConfig tc;
    tc.loss = cfg.loss;
    tc.labels = cfg.train.labels;
    tc.epochs = cfg.train.epochs;
    tc.batch = cfg.train.batch;
    tc.rois_per_image = cfg.train.rois_per_image;
    tc.seed = cfg.seed;
    tc.model.short_side = cfg.short_side;
    tc.model.encoder.channels = cfg.train.encoder_channels;
    tc.model.head.in_channels = 2 + cfg.train.encoder_channels;
    tc.model.head.mid = cfg.train.head_mid;
    tc.model.head.width = cfg.train.head_width;
    tc.model.head.fc1 = cfg.train.head_fc1;
    tc.model.head.fc2 = cfg.train.head_fc2;
    RankSsModel model = train_rankss(data, tc, nullptr, emit);
    save_rankss(model, out);
  } else {
    DssTrainConfig dc;
    dc.epochs = cfg.train.epochs;
    dc.batch = cfg.train.batch;
    dc.seed = cfg.seed;
    std::vector<EpochLog> log;
    DssModel model = train_dss(data, dc, &log);
    for (const auto& e : log) emit(e);
    save_dss(model, out);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  log_event("info", "train_done", {{"mode", mode}, {"images", data.size()}, {"seconds", secs}, {"out", out}});
  return 0;
}

// ---------------------------------------------------------------- convert

struct ConvertArgs {
  std::string input;
  std::string output;
  std::string candidates;
  std::string config;
  std::string plan;
  std::string trajectory;
  std::string aspect;
  std::string mode;
  std::string model;
  std::optional<unsigned long long> seed;
  bool no_sbd = false;
  bool no_track = false;
};

int run_convert(const ConvertArgs& a) {
  PipelineConfig cfg = config_or_default(a.config);
  if (!a.aspect.empty()) cfg.aspect = parse_aspect(a.aspect);
  if (!a.mode.empty()) cfg.selection.mode = a.mode;
  if (!a.model.empty()) cfg.selection.model = a.model;
  if (a.seed) cfg.seed = *a.seed;
  if (a.no_sbd) cfg.ablation.sbd = false;
  if (a.no_track) cfg.ablation.tracking = false;
  validate(cfg);
  const FrameSequence frames = load_frame_sequence(a.input);
  auto scorer = make_scorer(cfg.selection);
  std::optional<CandidateFile> cand_file;
  CandidateSource source;
  if (!a.candidates.empty()) {
    cand_file = parse_candidates(a.candidates);
    source = candidates_from_file(*cand_file);
  } else {
    log_event("info", "builtin_detector", {{"reason", "no candidate file given"}});
    source = candidates_from_detector(frames);
  }
  const auto t0 = std::chrono::steady_clock::now();
  const ConvertResult res = convert(frames, source, *scorer, cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& w : res.warnings) log_event("warn", "fallback", {{"detail", w}});
  for (const auto& e : res.events) {
    log_event("info", "verification", {{"frame", e.frame}, {"cause", reason_name(to_reason(e.cause))}});
  }
  if (!a.plan.empty()) write_crop_plan(res.plan, a.plan);
  if (!a.trajectory.empty()) write_json_file(trajectory_to_json(res.trajectory), a.trajectory);
  if (!a.output.empty()) save_frame_sequence(render_vertical(frames, res.plan), a.output);
  log_event("info", "convert",
            {{"frames", frames.size()},
             {"shots", res.shots.size()},
             {"selections", res.plan.selections.size()},
             {"fps", secs > 0.0 ? frames.size() / secs : 0.0},
             {"config_hash", res.plan.config_hash}});
  return 0;
}

// ---------------------------------------------------------------- eval

int run_eval_image(const std::string& pred, const std::string& annotations, const std::string& method,
                   bool use_body, double iou_thr, const std::string& report, const std::string& csv) {
  const auto preds = predictions_from_json(read_json_file(pred));
  EvalOptions opt;
  opt.use_body = use_body;
  opt.iou_threshold = iou_thr;
  const ImageReport r = evaluate_images(method, preds, parse_annotations(annotations), opt);
  write_text(to_json(r).dump(2) + "\n", report);
  if (!csv.empty()) write_text(image_table_csv({r}), csv);
  return 0;
}

int run_eval_video(const std::string& plan_path, const std::string& annotations, const std::string& method,
                   bool use_body, bool recall_gt, const std::string& report, const std::string& csv) {
  const CropPlan plan = read_crop_plan(plan_path);
  EvalOptions opt;
  opt.use_body = use_body;
  opt.recall_norm = recall_gt ? RecallNorm::kGroundTruth : RecallNorm::kCropArea;
  const VideoEvalResult r = evaluate_video(plan, parse_annotations(annotations), opt);
  write_text(to_json(r, method, 0.0).dump(2) + "\n", report);
  if (!csv.empty()) write_text(video_table_csv({{method, r, 0.0}}), csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"h2v: horizontal-to-vertical video conversion"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate synthetic images or videos");
  synth_cmd->add_option("kind", synth.kind, "images | video")->check(CLI::IsMember({"images", "video"}));
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--count", synth.count, "Image count");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--video-kind", synth.video_kind, "random | two-shot");
  synth_cmd->add_flag("--crossfade", synth.crossfade, "Crossfade transitions instead of hard cuts");
  synth_cmd->add_option("--jitter", synth.jitter, "Candidate box jitter, +- px");
  synth_cmd->add_option("--min-shots", synth.min_shots);
  synth_cmd->add_option("--max-shots", synth.max_shots);

  std::string shots_in, shots_out, shots_cfg;
  std::optional<double> shots_thr;
  std::optional<int> shots_min_len;
  auto* shots_cmd = app.add_subcommand("shots", "Detect hard cuts");
  shots_cmd->add_option("input", shots_in, "Frame directory or .y4m")->required();
  shots_cmd->add_option("-o,--output", shots_out, "Shots JSON (default stdout)");
  shots_cmd->add_option("--config", shots_cfg, "Pipeline config JSON");
  shots_cmd->add_option("--threshold", shots_thr, "Cut threshold multiple");
  shots_cmd->add_option("--min-len", shots_min_len, "Minimum shot length");

  std::string sel_images, sel_cand, sel_cfg, sel_mode, sel_model, sel_out;
  auto* select_cmd = app.add_subcommand("select", "Pick the primary subject per image");
  select_cmd->add_option("--images", sel_images, "Directory with <id>.png|ppm|pgm")->required();
  select_cmd->add_option("--candidates", sel_cand, "Candidate JSON")->required();
  select_cmd->add_option("--config", sel_cfg);
  select_cmd->add_option("--mode", sel_mode)->check(CLI::IsMember({"nss", "dss", "rankss"}));
  select_cmd->add_option("--model", sel_model, "Checkpoint for dss / rankss");
  select_cmd->add_option("-o,--output", sel_out, "Predictions JSON (default stdout)");

  std::string tr_mode = "rankss", tr_labels, tr_cfg, tr_out, tr_log, tr_images, tr_ann;
  std::optional<int> tr_epochs;
  std::optional<unsigned long long> tr_seed;
  auto* train_cmd = app.add_subcommand("train", "Train a subject-selection head");
  train_cmd->add_option("--mode", tr_mode)->check(CLI::IsMember({"nss", "dss", "rankss"}));
  train_cmd->add_option("--labels", tr_labels)->check(CLI::IsMember({"soft", "hard"}));
  train_cmd->add_option("--config", tr_cfg);
  train_cmd->add_option("--out", tr_out, "Checkpoint path");
  train_cmd->add_option("--log", tr_log, "JSON-lines training log (default stderr)");
  train_cmd->add_option("--images", tr_images, "Training image directory");
  train_cmd->add_option("--annotations", tr_ann, "Training annotations; synthetic data when omitted");
  train_cmd->add_option("--epochs", tr_epochs);
  train_cmd->add_option("--seed", tr_seed);

  ConvertArgs conv;
  auto* convert_cmd = app.add_subcommand("convert", "Convert a horizontal video to vertical");
  convert_cmd->add_option("input", conv.input, "Frame directory or .y4m")->required();
  convert_cmd->add_option("-o,--output", conv.output, "Vertical frames: directory or .y4m");
  convert_cmd->add_option("--candidates", conv.candidates, "Per-frame candidate JSON");
  convert_cmd->add_option("--config", conv.config);
  convert_cmd->add_option("--plan", conv.plan, "Crop plan JSON");
  convert_cmd->add_option("--trajectory", conv.trajectory, "Trajectory dump JSON");
  convert_cmd->add_option("--aspect", conv.aspect, "W:H, default 9:16");
  convert_cmd->add_option("--mode", conv.mode)->check(CLI::IsMember({"nss", "dss", "rankss"}));
  convert_cmd->add_option("--model", conv.model);
  convert_cmd->add_option("--seed", conv.seed);
  convert_cmd->add_flag("--no-sbd", conv.no_sbd, "Treat the video as one shot");
  convert_cmd->add_flag("--no-track", conv.no_track, "Per-frame selection without tracking or smoothing");

  std::string ev_kind, ev_pred, ev_plan, ev_ann, ev_method = "h2v", ev_report, ev_csv;
  bool ev_body = false, ev_recall_gt = false;
  double ev_iou = 0.5;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions or a crop plan");
  eval_cmd->add_option("kind", ev_kind, "image | video")->required()->check(CLI::IsMember({"image", "video"}));
  eval_cmd->add_option("--pred", ev_pred, "Predictions JSON (image)");
  eval_cmd->add_option("--plan", ev_plan, "Crop plan JSON (video)");
  eval_cmd->add_option("--annotations", ev_ann)->required();
  eval_cmd->add_option("--method", ev_method);
  eval_cmd->add_flag("--use-body", ev_body, "Score against body boxes");
  eval_cmd->add_option("--iou", ev_iou, "Hit threshold");
  eval_cmd->add_flag("--recall-gt", ev_recall_gt, "Normalize recall by GT area");
  eval_cmd->add_option("--report", ev_report, "Report JSON (default stdout)");
  eval_cmd->add_option("--csv", ev_csv, "Table CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*shots_cmd) return run_shots(shots_in, shots_out, shots_cfg, shots_thr, shots_min_len);
    if (*select_cmd) return run_select(sel_images, sel_cand, sel_cfg, sel_mode, sel_model, sel_out);
    if (*train_cmd) {
      return run_train(tr_mode, tr_labels, tr_cfg, tr_out, tr_log, tr_images, tr_ann, tr_epochs, tr_seed);
    }
    if (*convert_cmd) return run_convert(conv);
    if (*eval_cmd) {
      if (ev_kind == "image") {
        if (ev_pred.empty()) fail(ErrorKind::kConfig, "eval image needs --pred");
        return run_eval_image(ev_pred, ev_ann, ev_method, ev_body, ev_iou, ev_report, ev_csv);
      }
      if (ev_plan.empty()) fail(ErrorKind::kConfig, "eval video needs --plan");
      return run_eval_video(ev_plan, ev_ann, ev_method, ev_body, ev_recall_gt, ev_report, ev_csv);
    }
  } catch (const Error& e) {
    log_event("error", "failed", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}});
    return e.exit_code();
  } catch (const std::exception& e) {
    log_event("error", "fault", {{"message", e.what()}});
    return 4;
  }
  return 0;
}
