/* Copyright 2026 The SPIC Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Command-line front end: encode, decode, train, sweep, plot, make-synthetic.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "spic/bench/dataset.hpp"
#include "spic/bench/pipeline.hpp"
#include "spic/bench/plot.hpp"
#include "spic/bench/sweep.hpp"
#include "spic/bench/synthetic.hpp"
#include "spic/core/error.hpp"
#include "spic/core/png_io.hpp"
#include "spic/diffusion/checkpoint.hpp"
#include "spic/diffusion/config.hpp"
#include "spic/diffusion/trainer.hpp"
#include "spic/encoder/external_tool.hpp"
#include "spic/encoder/rate.hpp"
#include "spic/metrics/feature_extractor.hpp"

namespace spic {
namespace {

const std::map<std::string, SsmCodec> kSsmCodecs = {
    {"reference", SsmCodec::kReference}, {"flif", SsmCodec::kFlif}};
const std::map<std::string, CoarseCodec> kCoarseCodecs = {
    {"reference", CoarseCodec::kReference}, {"bpg", CoarseCodec::kBpg}};

// Every verb accepts the same config file and reads all known sections.
struct FullConfig {
  DenoiserConfig denoiser;
  ScheduleConfig schedule;
  TrainConfig train;
  SweepConfig sweep;
};

FullConfig LoadConfig(const std::string& path, int num_classes) {
  KeyValueConfig kv =
      path.empty() ? KeyValueConfig() : KeyValueConfig::Load(path);
  FullConfig c;
  c.denoiser.num_classes = num_classes;
  ReadDenoiserConfig(kv, c.denoiser);
  ReadScheduleConfig(kv, c.schedule);
  ReadTrainConfig(kv, c.train);
  ReadSweepConfig(kv, c.sweep);
  kv.CheckAllConsumed();
  return c;
}

std::vector<LoadedExample> LoadSplit(const std::string& root,
                                     const std::string& layout,
                                     const std::string& split, int n_c) {
  const DatasetManifest m = Ingest(root, ParseLayout(layout), n_c, split);
  for (const auto& s : m.skipped) {
    std::fprintf(stderr, "skipped %s: %s\n", s.path.c_str(), s.reason.c_str());
  }
  if (!m.skipped.empty()) {
    std::fprintf(stderr, "warning: %zu entries skipped\n", m.skipped.size());
  }
  if (m.entries.empty()) throw IoError(m.notice);
  std::vector<LoadedExample> out;
  for (const auto& e : m.entries) out.push_back(LoadEntry(e, n_c));
  return out;
}

struct EncodeArgs {
  std::string input, output, annotation;
  int quality = 30;
  int num_classes = 5;
  SsmCodec ssm_codec = SsmCodec::kReference;
  CoarseCodec coarse_codec = CoarseCodec::kReference;
};

int RunEncode(const EncodeArgs& a) {
  const Image x = ReadImagePng(a.input);
  std::unique_ptr<Segmenter> seg;
  if (!a.annotation.empty()) {
    seg = std::make_unique<GroundTruthSegmenter>(
        ReadLabelPng(a.annotation, a.num_classes));
  } else {
    seg = std::make_unique<ColorRuleSegmenter>(
        SyntheticPalette(a.num_classes));
  }
  const EncodeResult r =
      EncodeImage(x, *seg, {a.quality, a.ssm_codec, a.coarse_codec});
  WriteFileBytes(a.output, r.bytes);
  std::printf("%s\n", r.rate.ToJson().c_str());
  return 0;
}

struct DecodeArgs {
  std::string input, output, checkpoint, ssm_output;
  std::string method = "spic";
  int steps = 20;
  std::uint64_t seed = 0;
};

int RunDecode(const DecodeArgs& a) {
  const auto bytes = ReadFileBytes(a.input);
  const DecodedStream d = DecodeStream(bytes);
  Image out;
  if (a.method == "bilinear") {
    out = ReconstructBilinear(d);
  } else {
    if (a.checkpoint.empty()) {
      throw InvalidArgument("decode: --checkpoint is required for method spic");
    }
    const LoadedCheckpoint ck = LoadCheckpoint(a.checkpoint);
    SamplerConfig sc;
    sc.steps = a.steps;
    sc.seed = a.seed;
    out = ReconstructDiffusion(d, UNetPredictor(*ck.model),
                               MakeSchedule(ck.schedule), sc);
  }
  WriteImagePng(a.output, out);
  if (!a.ssm_output.empty()) WriteLabelPng(a.ssm_output, d.ssm);
  const SemanticBitstream bs = Unpack(bytes);
  std::printf("%s\n",
              ComputeRate(bs, bs.header.width, bs.header.height).ToJson().c_str());
  return 0;
}

struct TrainArgs {
  std::string data, layout = "flat", split = "train", config, output;
  int num_classes = 5;
  int steps = -1;
  int log_every = 100;
};

int RunTrain(const TrainArgs& a) {
  const FullConfig full = LoadConfig(a.config, a.num_classes);
  const DenoiserConfig& dcfg = full.denoiser;
  const ScheduleConfig& scfg = full.schedule;
  TrainConfig tcfg = full.train;
  if (a.steps >= 0) tcfg.steps = a.steps;
  SPIC_REQUIRE(dcfg.num_classes == a.num_classes,
               "denoiser.num_classes differs from --num-classes");

  const auto examples = LoadSplit(a.data, a.layout, a.split, a.num_classes);
  const auto train_set = BuildTrainingSet(examples, tcfg.coarse_quality);
  nn::UNet<float> model(dcfg);
  Trainer trainer(model, MakeSchedule(scfg), tcfg, train_set);
  std::fprintf(stderr, "training on %zu images, %zu parameters\n",
               train_set.size(), model.params().num_scalars());
  trainer.Run([&](int step, double loss) {
    if (a.log_every > 0 && step % a.log_every == 0) {
      std::fprintf(stderr, "step %d loss %.5f\n", step, loss);
    }
  });
  SaveCheckpoint(a.output, model, scfg);
  return 0;
}

struct SweepArgs {
  std::string data, layout = "flat", split = "val", config, checkpoint,
      output;
  int num_classes = 5;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

int RunSweepCli(const SweepArgs& a) {
  SweepConfig cfg = LoadConfig(a.config, a.num_classes).sweep;
  if (a.seed_set) cfg.seed = a.seed;
  const LoadedCheckpoint ck = LoadCheckpoint(a.checkpoint);
  SPIC_REQUIRE(ck.model->config().num_classes == a.num_classes,
               "checkpoint class count differs from --num-classes");
  const auto images = LoadSplit(a.data, a.layout, a.split, a.num_classes);
  const ColorRuleSegmenter seg(SyntheticPalette(a.num_classes));
  const RandomConvFeatureExtractor fx(cfg.seed);
  const auto rows = RunSweep(images, seg, UNetPredictor(*ck.model),
                             MakeSchedule(ck.schedule), cfg, fx);
  std::string out = a.output;
  if (out.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    out = (std::filesystem::path(cfg.output_dir) / "sweep.csv").string();
  }
  std::ofstream f(out);
  if (!f) throw IoError("cannot write " + out);
  WriteSweepCsv(f, rows);
  f.close();
  if (!f) throw IoError("failed writing " + out);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  std::fprintf(stderr, "%zu rows written to %s (%zu not ok)\n", rows.size(),
               out.c_str(), failed);
  return 0;
}

int RunPlot(const std::string& csv, const std::string& out_dir) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot open " + csv);
  for (const auto& p : EmitPlots(ReadSweepCsv(in), out_dir)) {
    std::printf("%s\n", p.c_str());
  }
  return 0;
}

int RunMakeSynthetic(const std::string& out, int n_train, int n_val,
                     const SyntheticConfig& cfg) {
  WriteSyntheticSplit(out, "train", cfg, 0, n_train);
  WriteSyntheticSplit(out, "val", cfg, n_train, n_val);
  std::printf("wrote %d train and %d val images to %s\n", n_train, n_val,
              out.c_str());
  return 0;
}

}  // namespace
}  // namespace spic

int main(int argc, char** argv) {
  using namespace spic;
  CLI::App app{"Semantic image compression with a conditioned diffusion "
               "decoder"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* c_enc = app.add_subcommand("encode", "Compress a PNG into a .spic file");
  c_enc->add_option("input", enc.input, "Input PNG")->required();
  c_enc->add_option("-o,--output", enc.output, "Output .spic")->required();
  c_enc->add_option("-q,--quality", enc.quality, "Coarse quality 1..51")
      ->check(CLI::Range(1, 51));
  c_enc->add_option("--annotation", enc.annotation,
                    "Use this label PNG as the SSM instead of the colour rule");
  c_enc->add_option("--num-classes", enc.num_classes, "Number of classes");
  c_enc->add_option("--ssm-codec", enc.ssm_codec)
      ->transform(CLI::CheckedTransformer(kSsmCodecs));
  c_enc->add_option("--coarse-codec", enc.coarse_codec)
      ->transform(CLI::CheckedTransformer(kCoarseCodecs));

  DecodeArgs dec;
  auto* c_dec = app.add_subcommand("decode", "Reconstruct a PNG from .spic");
  c_dec->add_option("input", dec.input, "Input .spic")->required();
  c_dec->add_option("-o,--output", dec.output, "Output PNG")->required();
  c_dec->add_option("--checkpoint", dec.checkpoint, "Trained denoiser");
  c_dec->add_option("--method", dec.method)
      ->check(CLI::IsMember({"spic", "bilinear"}));
  c_dec->add_option("--steps", dec.steps, "Sampling steps")
      ->check(CLI::PositiveNumber);
  c_dec->add_option("--seed", dec.seed, "Sampler seed");
  c_dec->add_option("--ssm-output", dec.ssm_output,
                    "Also write the decoded label map");

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train the denoiser");
  c_tr->add_option("--data", tr.data, "Dataset root")->required();
  c_tr->add_option("--layout", tr.layout)
      ->check(CLI::IsMember({"flat", "cityscapes"}));
  c_tr->add_option("--split", tr.split);
  c_tr->add_option("--config", tr.config, "key = value config file");
  c_tr->add_option("-o,--output", tr.output, "Checkpoint path")->required();
  c_tr->add_option("--num-classes", tr.num_classes);
  c_tr->add_option("--steps", tr.steps, "Override train.steps");
  c_tr->add_option("--log-every", tr.log_every);

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Rate-distortion sweep to CSV");
  c_sw->add_option("--data", sw.data, "Dataset root")->required();
  c_sw->add_option("--layout", sw.layout)
      ->check(CLI::IsMember({"flat", "cityscapes"}));
  c_sw->add_option("--split", sw.split);
  c_sw->add_option("--config", sw.config, "key = value config file");
  c_sw->add_option("--checkpoint", sw.checkpoint)->required();
  c_sw->add_option("-o,--output", sw.output,
                   "CSV path (default <sweep.output_dir>/sweep.csv)");
  c_sw->add_option("--num-classes", sw.num_classes);
  auto* seed_opt = c_sw->add_option("--seed", sw.seed, "Override sweep.seed");

  std::string plot_csv, plot_out;
  auto* c_pl = app.add_subcommand("plot", "mIoU/FID vs BPP plots from a CSV");
  c_pl->add_option("csv", plot_csv)->required();
  c_pl->add_option("-o,--output", plot_out, "Output directory")->required();

  std::string syn_out;
  int syn_train = 64, syn_val = 16;
  SyntheticConfig syn;
  auto* c_syn = app.add_subcommand("make-synthetic", "Write the toy corpus");
  c_syn->add_option("-o,--output", syn_out, "Dataset root")->required();
  c_syn->add_option("--train", syn_train)->check(CLI::NonNegativeNumber);
  c_syn->add_option("--val", syn_val)->check(CLI::NonNegativeNumber);
  c_syn->add_option("--seed", syn.seed);
  c_syn->add_option("--num-classes", syn.num_classes)->check(CLI::Range(3, 5));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*c_enc) return RunEncode(enc);
    if (*c_dec) return RunDecode(dec);
    if (*c_tr) return RunTrain(tr);
    if (*c_sw) {
      sw.seed_set = seed_opt->count() > 0;
      return RunSweepCli(sw);
    }
    if (*c_pl) return RunPlot(plot_csv, plot_out);
    if (*c_syn) return RunMakeSynthetic(syn_out, syn_train, syn_val, syn);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
