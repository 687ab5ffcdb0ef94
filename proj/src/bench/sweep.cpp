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

#include "spic/bench/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "spic/bench/pipeline.hpp"
#include "spic/core/error.hpp"
#include "spic/encoder/coarse_codec.hpp"
#include "spic/metrics/iou.hpp"

namespace spic {
namespace {

struct RowResult {
  SweepRow row;
  std::optional<Image> recon;
};

std::string Sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  }
  return s;
}

SsmCodec ParseSsmCodec(const std::string& s) {
  if (s == "reference") return SsmCodec::kReference;
  if (s == "flif") return SsmCodec::kFlif;
  throw InvalidArgument("unknown SSM codec '" + s + "'");
}

CoarseCodec ParseCoarseCodec(const std::string& s) {
  if (s == "reference") return CoarseCodec::kReference;
  if (s == "bpg") return CoarseCodec::kBpg;
  throw InvalidArgument("unknown coarse codec '" + s + "'");
}

// Full-image classical codec evaluated at the quality whose rate is closest
// to a target. Rates are cached per quality.
class FullImageBaseline {
 public:
  FullImageBaseline(const std::string& method, const Image& x,
                    const ExternalTools& tools)
      : method_(method), x_(Retag<CoarseImage>(x)), tools_(tools) {}

  bool available() const {
    if (method_ == kMethodDctFull) return true;
    return ToolAvailable(tools_.bpgenc) && ToolAvailable(tools_.bpgdec);
  }

  int MatchQuality(double target_bpp) {
    int best = kMinCoarseQuality;
    double best_err = INFINITY;
    for (int q = kMinCoarseQuality; q <= kMaxCoarseQuality; ++q) {
      const double err = std::abs(Payload(q).size() * 8.0 / Pixels() -
                                  target_bpp);
      if (err <= best_err) {
        best_err = err;
        best = q;
      }
    }
    return best;
  }

  const std::vector<std::uint8_t>& Payload(int q) {
    auto it = cache_.find(q);
    if (it == cache_.end()) {
      std::vector<std::uint8_t> bytes = method_ == kMethodDctFull
                                            ? dct::Encode(x_, q)
                                            : bpg::Encode(x_, q, tools_);
      it = cache_.emplace(q, std::move(bytes)).first;
    }
    return it->second;
  }

  Image Decode(int q) {
    const auto& p = Payload(q);
    return Retag<Image>(method_ == kMethodDctFull
                            ? dct::Decode(p, x_.height(), x_.width(), q)
                            : bpg::Decode(p, x_.height(), x_.width(), tools_));
  }

  double Pixels() const {
    return static_cast<double>(x_.height()) * x_.width();
  }

 private:
  std::string method_;
  CoarseImage x_;
  const ExternalTools& tools_;
  std::map<int, std::vector<std::uint8_t>> cache_;
};

void Score(RowResult& r, const Image& original, const Image& recon,
           const Segmenter& segmenter, const SegmentationMap& ssm) {
  r.row.miou = Miou(Segment(recon, segmenter), ssm);
  r.row.psnr = Psnr(original, recon);
  r.recon = recon;
}

std::vector<RowResult> SweepImage(const LoadedExample& ex, std::size_t index,
                                  const Segmenter& segmenter,
                                  const NoisePredictor& model,
                                  const NoiseSchedule& sched,
                                  const SweepConfig& cfg,
                                  const ExternalTools& tools) {
  std::vector<RowResult> out;
  auto fail_all = [&](const std::string& why) {
    for (int q : cfg.qualities) {
      RowResult r;
      r.row.image_id = ex.id;
      r.row.method = kMethodSpic;
      r.row.quality = q;
      r.row.rate = ComputeRate(0, 0, 0, ex.image.width(), ex.image.height());
      r.row.status = "error: " + Sanitize(why);
      out.push_back(std::move(r));
    }
  };
  SegmentationMap ssm(1, 1, 1);
  try {
    ssm = Segment(ex.image, segmenter);
  } catch (const std::exception& e) {
    fail_all(e.what());
    return out;
  }
  std::vector<FullImageBaseline> baselines;
  for (const std::string& b : cfg.baselines) {
    baselines.emplace_back(b, ex.image, tools);
  }
  const int w = ex.image.width(), h = ex.image.height();
  for (int q : cfg.qualities) {
    RowResult spic_row;
    spic_row.row.image_id = ex.id;
    spic_row.row.method = kMethodSpic;
    spic_row.row.quality = spic_row.row.codec_quality = q;
    spic_row.row.rate = ComputeRate(0, 0, 0, w, h);
    RowResult bil_row = spic_row;
    bil_row.row.method = kMethodBilinear;
    std::optional<double> target_bpp;
    try {
      EncodeOptions opt{q, cfg.ssm_codec, cfg.coarse_codec};
      const EncodeResult enc = EncodeImage(ex.image, segmenter, opt, tools);
      const DecodedStream d = DecodeStream(enc.bytes, tools);
      spic_row.row.rate = bil_row.row.rate = enc.rate;
      target_bpp = enc.rate.total.value();
      SamplerConfig sc = cfg.sampler;
      sc.seed = RowSeed(cfg.seed, index, q);
      Score(spic_row, ex.image, ReconstructDiffusion(d, model, sched, sc),
            segmenter, ssm);
      Score(bil_row, ex.image, ReconstructBilinear(d), segmenter, ssm);
    } catch (const std::exception& e) {
      spic_row.row.status = bil_row.row.status = "error: " + Sanitize(e.what());
    }
    out.push_back(std::move(spic_row));
    if (cfg.include_bilinear) out.push_back(std::move(bil_row));

    for (std::size_t b = 0; b < baselines.size(); ++b) {
      RowResult r;
      r.row.image_id = ex.id;
      r.row.method = cfg.baselines[b];
      r.row.quality = q;
      r.row.rate = ComputeRate(0, 0, 0, w, h);
      try {
        if (!baselines[b].available()) {
          r.row.status = "unavailable";
        } else if (!target_bpp) {
          r.row.status = "error: no operating point to match";
        } else {
          const int bq = baselines[b].MatchQuality(*target_bpp);
          r.row.codec_quality = bq;
          r.row.rate = ComputeRate(0, baselines[b].Payload(bq).size(), 0, w, h);
          Score(r, ex.image, baselines[b].Decode(bq), segmenter, ssm);
        }
      } catch (const std::exception& e) {
        r.row.status = "error: " + Sanitize(e.what());
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

const char* const kColumns[] = {
    "image_id",     "bpp_total",   "bpp_ssm",     "bpp_coarse", "miou",
    "fid_batch",    "psnr",        "method",      "quality",    "codec_quality",
    "bpp_header",   "bits_total",  "bits_ssm",    "bits_coarse", "bits_header",
    "pixels",       "status"};

}  // namespace

void ReadSweepConfig(KeyValueConfig& kv, SweepConfig& cfg) {
  if (auto v = kv.GetIntList("sweep.qualities")) cfg.qualities = *v;
  if (auto v = kv.GetString("sweep.ssm_codec")) cfg.ssm_codec = ParseSsmCodec(*v);
  if (auto v = kv.GetString("sweep.coarse_codec")) {
    cfg.coarse_codec = ParseCoarseCodec(*v);
  }
  if (auto v = kv.GetString("sweep.baselines")) {
    cfg.baselines.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item.erase(0, item.find_first_not_of(' '));
      item.erase(item.find_last_not_of(' ') + 1);
      if (item.empty()) continue;
      if (item != kMethodDctFull && item != kMethodBpgFull) {
        throw InvalidArgument("unknown baseline '" + item + "'");
      }
      cfg.baselines.push_back(item);
    }
  }
  if (auto v = kv.GetBool("sweep.include_bilinear")) cfg.include_bilinear = *v;
  if (auto v = kv.GetString("sweep.output_dir")) cfg.output_dir = *v;
  if (auto v = kv.GetInt("sweep.seed")) cfg.seed = *v;
  if (auto v = kv.GetInt("sweep.threads")) cfg.threads = *v;
  ReadSamplerConfig(kv, cfg.sampler);
  SPIC_REQUIRE(!cfg.qualities.empty(), "sweep.qualities must not be empty");
  for (int q : cfg.qualities) {
    SPIC_REQUIRE(q >= kMinCoarseQuality && q <= kMaxCoarseQuality,
                 "sweep.qualities must lie in [1, 51]");
  }
  SPIC_REQUIRE(cfg.threads >= 1, "sweep.threads must be >= 1");
}

std::uint64_t RowSeed(std::uint64_t seed, std::size_t image_index,
                      int quality) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(image_index),
                    static_cast<std::uint32_t>(quality)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<SweepRow> RunSweep(const std::vector<LoadedExample>& images,
                               const Segmenter& segmenter,
                               const NoisePredictor& model,
                               const NoiseSchedule& sched,
                               const SweepConfig& cfg,
                               const FeatureExtractor& features,
                               const ExternalTools& tools) {
  SPIC_REQUIRE(!cfg.qualities.empty(), "sweep: empty quality ladder");
  std::vector<std::vector<RowResult>> per_image(images.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < images.size(); i = next++) {
      per_image[i] =
          SweepImage(images[i], i, segmenter, model, sched, cfg, tools);
    }
  };
  const int n_threads =
      std::max(1, std::min<int>(cfg.threads, static_cast<int>(images.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Batch FID per (method, quality) over rows that succeeded.
  std::vector<std::optional<Eigen::VectorXd>> original_features(images.size());
  std::map<std::pair<std::string, int>,
           std::vector<std::pair<std::size_t, RowResult*>>>
      groups;
  for (std::size_t i = 0; i < per_image.size(); ++i) {
    for (RowResult& r : per_image[i]) {
      if (r.row.status == "ok" && r.recon) {
        groups[{r.row.method, r.row.quality}].emplace_back(i, &r);
      }
    }
  }
  for (auto& [key, members] : groups) {
    if (members.size() < 2) continue;
    Eigen::MatrixXd fa(members.size(), features.dim());
    Eigen::MatrixXd fb(members.size(), features.dim());
    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::size_t i = members[m].first;
      if (!original_features[i]) {
        original_features[i] = features.Extract(images[i].image);
      }
      fa.row(m) = original_features[i]->transpose();
      fb.row(m) = features.Extract(*members[m].second->recon).transpose();
    }
    const double fid = Fid(ComputeFeatureStatistics(fa),
                           ComputeFeatureStatistics(fb));
    for (auto& [i, r] : members) r->row.fid_batch = fid;
  }

  std::vector<SweepRow> rows;
  for (auto& group : per_image) {
    for (RowResult& r : group) rows.push_back(std::move(r.row));
  }
  return rows;
}

void WriteSweepCsv(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (std::size_t c = 0; c < std::size(kColumns); ++c) {
    out << (c ? "," : "") << kColumns[c];
  }
  out << "\n";
  for (const SweepRow& r : rows) {
    const bool ok = r.status == "ok";
    out << r.image_id << "," << FormatDouble(r.rate.total.value()) << ","
        << FormatDouble(r.rate.ssm.value()) << ","
        << FormatDouble(r.rate.coarse.value()) << ","
        << (ok ? FormatDouble(r.miou) : "") << ","
        << (r.fid_batch ? FormatDouble(*r.fid_batch) : "") << ","
        << (ok ? (r.psnr.identical ? "inf" : FormatDouble(r.psnr.db)) : "")
        << "," << r.method << "," << r.quality << "," << r.codec_quality
        << "," << FormatDouble(r.rate.header.value()) << ","
        << r.rate.total.bits << "," << r.rate.ssm.bits << ","
        << r.rate.coarse.bits << "," << r.rate.header.bits << ","
        << r.rate.total.pixels << "," << r.status << "\n";
  }
}

std::vector<SweepRow> ReadSweepCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("sweep CSV is empty");
  const std::vector<std::string> header = SplitCsv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : kColumns) {
    if (!col.count(name)) {
      throw InvalidArgument(std::string("sweep CSV lacks column ") + name);
    }
  }
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = SplitCsv(line);
    if (cells.size() != header.size()) {
      throw InvalidArgument("sweep CSV line " + std::to_string(lineno) +
                            ": wrong number of cells");
    }
    auto get = [&](const char* name) -> const std::string& {
      return cells[col[name]];
    };
    auto num = [&](const char* name) {
      const std::string& s = get(name);
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || *end != '\0') {
        throw InvalidArgument("sweep CSV line " + std::to_string(lineno) +
                              ": bad value in " + name);
      }
      return v;
    };
    auto bits = [&](const char* name) {
      return static_cast<std::uint64_t>(std::stoull(get(name)));
    };
    SweepRow r;
    r.image_id = get("image_id");
    r.method = get("method");
    r.status = get("status");
    r.quality = static_cast<int>(num("quality"));
    r.codec_quality = static_cast<int>(num("codec_quality"));
    const std::uint64_t px = bits("pixels");
    r.rate.ssm = {bits("bits_ssm"), px};
    r.rate.coarse = {bits("bits_coarse"), px};
    r.rate.header = {bits("bits_header"), px};
    r.rate.total = {bits("bits_total"), px};
    if (r.status == "ok") {
      r.miou = num("miou");
      if (get("psnr") == "inf") {
        r.psnr.identical = true;
      } else {
        r.psnr.db = num("psnr");
      }
    }
    if (!get("fid_batch").empty()) r.fid_batch = num("fid_batch");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace spic
