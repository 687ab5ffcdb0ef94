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

#include "spic/bench/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "spic/core/error.hpp"
#include "spic/core/png_io.hpp"

namespace spic {
namespace {

enum Class { kRoad = 0, kSky = 1, kVegetation = 2, kCar = 3, kSign = 4 };

struct Point {
  double x, y;
};

bool InsidePolygon(const std::vector<Point>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > y) != (b.y > y) &&
        x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

class Canvas {
 public:
  Canvas(int h, int w, int n_c) : h_(h), w_(w), n_c_(n_c), labels_(h * w) {}

  void Fill(int k) { std::fill(labels_.begin(), labels_.end(), Clamp(k)); }
  void Polygon(const std::vector<Point>& poly, int k) {
    for (int y = 0; y < h_; ++y) {
      for (int x = 0; x < w_; ++x) {
        if (InsidePolygon(poly, x + 0.5, y + 0.5)) labels_[y * w_ + x] = Clamp(k);
      }
    }
  }
  void Ellipse(double cx, double cy, double rx, double ry, int k) {
    for (int y = 0; y < h_; ++y) {
      for (int x = 0; x < w_; ++x) {
        const double dx = (x + 0.5 - cx) / rx;
        const double dy = (y + 0.5 - cy) / ry;
        if (dx * dx + dy * dy <= 1) labels_[y * w_ + x] = Clamp(k);
      }
    }
  }
  const std::vector<std::uint8_t>& labels() const { return labels_; }

 private:
  // Classes beyond the configured count fold onto the road.
  std::uint8_t Clamp(int k) const {
    return static_cast<std::uint8_t>(k < n_c_ ? k : kRoad);
  }

  int h_, w_, n_c_;
  std::vector<std::uint8_t> labels_;
};

}  // namespace

std::vector<Rgb> SyntheticPalette(int num_classes) {
  SPIC_REQUIRE(num_classes >= 3 && num_classes <= 5,
               "synthetic corpus supports 3 to 5 classes");
  const std::vector<Rgb> all = {{0.45, 0.45, 0.45},
                                {0.35, 0.6, 0.95},
                                {0.15, 0.6, 0.2},
                                {0.85, 0.15, 0.15},
                                {0.95, 0.85, 0.2}};
  return {all.begin(), all.begin() + num_classes};
}

ColorRuleSegmenter SyntheticSegmenter(int num_classes) {
  return ColorRuleSegmenter(SyntheticPalette(num_classes));
}

SyntheticSample GenerateSynthetic(const SyntheticConfig& cfg, int index) {
  SPIC_REQUIRE(cfg.height >= 8 && cfg.width >= 8,
               "synthetic image too small");
  SPIC_REQUIRE(index >= 0, "synthetic index must be non-negative");
  const int h = cfg.height, w = cfg.width;
  std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed >> 32),
                    static_cast<std::uint64_t>(cfg.seed & 0xffffffffu),
                    static_cast<std::uint64_t>(index)};
  std::mt19937_64 rng(seq);
  auto uni = [&rng](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  auto uint = [&rng](int a, int b) {
    return std::uniform_int_distribution<int>(a, b)(rng);
  };

  Canvas canvas(h, w, cfg.num_classes);
  canvas.Fill(kRoad);
  // Sky above a slightly tilted horizon.
  const double horizon_l = uni(0.25, 0.45) * h;
  const double horizon_r = horizon_l + uni(-0.1, 0.1) * h;
  canvas.Polygon({{0, 0}, {double(w), 0}, {double(w), horizon_r},
                  {0, horizon_l}},
                 kSky);
  auto horizon = [&](double x) {
    return horizon_l + (horizon_r - horizon_l) * x / w;
  };
  // Vegetation and buildings standing on the horizon.
  const int blobs = uint(2, 4);
  for (int i = 0; i < blobs; ++i) {
    const double cx = uni(0, w);
    const double bw = uni(0.08, 0.25) * w;
    const double top = horizon(cx) - uni(0.1, 0.3) * h;
    const double base = horizon(cx) + uni(0.02, 0.1) * h;
    if (uint(0, 1) == 0) {
      canvas.Ellipse(cx, (top + base) / 2, bw / 2, (base - top) / 2,
                     kVegetation);
    } else {
      const int k = uint(0, 2) == 0 ? kSign : kVegetation;
      canvas.Polygon({{cx - bw / 2, base}, {cx - bw / 2, top + uni(0, 4)},
                      {cx + bw / 2, top + uni(0, 4)}, {cx + bw / 2, base}},
                     k);
    }
  }
  // Cars on the road.
  const int cars = uint(1, 3);
  for (int i = 0; i < cars; ++i) {
    const double cy = uni(horizon_l + 0.2 * h, 0.9 * h);
    const double scale = 0.5 + cy / h;
    const double cw = uni(0.12, 0.2) * w * scale;
    const double ch = uni(0.08, 0.14) * h * scale;
    const double cx = uni(0, w);
    canvas.Polygon({{cx - cw / 2, cy + ch / 2}, {cx - cw / 2, cy},
                    {cx - cw / 4, cy - ch / 2}, {cx + cw / 4, cy - ch / 2},
                    {cx + cw / 2, cy}, {cx + cw / 2, cy + ch / 2}},
                   kCar);
  }
  // A small triangular sign.
  if (uint(0, 1) == 1) {
    const double cx = uni(0.1, 0.9) * w;
    const double cy = uni(0.15, 0.6) * h;
    const double r = uni(0.04, 0.08) * h + 2;
    canvas.Polygon({{cx, cy - r}, {cx + r, cy + r}, {cx - r, cy + r}}, kSign);
  }

  SegmentationMap labels =
      SegmentationMap::FromLabels(h, w, cfg.num_classes, canvas.labels());
  const std::vector<Rgb> palette = SyntheticPalette(cfg.num_classes);

  // Smooth shading plus fine per-pixel grain.
  const double gx = uni(-1, 1), gy = uni(-1, 1);
  const double fx = uni(0.1, 0.4), fy = uni(0.1, 0.4), ph = uni(0, 6.28);
  std::uniform_real_distribution<double> grain(-1, 1);
  Image image(h, w, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int k = labels.at(y, x);
      const double shade =
          0.5 * (gx * (x / double(w) - 0.5) + gy * (y / double(h) - 0.5)) +
          0.5 * std::sin(fx * x + fy * y + ph + k);
      for (int c = 0; c < kRgbChannels; ++c) {
        const double v = palette[k][c] +
                         cfg.texture * (0.6 * shade + 0.4 * grain(rng));
        image.set(c, y, x, std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return {std::move(image), std::move(labels)};
}

void WriteSyntheticSplit(const std::filesystem::path& root,
                         const std::string& split, const SyntheticConfig& cfg,
                         int first, int count) {
  const auto images = root / split / "images";
  const auto labels = root / split / "labels";
  std::filesystem::create_directories(images);
  std::filesystem::create_directories(labels);
  for (int i = first; i < first + count; ++i) {
    const SyntheticSample s = GenerateSynthetic(cfg, i);
    char id[32];
    std::snprintf(id, sizeof(id), "synth_%05d.png", i);
    WriteImagePng(images / id, s.image);
    WriteLabelPng(labels / id, s.labels);
  }
}

}  // namespace spic
