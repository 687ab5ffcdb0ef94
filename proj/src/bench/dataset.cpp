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

#include "spic/bench/dataset.hpp"

#include <algorithm>
#include <map>

#include "spic/core/error.hpp"
#include "spic/core/png_io.hpp"

namespace spic {
namespace fs = std::filesystem;
namespace {

struct Candidate {
  std::string id;
  std::string split;
  fs::path image;
  fs::path annotation;  // empty when missing
};

bool EndsWith(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<fs::path> SortedChildren(const fs::path& dir, bool directories) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Candidate> ScanFlat(const fs::path& root) {
  std::vector<Candidate> out;
  for (const fs::path& split_dir : SortedChildren(root, true)) {
    const std::string split = split_dir.filename().string();
    for (const fs::path& img : SortedChildren(split_dir / "images", false)) {
      if (img.extension() != ".png") continue;
      const fs::path ann = split_dir / "labels" / img.filename();
      out.push_back({img.stem().string(), split, img,
                     fs::exists(ann) ? ann : fs::path()});
    }
  }
  return out;
}

std::vector<Candidate> ScanCityscapes(const fs::path& root) {
  const std::string kSuffix = "_leftImg8bit.png";
  std::vector<Candidate> out;
  for (const fs::path& split_dir :
       SortedChildren(root / "leftImg8bit", true)) {
    const std::string split = split_dir.filename().string();
    for (const fs::path& city : SortedChildren(split_dir, true)) {
      for (const fs::path& img : SortedChildren(city, false)) {
        const std::string name = img.filename().string();
        if (!EndsWith(name, kSuffix)) continue;
        const std::string stem = name.substr(0, name.size() - kSuffix.size());
        const fs::path gt = root / "gtFine" / split / city.filename();
        fs::path ann = gt / (stem + "_gtFine_labelTrainIds.png");
        if (!fs::exists(ann)) ann = gt / (stem + "_gtFine_labelIds.png");
        out.push_back({stem, split, img, fs::exists(ann) ? ann : fs::path()});
      }
    }
  }
  return out;
}

}  // namespace

DatasetLayout ParseLayout(const std::string& name) {
  if (name == "flat") return DatasetLayout::kFlat;
  if (name == "cityscapes") return DatasetLayout::kCityscapes;
  throw InvalidArgument("unknown dataset layout '" + name +
                        "' (expected flat or cityscapes)");
}

std::vector<ManifestEntry> DatasetManifest::Split(
    const std::string& split) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries) {
    if (e.split == split) out.push_back(e);
  }
  return out;
}

DatasetManifest Ingest(const fs::path& root, DatasetLayout layout,
                       int num_classes, const std::string& split) {
  SPIC_REQUIRE(num_classes >= 1 && num_classes <= SegmentationMap::kMaxClasses,
               "ingest: num_classes out of range");
  if (!fs::is_directory(root)) {
    throw IoError("dataset root is not a directory: " + root.string());
  }
  DatasetManifest m;
  m.root = root;
  m.num_classes = num_classes;
  std::vector<Candidate> cands =
      layout == DatasetLayout::kFlat ? ScanFlat(root) : ScanCityscapes(root);
  for (const Candidate& c : cands) {
    if (!split.empty() && c.split != split) continue;
    if (c.annotation.empty()) {
      m.skipped.push_back({c.image, "missing annotation"});
      continue;
    }
    try {
      const Image img = ReadImagePng(c.image.string());
      const SegmentationMap ann =
          ReadLabelPng(c.annotation.string(), num_classes);
      if (ann.height() != img.height() || ann.width() != img.width()) {
        m.skipped.push_back({c.annotation, "annotation size differs from image"});
        continue;
      }
      if (img.height() % kDownscaleFactor || img.width() % kDownscaleFactor) {
        m.skipped.push_back({c.image, "dimensions not divisible by 4"});
        continue;
      }
      if (m.entries.empty()) {
        m.height = img.height();
        m.width = img.width();
      } else if (img.height() != m.height || img.width() != m.width) {
        m.skipped.push_back({c.image, "image size differs from dataset"});
        continue;
      }
    } catch (const Error& e) {
      m.skipped.push_back({c.image, e.what()});
      continue;
    }
    m.entries.push_back({c.id, c.image, c.annotation, c.split});
  }
  std::sort(m.entries.begin(), m.entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return std::tie(a.split, a.id) < std::tie(b.split, b.id);
            });
  if (m.entries.empty()) {
    m.notice = "no usable image/annotation pairs under " + root.string();
  }
  return m;
}

LoadedExample LoadEntry(const ManifestEntry& e, int num_classes) {
  return {e.id, ReadImagePng(e.image_path.string()),
          ReadLabelPng(e.annotation_path.string(), num_classes)};
}

}  // namespace spic
