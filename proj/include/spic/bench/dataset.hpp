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

#ifndef SPIC_BENCH_DATASET_HPP_
#define SPIC_BENCH_DATASET_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "spic/core/image.hpp"
#include "spic/core/labels.hpp"

namespace spic {

// kFlat:       <root>/<split>/images/<id>.png + <root>/<split>/labels/<id>.png
// kCityscapes: <root>/leftImg8bit/<split>/<city>/<name>_leftImg8bit.png +
//              <root>/gtFine/<split>/<city>/<name>_gtFine_labelTrainIds.png
//              (falls back to _gtFine_labelIds.png)
enum class DatasetLayout { kFlat, kCityscapes };

DatasetLayout ParseLayout(const std::string& name);

struct ManifestEntry {
  std::string id;
  std::filesystem::path image_path;
  std::filesystem::path annotation_path;
  std::string split;
};

struct SkippedEntry {
  std::filesystem::path path;
  std::string reason;
};

struct DatasetManifest {
  std::filesystem::path root;
  int height = 0;
  int width = 0;
  int num_classes = 0;
  std::vector<ManifestEntry> entries;
  std::vector<SkippedEntry> skipped;
  // Set when nothing usable was found.
  std::string notice;

  std::vector<ManifestEntry> Split(const std::string& split) const;
};

// Scans `root`, validating every pair: the annotation must exist, decode as
// a label map with values < num_classes, and match the image dimensions; all
// images must share one size divisible by the downscale factor. Failing
// pairs are listed in `skipped`. Entries are sorted by (split, id). An empty
// `split` accepts every split.
DatasetManifest Ingest(const std::filesystem::path& root, DatasetLayout layout,
                       int num_classes, const std::string& split = "");

struct LoadedExample {
  std::string id;
  Image image;
  SegmentationMap annotation;
};

LoadedExample LoadEntry(const ManifestEntry& e, int num_classes);

}  // namespace spic

#endif  // SPIC_BENCH_DATASET_HPP_
