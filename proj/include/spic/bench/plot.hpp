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

#ifndef SPIC_BENCH_PLOT_HPP_
#define SPIC_BENCH_PLOT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "spic/bench/sweep.hpp"

namespace spic {

struct CurvePoint {
  double bpp = 0;
  double value = 0;
};

struct Curve {
  std::string method;
  std::vector<CurvePoint> points;  // sorted by bpp
  bool available = true;           // false: labeled gap, no points
};

struct RdCurves {
  std::vector<Curve> miou;
  std::vector<Curve> fid;
  // Mean bpp_ssm over the spic rows; the SSM-rate marker.
  double ssm_bpp = 0;
};

// Averages ok rows per (method, quality): mean bpp_total, mean mIoU and the
// group's batch FID. Methods with no ok rows become unavailable curves.
RdCurves BuildCurves(const std::vector<SweepRow>& rows);

// Writes miou_vs_bpp.svg and fid_vs_bpp.svg into out_dir and returns their
// paths. Throws InvalidArgument when rows is empty.
std::vector<std::filesystem::path> EmitPlots(
    const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir);

struct PlotAxes {
  double x_min, x_max, y_min, y_max;
};
// Axis ranges covering every point and the marker, with a small margin.
PlotAxes ComputeAxes(const std::vector<Curve>& curves, double marker_x);

}  // namespace spic

#endif  // SPIC_BENCH_PLOT_HPP_
