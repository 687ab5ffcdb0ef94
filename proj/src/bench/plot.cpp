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

#include "spic/bench/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "spic/core/error.hpp"

namespace spic {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b"};

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

void WriteSvg(const std::filesystem::path& path, const std::string& title,
              const std::string& y_label, const std::vector<Curve>& curves,
              double marker_x) {
  const PlotAxes ax = ComputeAxes(curves, marker_x);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    return kLeft + (x - ax.x_min) / (ax.x_max - ax.x_min) * pw;
  };
  auto py = [&](double y) {
    return kTop + ph - (y - ax.y_min) / (ax.y_max - ax.y_min) * ph;
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\""
      << " font-size=\"14\">" << Escape(title) << "</text>\n"
      << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = ax.x_min + (ax.x_max - ax.x_min) * i / 5;
    const double yv = ax.y_min + (ax.y_max - ax.y_min) * i / 5;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << kTop + ph << "\" x2=\""
        << px(xv) << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(xv) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << Fmt(xv) << "</text>\n"
        << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(yv) << "\" x2=\""
        << kLeft << "\" y2=\"" << py(yv) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\">" << Fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">BPP</text>\n"
      << "<text transform=\"translate(18," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << Escape(y_label)
      << "</text>\n";
  // SSM-rate marker.
  char exact[40];
  std::snprintf(exact, sizeof(exact), "%.17g", marker_x);
  out << "<line class=\"ssm-marker\" data-x=\"" << exact << "\" x1=\""
      << px(marker_x) << "\" y1=\"" << kTop << "\" x2=\"" << px(marker_x)
      << "\" y2=\"" << kTop + ph
      << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/>\n"
      << "<text x=\"" << px(marker_x) + 4 << "\" y=\"" << kTop + 14
      << "\" fill=\"gray\">SSM " << Fmt(marker_x) << "</text>\n";
  double legend_y = kTop + 10;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const Curve& c = curves[i];
    const char* color = kColors[i % std::size(kColors)];
    if (c.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" points=\"";
      for (const auto& p : c.points) out << px(p.bpp) << "," << py(p.value) << " ";
      out << "\"/>\n";
    }
    for (const auto& p : c.points) {
      out << "<circle cx=\"" << px(p.bpp) << "\" cy=\"" << py(p.value)
          << "\" r=\"3.5\" fill=\"" << color << "\"/>\n";
    }
    const double lx = kWidth - kRight + 12;
    out << "<rect x=\"" << lx << "\" y=\"" << legend_y - 9
        << "\" width=\"12\" height=\"12\" fill=\""
        << (c.available ? color : "none") << "\" stroke=\"" << color
        << "\"/>\n<text x=\"" << lx + 18 << "\" y=\"" << legend_y + 1 << "\">"
        << Escape(c.method) << (c.available ? "" : " (unavailable)")
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

RdCurves BuildCurves(const std::vector<SweepRow>& rows) {
  struct Acc {
    double bpp = 0, miou = 0;
    int n = 0;
    std::optional<double> fid;
  };
  std::vector<std::string> methods;
  std::map<std::string, std::map<int, Acc>> acc;
  double ssm_sum = 0;
  int ssm_n = 0;
  for (const SweepRow& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (r.status != "ok") continue;
    Acc& a = acc[r.method][r.quality];
    a.bpp += r.rate.total.value();
    a.miou += r.miou;
    ++a.n;
    if (r.fid_batch) a.fid = r.fid_batch;
    if (r.method == kMethodSpic) {
      ssm_sum += r.rate.ssm.value();
      ++ssm_n;
    }
  }
  RdCurves out;
  out.ssm_bpp = ssm_n ? ssm_sum / ssm_n : 0;
  for (const std::string& m : methods) {
    Curve cm{m, {}, acc.count(m) > 0};
    Curve cf = cm;
    if (cm.available) {
      for (const auto& [q, a] : acc[m]) {
        cm.points.push_back({a.bpp / a.n, a.miou / a.n});
        if (a.fid) cf.points.push_back({a.bpp / a.n, *a.fid});
      }
    }
    auto by_bpp = [](const CurvePoint& a, const CurvePoint& b) {
      return a.bpp < b.bpp;
    };
    std::sort(cm.points.begin(), cm.points.end(), by_bpp);
    std::sort(cf.points.begin(), cf.points.end(), by_bpp);
    out.miou.push_back(std::move(cm));
    out.fid.push_back(std::move(cf));
  }
  return out;
}

PlotAxes ComputeAxes(const std::vector<Curve>& curves, double marker_x) {
  double x0 = marker_x, x1 = marker_x;
  double y0 = INFINITY, y1 = -INFINITY;
  for (const Curve& c : curves) {
    for (const auto& p : c.points) {
      x0 = std::min(x0, p.bpp);
      x1 = std::max(x1, p.bpp);
      y0 = std::min(y0, p.value);
      y1 = std::max(y1, p.value);
    }
  }
  if (!std::isfinite(y0)) y0 = 0, y1 = 1;
  x0 = std::min(x0, 0.0);
  auto pad = [](double& lo, double& hi) {
    const double span = hi - lo;
    const double m = span > 0 ? 0.05 * span : std::max(0.05 * std::abs(hi), 0.05);
    lo -= m;
    hi += m;
  };
  pad(x0, x1);
  pad(y0, y1);
  return {x0, x1, y0, y1};
}

std::vector<std::filesystem::path> EmitPlots(
    const std::vector<SweepRow>& rows, const std::filesystem::path& out_dir) {
  SPIC_REQUIRE(!rows.empty(), "plot: sweep CSV has no rows");
  const RdCurves curves = BuildCurves(rows);
  std::filesystem::create_directories(out_dir);
  const auto miou_path = out_dir / "miou_vs_bpp.svg";
  const auto fid_path = out_dir / "fid_vs_bpp.svg";
  WriteSvg(miou_path, "mIoU vs BPP", "mIoU", curves.miou, curves.ssm_bpp);
  WriteSvg(fid_path, "FID vs BPP", "FID", curves.fid, curves.ssm_bpp);
  return {miou_path, fid_path};
}

}  // namespace spic
