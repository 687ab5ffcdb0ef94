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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "spic/encoder/external_tool.hpp"
#include "test_util.hpp"

namespace spic {
namespace {

namespace fs = std::filesystem;

// Runs the CLI with stdout to `out_file` (if set); returns the exit status.
int Cli(const std::string& args, const fs::path& out_file = {}) {
  std::string cmd = std::string("\"") + SPIC_CLI + "\" " + args;
  cmd += out_file.empty() ? " > /dev/null" : " > \"" + out_file.string() + "\"";
  cmd += " 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string Q(const fs::path& p) { return "\"" + p.string() + "\""; }

const fs::path kGolden = fs::path(SPIC_TEST_DATA_DIR) / "golden_input.png";

TEST(CliTest, EncodeDecodeReportsSumIdentity) {
  testing::ScratchDir dir("cli_codec");
  const fs::path spic = dir.path() / "a.spic";
  ASSERT_EQ(Cli("encode " + Q(kGolden) + " -o " + Q(spic) + " -q 25",
                dir.path() / "enc.json"),
            0);
  ASSERT_EQ(Cli("decode " + Q(spic) + " -o " + Q(dir.path() / "a.png") +
                    " --method bilinear --ssm-output " +
                    Q(dir.path() / "s.png"),
                dir.path() / "dec.json"),
            0);
  EXPECT_TRUE(fs::exists(dir.path() / "a.png"));
  EXPECT_TRUE(fs::exists(dir.path() / "s.png"));
  for (const char* f : {"enc.json", "dec.json"}) {
    const auto j = nlohmann::json::parse(Slurp(dir.path() / f));
    const double sum = j.at("bpp_ssm").get<double>() +
                       j.at("bpp_coarse").get<double>() +
                       j.at("bpp_header").get<double>();
    EXPECT_NEAR(j.at("bpp_total").get<double>(), sum, 1e-15) << f;
    EXPECT_EQ(j.at("bpp_total").get<double>() * 64 * 128,
              8.0 * static_cast<double>(fs::file_size(spic)));
  }
}

TEST(CliTest, GoldenImageIsByteIdentical) {
  testing::ScratchDir dir("cli_golden");
  const fs::path out = dir.path() / "g.spic";
  ASSERT_EQ(Cli("encode " + Q(kGolden) + " -o " + Q(out) + " -q 30"), 0);
  EXPECT_EQ(Slurp(out),
            Slurp(fs::path(SPIC_TEST_DATA_DIR) / "golden_input.spic"));
}

TEST(CliTest, FailuresExitNonZero) {
  testing::ScratchDir dir("cli_fail");
  const fs::path spic = dir.path() / "a.spic";
  ASSERT_EQ(Cli("encode " + Q(kGolden) + " -o " + Q(spic)), 0);
  std::vector<std::uint8_t> bytes = ReadFileBytes(spic);
  bytes.pop_back();
  const fs::path cut = dir.path() / "cut.spic";
  WriteFileBytes(cut, bytes);
  EXPECT_NE(Cli("decode " + Q(cut) + " -o " + Q(dir.path() / "x.png") +
                " --method bilinear"),
            0);
  EXPECT_FALSE(fs::exists(dir.path() / "x.png"));
  EXPECT_NE(Cli("decode " + Q(kGolden) + " -o " + Q(dir.path() / "y.png") +
                " --method bilinear"),
            0);
  EXPECT_NE(Cli("decode " + Q(spic) + " -o " + Q(dir.path() / "z.png")), 0);
  EXPECT_NE(Cli("encode " + Q(dir.path() / "missing.png") + " -o " +
                Q(dir.path() / "m.spic")),
            0);
  EXPECT_NE(Cli("encode " + Q(kGolden) + " -o " + Q(spic) + " -q 0"), 0);
  EXPECT_NE(Cli("bogus"), 0);
}

TEST(CliTest, TrainSweepPlotDeterministic) {
  testing::ScratchDir dir("cli_sweep");
  const fs::path data = dir.path() / "data";
  ASSERT_EQ(Cli("make-synthetic -o " + Q(data) + " --train 4 --val 2"), 0);
  const fs::path cfg = dir.path() / "tiny.cfg";
  std::ofstream(cfg) << "[denoiser]\nbase_channels = 4\nchannel_mult = 1, 2\n"
                        "num_res_blocks = 1\nattention_levels = 1\n"
                        "norm_groups = 2\nspade_hidden = 4\n"
                        "[train]\nsteps = 3\nbatch_size = 2\n"
                        "crop_height = 16\ncrop_width = 32\n"
                        "[sampler]\nsteps = 2\n"
                        "[sweep]\nqualities = 20, 40\n";
  const fs::path ckpt = dir.path() / "m.ckpt";
  ASSERT_EQ(Cli("train --data " + Q(data) + " --config " + Q(cfg) + " -o " +
                Q(ckpt)),
            0);
  const fs::path a = dir.path() / "a.csv", b = dir.path() / "b.csv";
  const std::string sweep = "sweep --data " + Q(data) + " --config " + Q(cfg) +
                            " --checkpoint " + Q(ckpt) + " -o ";
  ASSERT_EQ(Cli(sweep + Q(a)), 0);
  ASSERT_EQ(Cli(sweep + Q(b)), 0);
  EXPECT_EQ(Slurp(a), Slurp(b));
  EXPECT_FALSE(Slurp(a).empty());
  const fs::path plots = dir.path() / "plots";
  ASSERT_EQ(Cli("plot " + Q(a) + " -o " + Q(plots)), 0);
  EXPECT_TRUE(fs::exists(plots / "miou_vs_bpp.svg"));
  EXPECT_TRUE(fs::exists(plots / "fid_vs_bpp.svg"));
  std::ofstream(dir.path() / "empty.csv") << "";
  EXPECT_NE(Cli("plot " + Q(dir.path() / "empty.csv") + " -o " + Q(plots)), 0);
}

}  // namespace
}  // namespace spic
