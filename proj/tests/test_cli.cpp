// Copyright 2026 The cqlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cqlab/cli.hpp"
#include "cqlab/inequalities.hpp"
#include "cqlab/io.hpp"
#include "cqlab/presets.hpp"

namespace cqlab {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("cqlab-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ChannelFileRoundTrip) {
  CounterRng rng(1, 0);
  std::vector<CqChannel::Input> in;
  for (int k = 0; k < 3; ++k) in.push_back({"s" + std::to_string(k), DensityMatrix(sample_density(3, rng))});
  ChannelFile f{CqChannel(std::move(in)), std::vector<double>{0.0, 0.5, 1.25}, 0.4};
  save_channel_file(f, path("ch.json"));
  const auto back = load_channel_file(path("ch.json"));
  ASSERT_EQ(back.channel.size(), 3);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(back.channel.label(k), f.channel.label(k));
    EXPECT_LE((back.channel.state(k) - f.channel.state(k)).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_EQ(back.costs, f.costs);
  EXPECT_EQ(back.budget, f.budget);
}

TEST_F(CliTest, MalformedChannelFilesRejected) {
  const Json dup = Json::parse(R"({"dim":1,"inputs":[{"label":"a","state":[[1]]},{"label":"a","state":[[1]]}]})");
  EXPECT_THROW(channel_file_from_json(dup), InputError);
  std::ofstream(path("bad.json")) << "{not json";
  const auto r = run({"capacity", path("bad.json")});
  EXPECT_EQ(r.code, 2);
  std::ofstream(path("dup.json")) << dup.dump();
  EXPECT_EQ(run({"capacity", path("dup.json")}).code, 2);
}

TEST_F(CliTest, CapacityOfPresets) {
  const auto r = run({"capacity", "--preset", "orthogonal-pure"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0.693147"), std::string::npos);
  ASSERT_EQ(run({"preset", "bsc:0.11", "-o", path("bsc.json")}).code, 0);
  const auto file = run({"capacity", path("bsc.json"), "--report", path("rec.json")});
  EXPECT_EQ(file.code, 0) << file.err;
  const auto rec = RunRecord::from_json(read_json_file(path("rec.json")));
  EXPECT_NEAR(rec.outputs.at("capacity_nats").get<double>(), std::log(2.0) - binary_entropy(0.11), 1e-6);
}

TEST_F(CliTest, PresetListing) {
  const auto r = run({"preset", "--list"});
  EXPECT_EQ(r.code, 0);
  for (const auto& name : preset_names()) EXPECT_NE(r.out.find(name), std::string::npos);
  EXPECT_EQ(run({"preset", "no-such-channel"}).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"sweep", "--preset", "trine"}).code, 2);
  EXPECT_EQ(run({"simulate", "--preset", "trine", "--n", "2", "--N", "2", "--a", "0", "--decoder", "x"}).code, 2);
}

TEST_F(CliTest, ResourceBoundExitCode) {
  const auto r = run({"sweep", "--preset", "bsc", "--n-range", "13", "--a-range", "0.1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("resource"), std::string::npos);
}

TEST_F(CliTest, SweepCsv) {
  const auto r = run({"sweep", "--preset", "bsc:0.2", "--n-range", "1:3", "--a-range", "0:0.6:4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("kind,n,threshold,tail\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 3 * 4);
  EXPECT_NE(r.err.find("finite-n bracket - not the limit"), std::string::npos);
  const auto to_file = run({"sweep", "--preset", "bsc:0.2", "--n-range", "2", "--a-range", "0.1,0.2", "--csv",
                            path("tails.csv")});
  EXPECT_EQ(to_file.code, 0);
  std::ifstream in(path("tails.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "kind,n,threshold,tail");
}

TEST_F(CliTest, VerifyExitCodes) {
  const auto ok = run({"verify", "--suite", "lemma2", "--count", "50", "--adversarial", "7", "--dims", "2:3",
                       "--witness-dir", path("w")});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto bad = run({"verify", "--suite", "lemma2", "--count", "50", "--dims", "2:3", "--inject-fault", "0.1",
                        "--witness-dir", path("w")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(fs::is_empty(path("w")));
  const auto empty = run({"verify", "--count", "0"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_NE((empty.out + empty.err).find("no instances requested; passing vacuously"), std::string::npos);
}

TEST_F(CliTest, SeedDeterminesOutputs) {
  const std::vector<std::string> base = {"simulate", "--preset", "bsc:0.1", "--n", "3", "--N", "2",
                                         "--a", "0.1", "--trials", "20"};
  auto with = [&](const std::string& seed, const std::string& threads, const std::string& report) {
    auto args = base;
    for (const auto& s : {std::string("--seed"), seed, std::string("--threads"), threads, std::string("--report"),
                          report})
      args.push_back(s);
    return run(args);
  };
  with("5", "1", path("a.json"));
  with("5", "3", path("b.json"));
  with("6", "1", path("c.json"));
  const auto a = RunRecord::from_json(read_json_file(path("a.json")));
  const auto b = RunRecord::from_json(read_json_file(path("b.json")));
  const auto c = RunRecord::from_json(read_json_file(path("c.json")));
  EXPECT_EQ(a.outputs.dump(), b.outputs.dump());
  EXPECT_NE(a.outputs.dump(), c.outputs.dump());
}

TEST_F(CliTest, ReplayIsIdentical) {
  ASSERT_EQ(run({"exponent", "--preset", "trine", "--a-range", "0:0.6:4", "--report", path("e.json"), "--csv",
                 path("e.csv")})
                .code,
            0);
  const auto r = run({"replay", path("e.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("replay identical"), std::string::npos);
  Json tampered = read_json_file(path("e.json"));
  tampered["outputs"]["values"][0] = 123.0;
  write_json_file(tampered, path("t.json"));
  EXPECT_EQ(run({"replay", path("t.json")}).code, 1);
}

TEST_F(CliTest, SimulateTrialCsv) {
  const auto r = run({"simulate", "--preset", "orthogonal-pure", "--n", "2", "--N", "2", "--a", "0.5", "--trials",
                      "7", "--csv", path("trials.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("bound table"), std::string::npos);
  std::ifstream in(path("trials.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,error");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 7);
}

TEST_F(CliTest, ExponentCsv) {
  const auto phi = run({"exponent", "--preset", "bsc", "--a-range", "0.1,0.3"});
  EXPECT_EQ(phi.code, 0) << phi.err;
  EXPECT_EQ(phi.out.rfind("a,phi_bar,t_star\n", 0), 0u);
  const auto psi = run({"exponent", "--preset", "bsc", "--s-range", "0:1:3"});
  EXPECT_EQ(psi.code, 0) << psi.err;
  EXPECT_EQ(psi.out.rfind("s,psi,lambda\n", 0), 0u);
}

}  // namespace
}  // namespace cqlab
