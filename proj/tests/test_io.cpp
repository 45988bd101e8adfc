// Copyright 2026 The qoverlap Authors
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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "qoverlap/io/config.hpp"
#include "qoverlap/io/output.hpp"
#include "qoverlap/parallel.hpp"
#include "qoverlap/seed.hpp"

using namespace qoverlap;
using nlohmann::json;

namespace {
std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qoverlap_io_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}
}  // namespace

TEST(Config, DefaultsAreResolved) {
  io::Config c(json{{"a", 2}});
  EXPECT_EQ(c.get<int>("a", 1), 2);
  EXPECT_EQ(c.get<double>("b", 0.5), 0.5);
  c.finish();
  EXPECT_EQ(c.resolved(), (json{{"a", 2}, {"b", 0.5}}));
}

TEST(Config, UnknownKeyIsRejected) {
  io::Config c(json{{"a", 2}, {"typo", 1}});
  c.get<int>("a", 1);
  try {
    c.finish();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("typo"), std::string::npos);
  }
}

TEST(Config, TypeAndRequiredErrors) {
  io::Config c(json{{"a", "x"}});
  EXPECT_THROW(c.get<int>("a", 1), ConfigError);
  EXPECT_THROW(c.require<int>("missing"), ConfigError);
  EXPECT_THROW(io::Config(json::array()), ConfigError);
  EXPECT_THROW(io::Config::from_file("/nonexistent/qoverlap.json"), ConfigError);
}

TEST(Config, SectionsReportTheirPath) {
  io::Config c(json{{"noise", {{"visibility", 0.9}, {"bogus", 1}}}});
  auto s = c.section("noise");
  EXPECT_EQ(s.get<double>("visibility", 1.0), 0.9);
  try {
    s.finish();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("noise.bogus"), std::string::npos);
  }
  c.adopt("noise", s);
  EXPECT_EQ(c.resolved()["noise"]["visibility"], 0.9);
}

TEST(Config, FileWithComments) {
  const auto dir = scratch("cfg");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c.json") << "{\n  // shots\n  \"n\": 3\n}\n";
  auto c = io::Config::from_file((dir / "c.json").string());
  EXPECT_EQ(c.get<int>("n", 0), 3);
  std::ofstream(dir / "bad.json") << "{ \"n\": }";
  EXPECT_THROW(io::Config::from_file((dir / "bad.json").string()), ConfigError);
}

TEST(Table, CsvAndJson) {
  io::Table t{{"i", "x", "s"}, {}};
  t.add({std::int64_t{1}, 0.1, std::string("a")});
  t.add({std::int64_t{-2}, 1e300, std::string("b")});
  EXPECT_EQ(t.csv(), "i,x,s\n1,0.10000000000000001,a\n-2,1.0000000000000001e+300,b\n");
  EXPECT_EQ(t.json()[1]["i"], -2);
  EXPECT_EQ(t.json()[0]["x"].get<double>(), 0.1);
  EXPECT_THROW(t.add({std::int64_t{1}}), DimensionError);
}

TEST(Output, Fnv1aKnownVectors) {
  EXPECT_EQ(io::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(io::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(io::fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(io::hex64(0xABCULL), "0000000000000abc");
}

TEST(Output, DirectoryRecordsDigests) {
  const auto dir = scratch("out");
  io::OutputDir out(dir);
  out.write("x.txt", "foobar");
  io::Table t{{"a"}, {}};
  t.add({std::int64_t{1}});
  out.write_table("t", t, io::Format::Json);
  EXPECT_EQ(slurp(dir / "x.txt"), "foobar");
  const auto files = out.file_list();
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[0]["fnv1a64"], "85944171f73967e8");
  EXPECT_EQ(files[1]["path"], "t.json");
  EXPECT_EQ(files[1]["fnv1a64"], io::hex64(io::fnv1a64(slurp(dir / "t.json"))));
  EXPECT_THROW(io::format_from_string("xml"), ConfigError);
}

TEST(Seeds, MixProperties) {
  EXPECT_EQ(seed_mix(42), 42u);
  EXPECT_NE(seed_mix(1, 2, 3), seed_mix(1, 3, 2));
  EXPECT_NE(seed_mix(1, 0), seed_mix(1, 0, 0));
  EXPECT_EQ(seed_mix(7, 1, 2), seed_mix(seed_mix(7, 1), 2));
  static_assert(seed_mix(1, 2) == seed_mix(1, 2));
  // splitmix64 reference output for state 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Seeds, NoCollisionsOverAMillionPairs) {
  std::vector<std::uint64_t> v;
  v.reserve(1000000);
  for (std::uint64_t i = 0; i < 1000; ++i)
    for (std::uint64_t j = 0; j < 1000; ++j) v.push_back(seed_mix(12345, i, j));
  std::sort(v.begin(), v.end());
  EXPECT_EQ(std::adjacent_find(v.begin(), v.end()), v.end());
}

TEST(Parallel, ResultsIndependentOfJobs) {
  std::vector<std::uint64_t> a(1000), b(1000);
  parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = seed_mix(3, i); });
  parallel_for(b.size(), 4, [&](std::size_t i) { b[i] = seed_mix(3, i); });
  EXPECT_EQ(a, b);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 5) throw NumericalError("boom");
               }),
               NumericalError);
}
