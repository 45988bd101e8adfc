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


#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qoverlap/cli/commands.hpp"

namespace {

enum Exit : int { kOk = 0, kFailure = 1, kConfig = 2, kNumerical = 3, kCapacity = 4 };

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "qoverlap: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photonic overlap-estimation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qoverlap::cli::kToolVersion);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format;
  std::optional<unsigned> jobs;

  const std::pair<const char*, const char*> subcommands[] = {
      {"overlap", "Estimate the overlap of two qudit states"},
      {"classify", "Train and test a quantum-kernel SVM"},
      {"spsa", "Online learning of random target states"},
      {"cv-overlap", "Phase-space Monte-Carlo overlap of CV states"},
      {"complexity", "Sample-complexity table"},
      {"calibrate", "Calibrate a simulated chip"},
      {"dataset", "Generate a labelled dataset"},
  };
  for (const auto& [name, help] : subcommands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "64-bit base seed");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--format", format, "Table format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    auto cfg = config_path.empty() ? qoverlap::io::Config() : qoverlap::io::Config::from_file(config_path);
    const auto manifest = qoverlap::cli::run(command, std::move(cfg), {seed, out, format, jobs});
    for (const auto& f : manifest.at("files")) std::cout << f.at("path").get<std::string>() << "\n";
    return kOk;
  } catch (const qoverlap::ConfigError& e) {
    return report("config error", e, kConfig);
  } catch (const qoverlap::ParameterError& e) {
    return report("config error", e, kConfig);
  } catch (const qoverlap::DimensionError& e) {
    return report("config error", e, kConfig);
  } catch (const qoverlap::NumericalError& e) {
    return report("numerical failure", e, kNumerical);
  } catch (const qoverlap::CapacityError& e) {
    return report("capacity exceeded", e, kCapacity);
  } catch (const std::exception& e) {
    return report("error", e, kFailure);
  }
}
