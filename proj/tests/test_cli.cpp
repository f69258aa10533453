// Copyright 2026 the spdmboot authors
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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "spdmboot/boot.hpp"
#include "spdmboot/cli.hpp"
#include "spdmboot/efi_store.hpp"
#include "spdmboot/platform.hpp"

using namespace spdmboot;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliResult invoke(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"spdmboot"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  CliResult result;
  result.exit_code =
      cli_run(static_cast<int>(argv.size()), argv.data(), out, err);
  result.out = out.str();
  result.err = err.str();
  return result;
}

// Unique scratch directory, removed when the guard dies.
struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() /
           ("spdmboot_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("help exits zero and lists every subcommand") {
  auto r = invoke({"--help"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("provision") != std::string::npos);
  CHECK(r.out.find("run") != std::string::npos);
  CHECK(r.out.find("scenario") != std::string::npos);
  CHECK(r.out.find("report") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("missing or unknown subcommands are usage errors") {
  CHECK(invoke({}).exit_code == 64);
  CHECK(invoke({"frobnicate"}).exit_code == 64);
  CHECK(invoke({"frobnicate"}).err.find("usage error") != std::string::npos);
}

TEST_CASE("scenario id is validated against the known range") {
  CHECK(invoke({"scenario", "0"}).exit_code == 64);
  CHECK(invoke({"scenario", "5"}).exit_code == 64);
  CHECK(invoke({"scenario"}).exit_code == 64);  // id is required
  CHECK(invoke({"scenario", "quux"}).exit_code == 64);
}

TEST_CASE("scenario 2 exits with the integrity code and verbatim diagnostic") {
  auto r = invoke({"scenario", "2", "--seed", "7"});
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("result: HaltedIntegrity") != std::string::npos);
  CHECK(r.err.find(kHaltIntegrity) != std::string::npos);
}

TEST_CASE("scenario 3 exits with the authenticity code and verbatim diagnostic") {
  auto r = invoke({"scenario", "3", "--seed", "7"});
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("result: HaltedAuthenticity") != std::string::npos);
  CHECK(r.err.find(kHaltAuthenticity) != std::string::npos);
}

TEST_CASE("run without spdm boots clean and says so in the report") {
  auto r = invoke({"run", "--no-spdm", "--seed", "9"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("spdm: 0") != std::string::npos);
  CHECK(r.out.find("result: Booted") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("report flag writes the boot report to a file instead of stdout") {
  TempDir dir;
  const fs::path report = dir.path / "report.txt";
  auto r = invoke({"scenario", "2", "--seed", "7", "--report", report.string()});
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  const std::string text = slurp(report);
  CHECK(text.find("# boot report") == 0);
  CHECK(text.find("result: HaltedIntegrity") != std::string::npos);
}

TEST_CASE("provision writes a loadable store, topology, and code image") {
  TempDir dir;
  auto r = invoke({"provision", "--seed", "5", "--out", dir.path.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("wrote") != std::string::npos);

  auto store = deserialize_store(slurp(dir.path / "variables.txt"));
  REQUIRE(store.ok());
  CHECK(store.value().get(platform_guid(), var::kExpectedHcrtm) != nullptr);

  auto topo = parse_topology(slurp(dir.path / "topology.txt"));
  REQUIRE(topo.ok());
  CHECK(topo.value() == default_topology());

  CHECK(fs::file_size(dir.path / "code.bin") == 1024);
}

TEST_CASE("provision creates the output directory when missing") {
  TempDir dir;
  const fs::path nested = dir.path / "a" / "b";
  auto r = invoke({"provision", "--seed", "5", "--out", nested.string()});
  REQUIRE(r.exit_code == 0);
  CHECK(fs::file_size(nested / "code.bin") == 1024);
}

TEST_CASE("topology problems surface as usage errors") {
  auto missing = invoke({"run", "--topology", "/nonexistent/topo.txt"});
  CHECK(missing.exit_code == 64);
  CHECK(missing.err.find("topology error") != std::string::npos);

  TempDir dir;
  const fs::path bad = dir.path / "bad.txt";
  std::ofstream(bad) << "topology_version: 9\n";
  auto malformed = invoke({"run", "--topology", bad.string()});
  CHECK(malformed.exit_code == 64);
}

TEST_CASE("run honors a custom topology file") {
  TempDir dir;
  Topology topo;
  topo.devices.push_back({"onlydisk", BusKind::kPcie, DeviceClass::kNvmeStorage,
                          true, false});
  const fs::path path = dir.path / "topo.txt";
  std::ofstream(path) << serialize_topology(topo);
  auto r = invoke({"run", "--seed", "11", "--topology", path.string()});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("boot_device: onlydisk") != std::string::npos);
}

TEST_CASE("report command renders the overhead comparison") {
  auto r = invoke({"report", "--runs", "1", "--seed", "41", "--scenario", "2"});
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("# overhead report") == 0);
  CHECK(r.out.find("runs: 1 with spdm, 1 without") != std::string::npos);
  CHECK(r.out.find("simulated_steps") != std::string::npos);
  CHECK(r.out.find("outliers_removed:") != std::string::npos);
  CHECK(invoke({"report", "--runs", "0"}).exit_code == 64);
}
