// Exit-code and file behavior of the command-line tool. Runs only when ctest
// provides the binary path through EPFLOW_CLI.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

const char* cli_path() { return std::getenv("EPFLOW_CLI"); }

int run_cli(const std::string& args) {
  const std::string cmd = std::string("'") + cli_path() + "' " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "epflow_cli_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cli: good run writes artifacts and exits 0") {
  if (cli_path() == nullptr) return;  // exercised via ctest
  TempDir dir;
  const auto spec = dir.path / "g.mix";
  std::ofstream(spec) << "component = 1.0 0.0 1.0\n";
  const auto out = dir.path / "out";
  const int rc = run_cli("--input '" + spec.string() + "' --order 3 --t-grid list:0.5,1.5 --out '" +
                         out.string() + "'");
  CHECK(rc == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "table.csv"));
  CHECK(fs::exists(out / "curves.csv"));
}

TEST_CASE("cli: corrupted spec file exits 1") {
  if (cli_path() == nullptr) return;
  TempDir dir;
  const auto spec = dir.path / "bad.mix";
  std::ofstream(spec) << "component = 0.5 zero 1.0\n";
  CHECK(run_cli("--input '" + spec.string() + "' --out '" + (dir.path / "o").string() + "'") == 1);

  CHECK(run_cli("--input /nonexistent.mix --out '" + (dir.path / "o2").string() + "'") == 1);
}

TEST_CASE("cli: negative variance names the component and exits 1") {
  if (cli_path() == nullptr) return;
  TempDir dir;
  const auto spec = dir.path / "neg.mix";
  std::ofstream(spec) << "component = 0.5 0 1\ncomponent = 0.5 1 -1\n";
  CHECK(run_cli("--input '" + spec.string() + "' --out '" + (dir.path / "o").string() + "'") == 1);
}

TEST_CASE("cli: orders above 4 require the explicit unlock") {
  if (cli_path() == nullptr) return;
  TempDir dir;
  const auto spec = dir.path / "g.mix";
  std::ofstream(spec) << "component = 1.0 0.0 1.0\n";
  const std::string base =
      "--input '" + spec.string() + "' --t-grid list:1.0 --out '" + (dir.path / "o").string() + "'";
  CHECK(run_cli(base + " --order 5") == 1);
  CHECK(run_cli(base + " --order 5 --allow-high-order") == 0);
  CHECK(run_cli(base + " --order 7 --allow-high-order") == 1);
}

TEST_CASE("cli: bad grid syntax exits 1") {
  if (cli_path() == nullptr) return;
  TempDir dir;
  const auto spec = dir.path / "g.mix";
  std::ofstream(spec) << "component = 1.0 0.0 1.0\n";
  const std::string base = "--input '" + spec.string() + "' --out '" + (dir.path / "o").string() + "'";
  CHECK(run_cli(base + " --t-grid weird:1:2") == 1);
  CHECK(run_cli(base + " --t-grid list:2.0,1.0") == 1);
  CHECK(run_cli(base + " --t-grid log:0:1:2") == 1);
}
