#include <sys/wait.h>

#include <cstdlib>

#include "test_support.hpp"
#include "twistlab/hecke.hpp"
#include "twistlab/tau.hpp"

using namespace twistlab;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(TWISTLAB_CLI_PATH) + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("twistlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("selftest passes") { CHECK(run("selftest") == 0); }

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(run("--out " + dir.string() + " sieve --D 100") == 0);
  CHECK(fs::exists(dir / "sieve.csv"));
  CHECK(fs::exists(dir / "sieve.manifest"));
  // configuration errors
  CHECK(run("--out " + dir.string() + " sieve --D abc") == 1);
  CHECK(run("--out " + dir.string() + " sieve --a 3") == 1);
  CHECK(run("--out " + dir.string() + " moments --D 500 --sigma -1 --a 1 --N0 8") == 1);
  CHECK(run("--out " + dir.string() + " lvalues --forms nosuchcurve") == 1);
  CHECK(run("--bogus-flag sieve") == 1);
  // I/O errors
  CHECK(run("--config " + (dir / "missing.cfg").string() + " sieve") == 3);
  write_file_atomic(dir / "blocker", "x");
  CHECK(run("--out " + (dir / "blocker" / "sub").string() + " sieve --D 100") == 3);
  // capacity: a table file that is far too short
  write_table_file(dir / "short.table", tau_table(100));
  CHECK(run("--out " + dir.string() + " lvalues --D 1000 --forms table:" + (dir / "short.table").string()) == 2);
  // data coverage: curves present, twist data absent
  fs::create_directories(dir / "data");
  fs::copy(data_dir() / "curves", dir / "data" / "curves");
  CHECK(run("--out " + dir.string() + " apps --D 2000", "TWISTLAB_DATA_DIR=" + (dir / "data").string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("manifest reruns reproduce the output") {
  const auto dir = scratch("manifest");
  REQUIRE(run("--out " + dir.string() + " lvalues --D 300 --forms 11a1,delta") == 0);
  const auto first = read_file(dir / "lvalues.csv");
  const auto manifest = read_key_values(dir / "lvalues.manifest");
  CHECK(manifest.at("D") == "300");
  CHECK(manifest.count("threads") == 0);
  fs::copy_file(dir / "lvalues.manifest", dir / "rerun.cfg");
  fs::remove(dir / "lvalues.csv");
  REQUIRE(run("--out " + dir.string() + " --config " + (dir / "rerun.cfg").string() + " lvalues") == 0);
  CHECK(read_file(dir / "lvalues.csv") == first);
  // flags override file values
  REQUIRE(run("--out " + dir.string() + " --config " + (dir / "rerun.cfg").string() + " lvalues --D 200") == 0);
  CHECK(read_key_values(dir / "lvalues.manifest").at("D") == "200");
  fs::remove_all(dir);
}

TEST_CASE("outputs are identical across thread counts") {
  std::map<std::string, std::string> reference;
  for (int threads : {1, 4, 8}) {
    const auto dir = scratch("threads" + std::to_string(threads));
    const std::string base = "--threads " + std::to_string(threads) + " --out " + dir.string();
    REQUIRE(run(base + " lvalues --D 400 --forms delta,11a1") == 0);
    REQUIRE(run(base + " proxy --D 400 --forms delta") == 0);
    for (const auto& name : {"lvalues.csv", "proxy.csv", "tails.csv"}) {
      const auto text = read_file(dir / name);
      if (threads == 1)
        reference[name] = text;
      else
        CHECK_MESSAGE(text == reference[name], name << " differs at " << threads << " threads");
    }
    fs::remove_all(dir);
  }
}
