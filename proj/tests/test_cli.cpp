#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "klcells/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "klcells");
  std::ostringstream out, err;
  const int code = klcells::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("klcells-cli-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("cells") {
    const auto r = run({"cells", "--type", "I2:4", "--weights", "s=1,t=1", "--side", "left"});
    REQUIRE(r.code == klcells::cli::kOk);
    const auto j = r.json();
    CHECK(j["schema"] == "klcells/1");
    CHECK(j["partition"]["blocks"].size() == 4);
    CHECK(j["cell_count"] == 4);
    // Deterministic output.
    CHECK(run({"cells", "--type", "I2:4", "--weights", "s=1,t=1", "--side", "left"}).out == r.out);
    // Generator names are accepted in place of class names.
    const auto b3 = run({"cells", "--type", "B3", "--weights", "t=2,s1=1", "--format", "text"});
    CHECK(b3.code == 0);
    CHECK(b3.out.find("L cells at Pos((1,2))") == 0);
    const auto flag = run({"cells", "--type", "B2", "--flag", "1,1;0,1", "--side", "two-sided"});
    CHECK(flag.code == 0);
    CHECK(flag.json()["parameter"]["flag"].size() == 2);
  }

  TEST_CASE("group and facets") {
    const auto g = run({"group", "--type", "B3"});
    REQUIRE(g.code == 0);
    CHECK(g.json()["order"] == 48);
    CHECK(g.json()["conjugacy_classes"] == 10);
    const auto f = run({"facets", "--type", "B2", "--elements", "s,t,t-s,t+s", "--symmetrize"});
    REQUIRE(f.code == 0);
    CHECK(f.json()["facet_count"] == 17);
  }

  TEST_CASE("custom matrix file") {
    const auto dir = scratch_dir("matrix");
    std::filesystem::create_directories(dir);
    const auto file = dir / "a2.json";
    std::ofstream(file) << R"({"generators": ["a", "b"], "matrix": [[1, 3], [3, 1]]})";
    const auto r = run({"group", "--matrix", file.string()});
    REQUIRE(r.code == 0);
    CHECK(r.json()["order"] == 6);
    CHECK(r.json()["group"] == "custom");
    std::ofstream(file) << "not json";
    CHECK(run({"group", "--matrix", file.string()}).code == klcells::cli::kUsage);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("checks") {
    const auto scan = run({"scan", "--type", "B3", "--max-denominator", "3"});
    REQUIRE(scan.code == 0);
    CHECK(scan.json()["walls"] == nlohmann::json::array({"1", "2"}));
    const auto va = run({"verify-a", "--type", "I2:4", "--elements", "s,t,t-s,t+s", "--symmetrize", "--side", "L"});
    CHECK(va.code == 0);
    CHECK(va.json()["facets"].size() == 17);
    const auto vb = run({"verify-bminus", "--type", "I2:4", "--elements", "s,t,t-s,t+s", "--symmetrize"});
    CHECK(vb.code == 0);
    const auto inv = run({"invariances", "--type", "I2:4", "--samples", "3", "--seed", "5"});
    CHECK(inv.code == 0);
    CHECK(inv.json()["checks"].size() == 6);
  }

  TEST_CASE("cache administration") {
    const auto dir = scratch_dir("cache");
    const auto d = dir.string();
    const auto clear = run({"cache", "clear", "--cache-dir", d});
    REQUIRE(clear.code == 0);
    CHECK(clear.json()["removed"] == 0);
    const auto warm = run({"cache", "warm", "--cache-dir", d, "--type", "B3", "--weights", "s=1,t=1"});
    REQUIRE(warm.code == 0);
    CHECK(warm.json()["warmed"][0]["hit"] == false);
    CHECK(run({"cache", "warm", "--cache-dir", d, "--type", "B3", "--weights", "s=1,t=1"}).json()["warmed"][0]["hit"] ==
          true);
    const auto stat = run({"cache", "stat", "--cache-dir", d});
    REQUIRE(stat.code == 0);
    CHECK(stat.json()["entries"].size() == 1);
    // A cached table gives the same cells as a fresh computation.
    CHECK(run({"cells", "--type", "B3", "--cache-dir", d}).out == run({"cells", "--type", "B3"}).out);
    CHECK(run({"cache", "clear", "--cache-dir", d}).json()["removed"] == 1);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("usage errors") {
    using klcells::cli::kUsage;
    CHECK(run({}).code == kUsage);
    CHECK(run({"bogus"}).code == kUsage);
    CHECK(run({"cells"}).code == kUsage);
    CHECK(run({"cells", "--type", "Z9"}).code == kUsage);
    CHECK(run({"cells", "--type", "B3", "--weights", "s=1"}).code == kUsage);
    CHECK(run({"cells", "--type", "B3", "--weights", "s=1,q=2"}).code == kUsage);
    CHECK(run({"cells", "--type", "B3", "--weights", "s=1,t=x"}).code == kUsage);
    CHECK(run({"cells", "--type", "B3", "--flag", "1,2,3"}).code == kUsage);
    CHECK(run({"cells", "--type", "F4", "--element-cap", "10"}).code == kUsage);
    CHECK(run({"facets", "--type", "B2", "--elements", "s,t"}).code == kUsage);
    CHECK(run({"scan", "--type", "A3"}).code == kUsage);
    CHECK(run({"cache", "stat"}).code == kUsage);
    CHECK(run({"cells", "--type", "B3", "--jobs", "0"}).code == kUsage);
    const auto e = run({"cells", "--type", "B3", "--weights", "s=1"});
    CHECK(e.err.find("missing class t") != std::string::npos);
    CHECK(e.out.empty());
  }

  TEST_CASE("worker count and element cap do not change results") {
    const auto a = run({"cells", "--type", "B3", "--weights", "s=2,t=1", "--side", "R"});
    const auto b = run({"cells", "--type", "B3", "--weights", "s=2,t=1", "--side", "R", "--jobs", "3",
                        "--element-cap", "100000"});
    CHECK(a.out == b.out);
  }
}
