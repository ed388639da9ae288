#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "energyopt/cli/app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace energyopt;

namespace {

const fs::path kData = ENERGYOPT_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("energyopt_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

struct Outcome {
  int code;
  std::string err;
};

Outcome run(const std::string& command, const fs::path& config, const fs::path& out,
            std::optional<std::uint64_t> seed = std::nullopt) {
  cli::Options o;
  o.command = command;
  o.config_path = config.string();
  o.out_dir = out.string();
  o.seed = seed;
  std::ostringstream log, err;
  return {cli::run(o, log, err), err.str()};
}

// Copies the bundled CSVs next to an edited copy of the bundled config.
fs::path edited_config(const fs::path& dir, const std::function<void(json&)>& edit) {
  for (const auto& e : fs::directory_iterator(kData)) {
    if (e.path().extension() == ".csv") fs::copy_file(e.path(), dir / e.path().filename());
  }
  auto cfg = json::parse(slurp(kData / "config.json"));
  edit(cfg);
  std::ofstream(dir / "config.json") << cfg.dump(2);
  return dir / "config.json";
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

TEST_CASE("fnv1a matches the published 64-bit test vectors") {
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(cli::fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("pareto and chp are byte-identical across runs and the manifest hashes what was written") {
  Scratch s("determinism");
  for (const std::string cmd : {"pareto", "chp"}) {
    const auto a = s.dir / (cmd + "_a"), b = s.dir / (cmd + "_b");
    REQUIRE(run(cmd, kData / "config.json", a).code == 0);
    REQUIRE(run(cmd, kData / "config.json", b).code == 0);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
      CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
      ++files;
    }
    const auto manifest = json::parse(slurp(a / "manifest.json"));
    CHECK(manifest["command"] == cmd);
    CHECK(manifest["config"]["fnv1a"] == hex(cli::fnv1a(slurp(kData / "config.json"))));
    CHECK(manifest["outputs"].size() + 1 == files);
    for (const auto& o : manifest["outputs"]) {
      CHECK(o["fnv1a"] == hex(cli::fnv1a(slurp(a / o["file"].get<std::string>()))));
    }
    for (const auto& in : manifest["inputs"]) {
      CHECK(in["fnv1a"] == hex(cli::fnv1a(slurp(kData / in["path"].get<std::string>()))));
    }
  }
}

TEST_CASE("pareto front is exactly the non-dominated subset of the points") {
  Scratch s("pareto");
  REQUIRE(run("pareto", kData / "config.json", s.dir / "out").code == 0);
  const auto points = json::parse(slurp(s.dir / "out" / "pareto_points.json"));
  const auto front = json::parse(slurp(s.dir / "out" / "pareto_front.json"));
  REQUIRE(points.size() >= 2);
  REQUIRE(!front.empty());
  const auto dominates = [](const json& a, const json& b) {
    const double ac = a["cost"], bc = b["cost"], ae = a["carbon"], be = b["carbon"];
    const double af = a["comfort_criterion"], bf = b["comfort_criterion"];
    return ac <= bc && ae <= be && af >= bf && (ac < bc || ae < be || af > bf);
  };
  std::set<std::size_t> on_front;
  for (const auto& f : front) on_front.insert(f["index"].get<std::size_t>());
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (const auto& q : points) dominated = dominated || dominates(q, points[i]);
    if (on_front.count(i)) {
      CHECK_FALSE(dominated);
    } else {
      // Off the front: dominated, or a duplicate of an earlier front point.
      bool duplicate = false;
      for (auto j : on_front) {
        duplicate = duplicate || (j < i && points[j]["cost"] == points[i]["cost"] &&
                                  points[j]["carbon"] == points[i]["carbon"] &&
                                  points[j]["comfort_criterion"] == points[i]["comfort_criterion"]);
      }
      CHECK((dominated || duplicate));
    }
  }
}

TEST_CASE("config errors exit 2 with one coded line and write nothing") {
  Scratch s("errors");
  const auto missing = edited_config(s.dir, [](json& c) { c["chp"]["scenario"] = "absent.csv"; });
  auto r = run("chp", missing, s.dir / "out");
  CHECK(r.code == 2);
  CHECK(r.err.rfind("E_CONFIG: ", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  CHECK_FALSE(fs::exists(s.dir / "out"));

  std::ofstream(s.dir / "config.json") << "{ \"chp\": ";
  r = run("chp", s.dir / "config.json", s.dir / "out");
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(s.dir / "out"));

  r = run("forecast", s.dir / "absent.json", s.dir / "out");
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(s.dir / "out"));
}

TEST_CASE("unknown keys are rejected after the command has read its section") {
  Scratch s("unknown");
  const auto cfg = edited_config(s.dir, [](json& c) { c["ems"]["battery"]["capacty"] = 10; });
  auto r = run("ems", cfg, s.dir / "out");
  CHECK(r.code == 2);
  CHECK(r.err.find("config.ems.battery.capacty") != std::string::npos);
  CHECK_FALSE(fs::exists(s.dir / "out"));
  // Other commands do not look inside the ems section.
  CHECK(run("fit-building", cfg, s.dir / "out").code == 0);

  Scratch t("unknown_top");
  const auto top = edited_config(t.dir, [](json& c) { c["extra"] = true; });
  CHECK(run("fit-building", top, t.dir / "out").code == 2);
}

TEST_CASE("infeasible and solver-limit failures map to exit codes 3 and 4") {
  Scratch s("exit_codes");
  // Heat demand far beyond every heat source.
  const auto infeasible = edited_config(s.dir, [](json& c) {
    c["chp"]["boiler"]["heat_capacity"] = 1.0;
    c["chp"].erase("store");
  });
  auto r = run("chp", infeasible, s.dir / "out");
  CHECK(r.code == 3);
  CHECK(r.err.rfind("E_INFEASIBLE: ", 0) == 0);
  CHECK_FALSE(fs::exists(s.dir / "out"));

  Scratch t("limit");
  const auto limited = edited_config(t.dir, [](json& c) { c["solver"]["max_lp_iterations"] = 5; });
  r = run("ems", limited, t.dir / "out");
  CHECK(r.code == 4);
  CHECK(r.err.rfind("E_SOLVER_LIMIT: ", 0) == 0);
  CHECK_FALSE(fs::exists(t.dir / "out"));
}

TEST_CASE("synth is a function of the seed, and --seed reaches the rolling MPC noise") {
  Scratch s("synth");
  cli::Options o;
  o.command = "synth";
  std::ostringstream log, err;
  for (const auto& [dir, seed] : {std::pair{"a", 5}, {"b", 5}, {"c", 6}}) {
    o.out_dir = (s.dir / dir).string();
    o.seed = seed;
    REQUIRE(cli::run(o, log, err) == 0);
  }
  for (const auto& e : fs::directory_iterator(s.dir / "a")) {
    CHECK(slurp(e.path()) == slurp(s.dir / "b" / e.path().filename()));
  }
  CHECK(slurp(s.dir / "a" / "meters.csv") != slurp(s.dir / "c" / "meters.csv"));
  CHECK(fs::exists(s.dir / "a" / "config.json"));

  REQUIRE(run("mpc", kData / "config.json", s.dir / "m1", 11).code == 0);
  REQUIRE(run("mpc", kData / "config.json", s.dir / "m2", 12).code == 0);
  CHECK(slurp(s.dir / "m1" / "mpc_schedule.csv") != slurp(s.dir / "m2" / "mpc_schedule.csv"));
}
