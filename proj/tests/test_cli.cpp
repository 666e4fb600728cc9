#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdspin/cli.hpp"
#include "cdspin/experiments.hpp"

namespace fs = std::filesystem;
using cdspin::cli::run;

namespace {

const std::string kDefaultCfg = std::string(CDSPIN_SOURCE_DIR) + "/configs/default.cfg";
const std::string kDataDir = std::string(CDSPIN_SOURCE_DIR) + "/tests/data/";

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("cdspin_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

struct Invocation {
  int code = -1;
  std::string out, err;
};

Invocation call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Invocation r;
  r.code = run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    REQUIRE(it != header.end());
    return static_cast<std::size_t>(it - header.begin());
  }
  std::vector<double> numbers(const std::string& name) const {
    const std::size_t c = col(name);
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(std::stod(r.at(c)));
    return v;
  }
};

Table read_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  Table t;
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  std::getline(in, line);
  t.header = split(line);
  while (std::getline(in, line)) t.rows.push_back(split(line));
  return t;
}

nlohmann::json read_json(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("fields command") {
  TempDir dir;

  SUBCASE("rotated trace agrees with the sweep observable") {
    const auto csv = dir.file("rot.csv");
    const auto r = call({"fields", "--config", kDefaultCfg, "--picture", "rotated", "--tf", "2",
                         "--out", csv});
    REQUIRE(r.code == 0);
    const Table t = read_csv(csv);
    CHECK(t.header.size() == 14);
    CHECK(t.rows.size() == cdspin::kDefaultTracePoints);
    // x columns of the reference drive are left empty here
    CHECK(t.rows.front()[t.col("eps_xL")].empty());

    const double eps = std::max(max_abs(t.numbers("eps_xnL")), max_abs(t.numbers("eps_xnR")));
    const std::vector<double> tf{2.0};
    const auto sweep =
        cdspin::sweep_operation_time(cdspin::DotParams::defaults(), tf);
    CHECK(eps == doctest::Approx(sweep.observable_values[0]).epsilon(1e-12));
    CHECK(read_json(dir.file("rot.json"))["eps_max"].get<double>() ==
          doctest::Approx(eps).epsilon(1e-15));
  }

  SUBCASE("zero drive gives zero fields") {
    const auto csv = dir.file("zero.csv");
    const auto r = call({"fields", "--config", kDataDir + "zero_drive.cfg", "--picture",
                         "reference", "--out", csv});
    REQUIRE(r.code == 0);
    const Table t = read_csv(csv);
    for (auto name : {"uL", "uR", "eps_xL", "eps_xR"}) CHECK(max_abs(t.numbers(name)) == 0.0);
    // Y vanishes, Z sits at the static Zeeman value
    CHECK(max_abs(t.numbers("Y")) == 0.0);
    const auto z = t.numbers("Z");
    CHECK(*std::max_element(z.begin(), z.end()) == *std::min_element(z.begin(), z.end()));
  }

  SUBCASE("output is byte-stable") {
    const std::vector<std::string> base{"fields", "--config", kDefaultCfg, "--picture", "total"};
    auto a = base, b = base;
    a.insert(a.end(), {"--out", dir.file("a.csv")});
    b.insert(b.end(), {"--out", dir.file("b.csv")});
    REQUIRE(call(a).code == 0);
    REQUIRE(call(b).code == 0);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  }

  SUBCASE("summary path override") {
    const auto r = call({"fields", "--out", dir.file("f.csv"), "--summary", dir.file("s.json")});
    REQUIRE(r.code == 0);
    const auto j = read_json(dir.file("s.json"));
    CHECK(j["command"] == "fields");
    CHECK(j["tool"] == cdspin::cli::kToolName);
    CHECK(j["params"]["t_f"].get<double>() == 11.0);
    CHECK(nlohmann::json::parse(r.out)["command"] == "fields");
  }
}

TEST_CASE("evolve command") {
  TempDir dir;
  auto fidelity_of = [&](std::vector<std::string> args) {
    args.insert(args.end(), {"--out", dir.file("ev.csv")});
    const auto r = call(args);
    REQUIRE(r.code == 0);
    return read_json(dir.file("ev.json"))["fidelity"].get<double>();
  };

  CHECK(fidelity_of({"evolve", "--config", kDefaultCfg, "--picture", "reference"}) >= 0.9999);
  CHECK(fidelity_of({"evolve", "--config", kDefaultCfg, "--picture", "reference", "--tf", "2"}) <
        0.9);
  CHECK(fidelity_of({"evolve", "--config", kDefaultCfg, "--picture", "total", "--tf", "2"}) >=
        0.9999);

  const double gamma = 0.05;
  const double f = fidelity_of({"evolve", "--config", kDefaultCfg, "--picture", "rotated",
                                "--tf", "2", "--gamma", "0.05"});
  CHECK(std::abs(f - 0.5 * (1.0 + std::exp(-4.0 * gamma * 2.0))) < 1e-3);

  const Table t = read_csv(dir.file("ev.csv"));
  CHECK(t.header == std::vector<std::string>{"t_ns", "rx", "ry", "rz", "pop1", "norm_drift"});
  CHECK(t.numbers("pop1").back() == doctest::Approx(f).epsilon(1e-15));
  CHECK(max_abs(t.numbers("norm_drift")) < 1e-8);
}

TEST_CASE("sweep command") {
  TempDir dir;

  SUBCASE("operation time") {
    const auto r = call({"sweep", "--kind", "tf", "--range", "0.2:11:25:log", "--out",
                         dir.file("tf.csv")});
    REQUIRE(r.code == 0);
    const auto j = read_json(dir.file("tf.json"));
    CHECK(std::abs(j["slope"].get<double>() + 2.0) <= 0.15);
    const Table t = read_csv(dir.file("tf.csv"));
    CHECK(t.rows.size() == 25);
    CHECK(t.numbers("tf_ns").front() == 0.2);
    CHECK(t.numbers("tf_ns").back() == 11.0);
  }

  SUBCASE("dephasing") {
    const auto r = call({"sweep", "--kind", "gamma", "--range", "0:0.05:6", "--tf-list", "2,4",
                         "--out", dir.file("g.csv")});
    REQUIRE(r.code == 0);
    const Table t = read_csv(dir.file("g.csv"));
    CHECK(t.header == std::vector<std::string>{"tf_ns", "gamma", "fidelity"});
    REQUIRE(t.rows.size() == 12);
    const auto fid = t.numbers("fidelity");
    CHECK(fid[0] >= 0.9999);
    CHECK(fid[6] >= 0.9999);
    // longer runs dephase more at equal gamma
    for (std::size_t i = 1; i < 6; ++i) CHECK(fid[i] > fid[i + 6]);
  }

  SUBCASE("field error") {
    const auto r = call({"sweep", "--kind", "lambda", "--range", "-0.2:0.2:9", "--tf-list", "2",
                         "--out", dir.file("l.csv")});
    REQUIRE(r.code == 0);
    const auto peaks = read_json(dir.file("l.json"))["peaks"];
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0]["lambda"].get<double>() == 0.0);
  }
}

TEST_CASE("exit codes") {
  TempDir dir;
  auto expect_usage = [&](std::vector<std::string> args) {
    const auto out = dir.file("x.csv");
    args.insert(args.end(), {"--out", out});
    const auto r = call(args);
    CHECK(r.code == cdspin::cli::kUsageOrConfig);
    CHECK_FALSE(r.err.empty());
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(dir.file("x.json")));
  };

  expect_usage({"fields", "--config", kDataDir + "missing_key.cfg"});
  expect_usage({"fields", "--set", "bogus=1"});
  expect_usage({"fields", "--set", "J"});
  expect_usage({"fields", "--tf", "-1"});
  expect_usage({"fields", "--picture", "lab"});
  expect_usage({"evolve", "--gamma", "-0.1"});
  expect_usage({"sweep", "--kind", "tf", "--range", "0.2:11"});
  expect_usage({"sweep", "--kind", "tf", "--range", "0:11:5:log"});
  expect_usage({"sweep", "--kind", "tf", "--range", "a:b:c"});
  expect_usage({"sweep", "--kind", "omega"});
  expect_usage({"fields", "--config", dir.file("nowhere.cfg")});

  std::ostringstream out, err;
  CHECK(run(std::vector<std::string>{}, out, err) == cdspin::cli::kUsageOrConfig);
  CHECK(run(std::vector<std::string>{"--version"}, out, err) == cdspin::cli::kOk);
}
