// Drives the installed binary end to end through std::system.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef MAPALIGN_BIN
#error "MAPALIGN_BIN must point at the mapalign executable"
#endif

namespace {

namespace fs = std::filesystem;

const std::string kBin = MAPALIGN_BIN;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "mapalign_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string run_capture(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const std::string cmd = kBin + " " + args + " >" + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  (void)status;
  std::ifstream in(out);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help exits cleanly and documents the subcommands") {
  CHECK(run("--help") == 0);
  const std::string help = run_capture("--help");
  for (const char* name : {"align", "eval", "synth", "export-kg"}) {
    CHECK(help.find(name) != std::string::npos);
  }
}

TEST_CASE("unknown flags are hard errors") {
  CHECK(run("synth --seed 1 --no-such-flag") == 2);
  CHECK(run("align --bogus") == 2);
}

TEST_CASE("missing input files exit 2 naming the path") {
  const std::string out =
      run_capture("eval --pairs /nonexistent/p.csv --truth /nonexistent/t.csv");
  CHECK(run("eval --pairs /nonexistent/p.csv --truth /nonexistent/t.csv") == 2);
  CHECK(out.find("/nonexistent/p.csv") != std::string::npos);
}

TEST_CASE("synth then align then eval round trip") {
  const fs::path dir = work_dir() / "pipeline";
  fs::remove_all(dir);
  REQUIRE(run("synth --seed 42 --rotation 37 --scale 1.8 --label-keep 0.4 --out-dir " +
              dir.string()) == 0);
  CHECK(fs::exists(dir / "map_a.geojson"));
  CHECK(fs::exists(dir / "map_b.geojson"));
  CHECK(fs::exists(dir / "truth.csv"));

  REQUIRE(run("align --map-a " + (dir / "map_a.geojson").string() + " --map-b " +
              (dir / "map_b.geojson").string() + " --out " + (dir / "pairs.csv").string()) ==
          0);
  CHECK(fs::exists(dir / "pairs.csv"));
  CHECK(fs::exists(dir / "pairs.trace.json"));
  CHECK(slurp(dir / "pairs.trace.json").find("rubber_sheeted") != std::string::npos);

  const std::string table =
      run_capture("eval --pairs " + (dir / "pairs.csv").string() + " --truth " +
                  (dir / "truth.csv").string());
  CHECK(table.find("1.0000") != std::string::npos);
}

TEST_CASE("eval prints the worked example to four decimals") {
  const fs::path dir = work_dir();
  {
    std::ofstream pairs(dir / "we_pairs.csv");
    pairs << "id_a,id_b,provenance,metric,score\na,b,dist,HDV,1\nc,d,dist,HDV,1\ne,f,dist,"
             "HDV,1\n";
    std::ofstream truth(dir / "we_truth.csv");
    truth << "id_a,id_b\na,b\nc,d\ng,h\ni,j\n";
  }
  const std::string out = run_capture("eval --pairs " + (dir / "we_pairs.csv").string() +
                                      " --truth " + (dir / "we_truth.csv").string());
  CHECK(out.find("0.6667") != std::string::npos);
  CHECK(out.find("0.5000") != std::string::npos);
  CHECK(out.find("0.5714") != std::string::npos);
}

TEST_CASE("empty pairs evaluate to flagged zeros") {
  const fs::path dir = work_dir();
  {
    std::ofstream pairs(dir / "empty_pairs.csv");
    pairs << "id_a,id_b,provenance,metric,score\n";
    std::ofstream truth(dir / "empty_truth.csv");
    truth << "id_a,id_b\na,b\n";
  }
  const std::string out = run_capture("eval --pairs " + (dir / "empty_pairs.csv").string() +
                                      " --truth " + (dir / "empty_truth.csv").string());
  CHECK(out.find("0.0000") != std::string::npos);
  CHECK(out.find("no identified pairs") != std::string::npos);
}

TEST_CASE("synth is byte-deterministic per seed") {
  const fs::path d1 = work_dir() / "det1";
  const fs::path d2 = work_dir() / "det2";
  fs::remove_all(d1);
  fs::remove_all(d2);
  const std::string knobs = " --rotation 12 --scale 0.8 --jitter 1.0 --label-keep 0.5 "
                            "--drop 0.1 --rows 3 --cols 4 --points 7";
  REQUIRE(run("synth --seed 99" + knobs + " --out-dir " + d1.string()) == 0);
  REQUIRE(run("synth --seed 99" + knobs + " --out-dir " + d2.string()) == 0);
  for (const char* name : {"map_a.geojson", "map_b.geojson", "truth.csv"}) {
    CHECK(slurp(d1 / name) == slurp(d2 / name));
  }
}

TEST_CASE("export of empty pairs yields an empty triples file") {
  const fs::path dir = work_dir() / "kg";
  fs::remove_all(dir);
  REQUIRE(run("synth --seed 5 --out-dir " + dir.string()) == 0);
  {
    std::ofstream pairs(dir / "empty.csv");
    pairs << "id_a,id_b,provenance,metric,score\n";
  }
  REQUIRE(run("export-kg --pairs " + (dir / "empty.csv").string() + " --map-a " +
              (dir / "map_a.geojson").string() + " --map-b " +
              (dir / "map_b.geojson").string() + " --out " + (dir / "empty.nt").string()) ==
          0);
  CHECK(slurp(dir / "empty.nt").empty());
}

TEST_CASE("topo classifier on unlabeled maps exits 0 with an empty-seed trace") {
  const fs::path dir = work_dir() / "topo_empty";
  fs::remove_all(dir);
  REQUIRE(run("synth --seed 4 --label-keep 0 --out-dir " + dir.string()) == 0);
  REQUIRE(run("align --classifier topo --map-a " + (dir / "map_a.geojson").string() +
              " --map-b " + (dir / "map_b.geojson").string() + " --out " +
              (dir / "pairs.csv").string()) == 0);
  CHECK(slurp(dir / "pairs.csv") == "id_a,id_b,provenance,metric,score\n");
  CHECK(slurp(dir / "pairs.trace.json").find("empty text seed") != std::string::npos);
}

TEST_CASE("config file settings are honored and unknown keys rejected") {
  const fs::path dir = work_dir() / "config";
  fs::remove_all(dir);
  REQUIRE(run("synth --seed 6 --rotation 20 --scale 1.2 --out-dir " + dir.string()) == 0);
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"classifier": "dist", "metric": "EDC", "angle_limit": 30.0})";
    std::ofstream bad(dir / "bad.json");
    bad << R"({"classifzzz": "dist"})";
  }
  REQUIRE(run("align --config " + (dir / "run.json").string() + " --map-a " +
              (dir / "map_a.geojson").string() + " --map-b " +
              (dir / "map_b.geojson").string() + " --out " + (dir / "pairs.csv").string()) ==
          0);
  const std::string trace = slurp(dir / "pairs.trace.json");
  CHECK(trace.find("\"classifier_requested\": \"dist\"") != std::string::npos);
  CHECK(trace.find("\"metric\": \"EDC\"") != std::string::npos);
  CHECK(run("align --config " + (dir / "bad.json").string() + " --map-a " +
            (dir / "map_a.geojson").string() + " --map-b " +
            (dir / "map_b.geojson").string()) == 2);
}

}  // TEST_SUITE
