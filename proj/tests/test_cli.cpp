#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcalib/cli.hpp"
#include "tcalib/io.hpp"
#include "tcalib/report.hpp"

using namespace tcalib;
using doctest::Approx;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("tcalib-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const auto p = path / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }
};

}  // namespace

TEST_CASE("tca writes a report with the first dispersion") {
  TempDir dir;
  const std::string out = dir.file("r.json");
  const auto r = run({"tca", "--dataset", "asbestos", "--axes", "2", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("delta = 0.5328") != std::string::npos);
  const auto rep = report::read_report(io::read_file(out));
  REQUIRE(rep.axes.size() == 2);
  CHECK(std::abs(rep.axes[0].value - 0.5328) <= 5e-4);
  CHECK(rep.method == report::Method::tca);
}

TEST_CASE("tca with zero axes") {
  TempDir dir;
  const std::string out = dir.file("r.json");
  const auto r = run({"tca", "--dataset", "asbestos", "--axes", "0", "--out", out});
  CHECK(r.code == 0);
  CHECK(report::read_report(io::read_file(out)).axes.empty());
}

TEST_CASE("reports are byte-identical across runs") {
  TempDir dir;
  const std::string a = dir.file("a.json"), b = dir.file("b.json");
  REQUIRE(run({"tca", "--dataset", "americas", "--out", a}).code == 0);
  REQUIRE(run({"tca", "--dataset", "americas", "--out", b}).code == 0);
  CHECK(io::read_file(a) == io::read_file(b));
}

TEST_CASE("compare prints both contributions") {
  const auto r = run({"compare", "--dataset", "americas", "--axis", "2"});
  REQUIRE(r.code == 0);
  const auto line = r.out.substr(r.out.find("NAFTA"));
  CHECK(line.find("0.821") != std::string::npos);
  CHECK(line.substr(0, line.find('\n')).find("0.10") != std::string::npos);
}

TEST_CASE("files, maps and the remaining subcommands") {
  TempDir dir;
  const std::string csv = dir.file("t.csv", std::string(io::dataset_csv("asbestos")));
  const std::string map = dir.file("m.svg");
  CHECK(run({"tca", csv, "--map", map}).code == 0);
  CHECK(io::read_file(map).find("<svg") != std::string::npos);
  CHECK(run({"ca", csv, "--axes", "2", "--map", map, "--map-axes", "1,2"}).code == 0);
  CHECK(run({"seriate", csv, "--axis", "1"}).out.find("0.1332") != std::string::npos);
  CHECK(run({"tca", csv, "--heuristic"}).code == 0);
  CHECK(run({"tca", csv, "--exact", "--heuristic"}).code == 2);

  const std::string sample = dir.file("s.csv", "value\n0\n0\n0\n4\n");
  const auto d = run({"dispersion", sample});
  CHECK(d.code == 0);
  CHECK(d.out.find("heavyweight element: index 3") != std::string::npos);
  CHECK(run({"dispersion", "--values", "1,2,3,6"}).out.find("d = 1.5") != std::string::npos);

  const std::string json = dir.file("c.json");
  const auto c = run({"cluster", "--dataset", "asbestos", "--r", "2", "--c", "2", "--p", "1", "--residual",
                      "multiplicative", "--out", json});
  CHECK(c.code == 0);
  const auto crep = report::read_report(io::read_file(json));
  CHECK(std::abs(crep.details["objective"].get<double>() - 0.5328) <= 5e-4);
  CHECK(run({"cluster", csv, "--r", "9", "--c", "2", "--p", "1"}).code == 2);

  const std::string cube = dir.file("x.txt", "2 2 2\n1 -1\n-1 1\n-1 1\n1 -1\n");
  const auto t = run({"tensor", cube});
  CHECK(t.code == 0);
  CHECK(t.out.find("delta = 8") != std::string::npos);
}

TEST_CASE("exit codes for bad input") {
  TempDir dir;
  CHECK(run({"tca", "--bogus"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  const auto unknown = run({"tca", "--dataset", "asbestos", "--nope"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("Usage") != std::string::npos);
  CHECK(run({"tca"}).code == 2);
  CHECK(run({"tca", dir.file("missing.csv")}).code == 2);
  CHECK(run({"tca", dir.file("neg.csv", ",a,b\nr,1,-1\ns,2,2\n")}).code == 2);
  CHECK(run({"tensor", dir.file("bad.txt", "2 2\n1 2\n")}).code == 2);
  CHECK(run({"compare", "--dataset", "asbestos"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("solver budget errors exit with 3") {
  TempDir dir;
  std::ostringstream text;
  text << "24 24 1\n";
  for (int i = 0; i < 24; ++i) {
    for (int j = 0; j < 24; ++j) text << (i * 7 + j * 13) % 5 << (j + 1 < 24 ? " " : "\n");
  }
  const std::string big = dir.file("big.txt", text.str());
  CHECK(run({"tensor", big, "--exact"}).code == 3);

  std::ostringstream csv;
  csv << "r";
  for (int j = 0; j < 24; ++j) csv << ",c" << j;
  csv << "\n";
  for (int i = 0; i < 24; ++i) {
    csv << "r" << i;
    for (int j = 0; j < 24; ++j) csv << "," << 1 + (i * 7 + j * 13) % 5;
    csv << "\n";
  }
  const std::string wide = dir.file("wide.csv", csv.str());
  CHECK(run({"tca", wide, "--axes", "1", "--exact"}).code == 3);
  CHECK(run({"tca", wide, "--axes", "1"}).code == 0);
}
