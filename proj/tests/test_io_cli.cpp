#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracstep/cli.hpp"
#include "fracstep/format.hpp"
#include "fracstep/io.hpp"
#include "fracstep/repro.hpp"

using namespace fracstep;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kSystem = std::string(FRACSTEP_DATA_DIR) + "/example_system.json";

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fracstep_test_" + name);
}

}  // namespace

TEST_CASE("number formatting uses 15 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-20) == "1e-20");
}

TEST_CASE("system definition round-trips through JSON") {
  auto def = example_system_definition();
  auto back = parse_system_definition(to_json(def));
  CHECK(back.variables == def.variables);
  CHECK(back.equations == def.equations);
  auto file = load_system_definition(kSystem);
  CHECK(file.variables == def.variables);
  CHECK(file.equations == def.equations);
}

TEST_CASE("malformed system definitions") {
  for (const char* text : {"", "[]", "{\"variables\": [\"x\"]}", "{\"variables\": 3, \"equations\": []}",
                           "{\"variables\": [], \"equations\": [\"1\"]}"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_system_definition(text), Error);
  }
  CHECK_THROWS_AS(load_system_definition("/nonexistent/system.json"), Error);
}

TEST_CASE("solve single-step prints the admissible root") {
  auto r = run({"solve", "--expr", "x^2+3*x+1", "--x0", "0.5", "--mode", "single-step"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("|Z|=0.881966011250105 admissible candidate=-0.381966011250105") !=
        std::string::npos);
  CHECK(r.out.find("x*=-0.381966011250105") != std::string::npos);
}

TEST_CASE("solve with no admissible root exits 3") {
  auto r = run({"solve", "--expr", "x^2+3*x+1", "--x0", "5", "--mode", "single-step"});
  CHECK(r.code == kExitSolverFailure);
  CHECK(r.err.find("no admissible step (|Z|>=1)") != std::string::npos);
}

TEST_CASE("solve with a negative discriminant exits 3") {
  auto r = run({"solve", "--expr", "x^2+1", "--x0", "1"});
  CHECK(r.code == kExitSolverFailure);
  CHECK(r.err.find("discriminant") != std::string::npos);
}

TEST_CASE("solve iterate streams a trace") {
  auto r = run({"solve", "--expr", "x^3+2*x^2-4*x-8", "--x0", "2.5", "--mode", "iterate",
                "--trace"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("iter,x,f,Z,admissible,discriminant\n", 0) == 0);
  CHECK(r.out.find("termination=converged") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"bogus"}).code == kExitUsage);
  CHECK(run({"solve", "--x0", "1"}).code == kExitUsage);
  CHECK(run({"solve", "--expr", "x", "--x0", "1", "--nope"}).code == kExitUsage);
  CHECK(run({"solve", "--expr", "x^", "--x0", "1"}).code == kExitUsage);
  CHECK(run({"solve", "--expr", "y", "--x0", "1"}).code == kExitUsage);
  CHECK(run({"solve", "--expr", "x", "--x0", "1", "--mode", "twice"}).code == kExitUsage);
  CHECK(run({"solve-system", "--system", "/nonexistent.json", "--x0", "0,0,0"}).code ==
        kExitUsage);
  CHECK(run({"gd", "--system", kSystem, "--x0", "0,0"}).code == kExitUsage);
  auto r = run({"solve", "--expr", "x", "--x0", "1", "--nope"});
  CHECK(r.err.find("--nope") != std::string::npos);
}

TEST_CASE("help exits 0") { CHECK(run({"--help"}).code == kExitOk); }

TEST_CASE("newton subcommand") {
  auto r = run({"newton", "--expr", "x^2-2", "--x0", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("x*=1.41421356237") != std::string::npos);
}

TEST_CASE("frac-order reproduces the quadratic scan") {
  auto r = run({"frac-order", "--expr", "x^2+3*x+1", "--x0", "0.5", "--a", "0", "--xi1", "0.25",
                "--beta0", "-2.01", "--tol", "0.013"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("beta=-2.86 ") != std::string::npos);
}

TEST_CASE("frac-order reports not found at a double root") {
  auto r = run({"frac-order", "--expr", "x^3+2*x^2-4*x-8", "--x0", "-2", "--a", "-2.5", "--xi1",
                "-2.25", "--beta0", "-3.01", "--tol", "0.009"});
  CHECK(r.code == kExitSolverFailure);
  CHECK(r.out.find("T=indeterminate") != std::string::npos);
}

TEST_CASE("frac-order argument checks") {
  CHECK(run({"frac-order", "--expr", "x^2", "--x0", "0.5", "--a", "0", "--xi1", "0.7",
             "--beta0", "-2"})
            .code == kExitUsage);
  CHECK(run({"frac-order", "--expr", "x^2+1", "--x0", "0.5", "--a", "0", "--xi1", "0.25",
             "--beta0", "-2", "--k1", "1"})
            .code == kExitUsage);
}

TEST_CASE("tangent writes CSV") {
  auto path = temp_file("tangent.csv");
  auto r = run({"tangent", "--expr", "x^2+3*x+1", "--x0", "0.5", "--samples", "5", "--out",
                path.string()});
  CHECK(r.code == kExitOk);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y_classical,y_fractional");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 5);
  std::filesystem::remove(path);
}

TEST_CASE("solve-system reports the failing delta") {
  auto r = run({"solve-system", "--system", kSystem, "--x0", "2/3,0.0032,-0.523", "--trace"});
  CHECK(r.code == kExitSolverFailure);
  CHECK(r.out.rfind("iter,x1,x2,x3,F,Z,delta\n", 0) == 0);
  CHECK(r.err.find("delta=") != std::string::npos);
}

TEST_CASE("gd and compare") {
  auto r = run({"gd", "--system", kSystem, "--x0", "0,0,0", "--f-target", "0.43"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("iterations=95") != std::string::npos);
  auto c = run({"compare", "--system", kSystem, "--x0", "2/3,0.0032,-0.523", "--max-iter", "5"});
  CHECK(c.code == kExitOk);
  CHECK(c.out.rfind("iter,F_taylor,F_gd\n", 0) == 0);
  CHECK(c.out.find("taylor: iterations=") != std::string::npos);
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args{"gd", "--system", kSystem, "--x0", "0,0,0", "--trace",
                                "--max-iter", "20"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("repro exit codes") {
  auto ok = run({"repro"});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  auto tight = run({"repro", "--scan-tol-scale", "0.5"});
  CHECK(tight.code == kExitSolverFailure);
  CHECK(tight.out.find("FAIL,ex3.root1.beta") != std::string::npos);
}

TEST_CASE("iteration cap is a solver failure") {
  CHECK(run({"gd", "--system", kSystem, "--x0", "0,0,0", "--max-iter", "5"}).code ==
        kExitSolverFailure);
  CHECK(run({"newton", "--expr", "x^3-2*x+2", "--x0", "0", "--max-iter", "4"}).code ==
        kExitSolverFailure);
}
