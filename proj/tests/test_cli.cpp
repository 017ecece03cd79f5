#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mzeta/cli.hpp"

using namespace mzeta;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::ordered_json json_of(const Run& r) { return nlohmann::ordered_json::parse(r.out); }

std::vector<std::string> keys(const nlohmann::ordered_json& j) {
  std::vector<std::string> out;
  for (const auto& [k, v] : j.items()) out.push_back(k);
  return out;
}

}  // namespace

TEST_CASE("sum examples") {
  auto r = run({"sum", "--family", "inv-lcm", "--n", "2", "--x", "2", "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = json_of(r);
  CHECK(j["value"] == "5/2");
  CHECK(j["tuples"] == 4);
  CHECK(keys(j) == std::vector<std::string>{"family", "n", "norm", "strategy", "mode", "x", "value", "exact", "tuples"});

  auto ball = json_of(run({"sum", "--family", "inv-lcm", "--n", "2", "--x", "3", "--norm", "1"}));
  CHECK(ball["value"] == "2/1");
  CHECK(ball["norm"] == "1");

  auto flt = json_of(run({"sum", "--family", "inv-lcm", "--n", "2", "--x", "2", "--mode", "float"}));
  CHECK(flt["value"] == "2.5");
  CHECK(flt["exact"] == false);
  CHECK(flt["precision"] == 53);

  auto ladder = json_of(run({"sum", "--family", "cyclic", "--n", "1", "--x", "5", "10", "--strategy", "direct"}));
  REQUIRE(ladder["results"].size() == 2);
  CHECK(ladder["results"][1]["value"] == "27/1");

  auto timed = json_of(run({"sum", "--family", "cyclic", "--n", "2", "--x", "9", "--timing"}));
  CHECK(timed.contains("seconds"));
}

TEST_CASE("constant examples") {
  auto vol = json_of(run({"constant", "volume", "--family", "inv-lcm", "--n", "3"}));
  CHECK(vol["rho"] == 7);
  CHECK(vol["K"] == "11/3360");
  CHECK(vol["volume"] == "11/3360");

  auto mc = run({"constant", "volume", "--family", "inv-lcm", "--n", "2", "--method", "mc", "--samples", "20000"});
  REQUIRE(mc.code == 0);
  auto mj = json_of(mc);
  CHECK(std::fabs(mj["K_estimate"].get<double>() - 1.0 / 3) < 4 * mj["std_error"].get<double>());

  auto holder = json_of(run({"constant", "holder", "--family", "cyclic", "--n", "2", "--d", "2"}));
  CHECK(std::fabs(std::stod(holder["value"].get<std::string>()) - 0.2617993878) < 1e-10);
  CHECK(holder["precision"] == 256);

  auto euler = json_of(run({"constant", "euler", "--family", "inv-lcm", "--n", "2", "--P", "1000", "--prec", "128"}));
  CHECK(std::fabs(std::stod(euler["value"].get<std::string>()) - 6 / (M_PI * M_PI)) < 1e-3);
  CHECK(euler["precision"] == 128);
  CHECK(euler["exact_local_sums"] == true);
}

TEST_CASE("integral term list") {
  auto r = run({"integral", "--family", "prod-over-lcm", "--n", "2"});
  REQUIRE(r.code == 0);
  auto j = json_of(r);
  CHECK(j["terms"].size() == 4);
  CHECK(j["expression"] == "x^(2)*ln(x) - 3/2*x^(2) + 2*x - 1/2");
  auto csv = run({"integral", "--family", "prod-over-lcm", "--n", "2", "--format", "csv"});
  CHECK(csv.out.rfind("coeff,x_power,log_power\n", 0) == 0);
}

TEST_CASE("fit csv columns") {
  auto r = run({"fit", "--family", "prod-over-lcm", "--n", "2", "--ladder", "64", "128", "256", "--P", "1000",
                "--format", "csv"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "x,sum,predicted,ratio");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);
  auto j = json_of(run({"fit", "--family", "prod-over-lcm", "--n", "2", "--ladder", "64", "128", "256", "--P", "1000"}));
  CHECK(j["rho"] == 1);
  CHECK(j["coefficients"].size() == 2);
  CHECK(run({"fit", "--family", "inv-lcm", "--n", "2", "--ladder", "64", "128"}).code == 2);
}

TEST_CASE("exit codes") {
  CHECK(run({"sum", "--family", "inv-lcm-coprime", "--n", "1", "--x", "5"}).code == 2);
  CHECK(run({"sum", "--family", "nope", "--n", "2", "--x", "5"}).code == 2);
  CHECK(run({"sum", "--family", "inv-lcm", "--n", "2"}).code == 2);
  CHECK(run({"sum", "--family", "inv-lcm", "--n", "2", "--x", "5", "--norm", "1/2"}).code == 2);
  CHECK(run({"sum", "--family", "inv-lcm", "--n", "2", "--x", "5", "--format", "xml"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"constant", "holder", "--family", "inv-lcm", "--n", "2"}).code == 2);
  auto budget = run({"sum", "--family", "inv-lcm", "--n", "3", "--x", "5000"});
  CHECK(budget.code == 3);
  CHECK(budget.err.find("exceeds the work budget") != std::string::npos);
  CHECK(run({"sum", "--family", "inv-lcm", "--n", "2", "--x", "50", "--budget", "100"}).code == 3);
  CHECK(run({"verify", "--check", "volume-s3"}).code == 0);
  CHECK(run({"verify", "--check", "volume-c3"}).code == 1);
  CHECK(run({"verify", "--check", "no-such"}).code == 2);
}

TEST_CASE("help documents every flag") {
  auto top = run({"--help"});
  CHECK(top.code == 0);
  auto all = run({"--help-all"});
  CHECK(all.code == 0);
  for (const char* flag : {"--family", "--n", "--x", "--norm", "--strategy", "--mode", "--budget", "--format",
                           "--output", "--threads", "--timing", "--prime-bound", "--exponent-bound", "--prec",
                           "--method", "--samples", "--seed", "--log-x", "--d", "--ladder", "--config", "--check",
                           "--list"}) {
    CAPTURE(flag);
    CHECK(all.out.find(flag) != std::string::npos);
  }
  for (const char* sub : {"sum", "constant", "euler", "volume", "holder", "integral", "fit", "verify"}) {
    CHECK(all.out.find(sub) != std::string::npos);
  }
}

TEST_CASE("verify config and list") {
  const std::string path = "test_cli_suite.json";
  {
    std::ofstream f(path);
    f << R"({"checks": ["holder-c2-d1", {"name": "volume-s3-alternate", "expect": "fail"}]})";
  }
  auto r = run({"verify", "--config", path});
  std::remove(path.c_str());
  REQUIRE(r.code == 0);
  auto j = json_of(r);
  CHECK(j["ok"] == true);
  REQUIRE(j["checks"].size() == 2);
  CHECK(j["checks"][1]["status"] == "XFAIL");
  CHECK(keys(j["checks"][0]) == std::vector<std::string>{"check", "status", "measured", "expected", "tolerance", "detail"});
  CHECK(run({"verify", "--config", "/nonexistent/suite.json"}).code == 2);

  auto list = json_of(run({"verify", "--list"}));
  CHECK(list["checks"].size() > 30);
}

TEST_CASE("output file and reproducibility") {
  const std::string path = "test_cli_out.csv";
  auto r = run({"sum", "--family", "prod-over-lcm", "--n", "3", "--x", "40", "--format", "csv", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::remove(path.c_str());
  CHECK(buf.str().rfind("family,n,norm,strategy,mode,x,value,exact,tuples\n", 0) == 0);

  for (std::vector<std::string> args : {
           std::vector<std::string>{"sum", "--family", "inv-lcm", "--n", "3", "--x", "120", "--mode", "float"},
           std::vector<std::string>{"sum", "--family", "cyclic", "--n", "3", "--x", "60", "--norm", "5/2"},
           std::vector<std::string>{"constant", "volume", "--family", "cyclic", "--n", "2", "--method", "mc",
                                    "--samples", "50000", "--seed", "9"},
           std::vector<std::string>{"constant", "euler", "--family", "cyclic", "--n", "3", "--P", "2000"},
       }) {
    auto one = args, eight = args;
    one.insert(one.end(), {"--threads", "1"});
    eight.insert(eight.end(), {"--threads", "8"});
    auto a = run(one), b = run(eight), c = run(eight);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
  }
}
