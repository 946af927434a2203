#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "mvph/json_io.hpp"

using namespace mvph;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mvph_cli_" + name);
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

Run run(const std::string& args) {
  const std::string cmd = std::string("'") + MVPH_CLI + "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Json run_json(const std::string& args) {
  const Run r = run(args);
  REQUIRE(r.code == 0);
  return parse_json(r.out);
}

const char* kWishart =
    R"({"p0": "0", "num": {"n": 3, "expr": "1"}, "den": {"n": 3, "expr": "1 + 2*s1 + 4*s2 + 4*s3 + s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2"}, "coprime_declared": true})";

}  // namespace

TEST_CASE("realize examples") {
  const std::string exp1 = write("exp1.json", R"({"num": {"n": 1, "expr": "1"}, "den": {"n": 1, "expr": "1 + s1"}})");
  const Json r = run_json("realize " + exp1);
  CHECK(r.at("schema") == 1);
  const Json& dims = r.at("report").at("dimensions");
  CHECK(dims.at("ell") == 2 * 1 * dims.at("N").get<int>());
  const Json& ver = r.at("report").at("verification");
  CHECK(ver.at("max_rel_error").get<double>() < 1e-8);
  CHECK(ver.at("seed") == 42);
  CHECK(ver.at("points") == 30);

  const Json w = run_json("realize " + write("w.json", kWishart));
  const KulkarniRep rep = rep_from_json(w["rep"]);
  CHECK(std::abs(transform_eval(rep, std::vector<double>{1, 0, 0}) - 0.25) < 1e-8);

  const std::string mass = write("mass.json", R"({"p0": "1", "num": {"n": 2, "terms": []}, "den": {"n": 2, "expr": "1"}})");
  const Json d = run_json("realize " + mass);
  CHECK(d.at("report").at("degenerate") == true);
  CHECK(transform_eval(rep_from_json(d["rep"]), std::vector<double>{1.5, 2.0}) == 1.0);
}

TEST_CASE("check-mphstar examples") {
  const Json w = run_json("check-mphstar " + write("wq.json", R"({"n": 3, "expr": "1 + 2*s1 + 4*s2 + 4*s3 + s1^2 + 4*s1*s2 + 4*s1*s3 + 3*s2^2 + 8*s2*s3 + 3*s3^2"})"));
  CHECK(w["verdict"]["outcome"] == "IRREDUCIBLE_CERTIFIED");
  CHECK(w["verdict"]["evidence"]["detM"] == "1");
  CHECK(w["verdict"]["excludes_mphstar"] == true);
  CHECK(w["cross_check_agrees"] == true);
  CHECK(w["verified"] == true);

  const Json p = run_json("check-mphstar " + write("prod.json", R"({"n": 2, "expr": "1 + s1 + s2 + s1*s2"})"));
  CHECK(p["verdict"]["outcome"] == "FACTORS_NONNEG");

  const Json c = run_json("check-mphstar " + write("const.json", R"({"n": 2, "expr": "3"})"));
  CHECK(c["verdict"]["outcome"] == "FACTORS_NONNEG");
  CHECK(c["verdict"]["evidence"]["nu"] == 0);

  const Json rep = run_json("check-mphstar " + write("rep.json", R"({"alpha": [1, 0], "T": [[-1, 1], [0, -1]], "K": [[1, 0], [0, 1]]})"));
  CHECK(rep["verdict"]["outcome"] == "FACTORS_NONNEG");
  CHECK(rep.contains("caveat"));
  CHECK(rep["verdict"]["minimal_declared"] == false);
}

TEST_CASE("exit codes") {
  CHECK(run("realize " + write("bad.json", "{not json")).code == 1);
  CHECK(run("realize /nonexistent/mvph.json").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("check-mphstar " + write("zero.json", R"({"n": 2, "expr": "s1 + s2"})")).code == 2);
  CHECK(run("realize " + write("pole.json", R"({"num": {"n": 1, "expr": "1"}, "den": {"n": 1, "expr": "s1"}})")).code == 2);
  CHECK(run("project " + write("p.json", R"({"alpha": [1], "T": [[-1]], "K": [[1]]})") + " --a=-1").code == 2);
  const Json realized = run_json("realize " + write("w2.json", kWishart));
  CHECK(run("simulate " + write("mme.json", realized.dump()) + " --samples 100").code == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  const std::string w = write("w3.json", kWishart);
  const Run a = run("realize " + w);
  const Run b = run("realize " + w);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const Run d1 = run("wishart-demo --samples 20000");
  const Run d2 = run("wishart-demo --samples 20000");
  CHECK(d1.out == d2.out);

  const std::string rep = write("series.json", R"({"alpha": [1, 0], "T": [[-1, 1], [0, -1]], "K": [[1, 0], [0, 1]]})");
  CHECK(run("simulate " + rep + " --samples 5000").out == run("simulate " + rep + " --samples 5000").out);

  const auto out = scratch("out.json");
  CHECK(run("realize " + w + " -o " + out.string()).code == 0);
  std::ifstream in(out);
  const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(written == a.out);
}

TEST_CASE("realize output round trips") {
  const Json realized = run_json("realize --exact " + write("w4.json", kWishart));
  const std::string path = write("realized.json", realized.dump());
  const Json verdict = run_json("check-mphstar " + path);
  CHECK(verdict["verdict"]["outcome"] == "IRREDUCIBLE_CERTIFIED");
  CHECK(verdict["source"] == "realize report (source transform denominator)");

  const KulkarniRep rep = rep_from_json(realized["rep"]);
  CHECK(to_json(rep).dump() == realized["rep"].dump());
  const ExactKulkarniRep exact = exact_rep_from_json(realized["exact_rep"]);
  CHECK(to_json(exact).dump() == realized["exact_rep"].dump());

  const Json series = run_json("realize " + write("series_t.json", R"({"num": {"n": 2, "expr": "1"}, "den": {"n": 2, "expr": "1 + s1 + s2 + s1*s2"}})"));
  const Json proj = run_json("project " + write("series_r.json", series.dump()) + " --a 1,1 --u 0,1");
  CHECK(std::abs(proj["table"][1]["transform"].get<double>() - 0.25) < 1e-8);
}

TEST_CASE("simulate and project reports") {
  const std::string rep = write("series2.json", R"({"alpha": [1, 0], "T": [[-1, 1], [0, -1]], "K": [[1, 0], [0, 1]]})");
  const Json s = run_json("simulate " + rep + " --samples 20000 --s 1,1 --a 1,1 --u 0,1 --seed 9");
  CHECK(s["seed"] == 9);
  CHECK(s["samples"] == 20000);
  CHECK(s["transforms"][0]["gap_over_se"].get<double>() <= 4.0);
  CHECK(s["projection"]["rows"][0]["estimate"] == 1.0);

  const Json p = run_json("project " + rep + " --a 1,0");
  CHECK(p["univariate"]["rates"][1] == 0.0);
  CHECK(p["table"][0]["transform"] == 1.0);
}

TEST_CASE("wishart-demo contract") {
  const Json d = run_json("wishart-demo --samples 0");
  CHECK(d["verdict"]["outcome"] == "IRREDUCIBLE_CERTIFIED");
  CHECK(d["verdicts_agree"] == true);
  CHECK(d["monte_carlo"].is_null());
  CHECK(d["extension_n4"]["contains_trivariate_qtop"] == true);

  Json a = run_json("wishart-demo --samples 20000 --seed 1");
  Json b = run_json("wishart-demo --samples 20000 --seed 2");
  CHECK(a["monte_carlo"]["rows"][1]["estimate"] != b["monte_carlo"]["rows"][1]["estimate"]);
  for (const char* key : {"Q", "qtop", "verdict", "projections", "density_normalization"}) {
    CHECK(a[key] == b[key]);
  }
  // The restriction witness depends on the seed; the polynomials and outcome do not.
  for (const char* key : {"den", "qtop", "contains_trivariate_qtop"}) {
    CHECK(a["extension_n4"][key] == b["extension_n4"][key]);
  }
  CHECK(a["extension_n4"]["verdict"]["outcome"] == b["extension_n4"]["verdict"]["outcome"]);
  CHECK(a["extension_n4"]["verdict"]["outcome"] == "IRREDUCIBLE_CERTIFIED");
  CHECK(a["monte_carlo"]["seed"] == 1);
  CHECK(a["monte_carlo"]["samples"] == 20000);
}
