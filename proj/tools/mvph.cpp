// mvph: realization, MPH* criterion, projection, simulation and the Wishart
// demonstration, all with JSON input and output.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "mvph/commands.hpp"
#include "mvph/error.hpp"

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw mvph::ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const mvph::Json& report) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw mvph::ParseError("cannot write " + path);
  out << text;
  if (!out) throw mvph::ParseError("cannot write " + path);
}

// "1,0.5;0,1" -> {{1, 0.5}, {0, 1}}
std::vector<std::vector<double>> parse_points(const std::vector<std::string>& items) {
  std::vector<std::vector<double>> out;
  for (const auto& item : items) {
    std::vector<double> point;
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        point.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw mvph::ParseError("bad point component \"" + part + "\"");
      }
    }
    out.push_back(std::move(point));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate matrix-exponential realization and MPH* exclusion tools"};
  app.require_subcommand(1);

  mvph::commands::Options opt;
  std::string input = "-";
  std::string output;
  std::size_t samples = 0;
  bool no_minimal = false;
  std::vector<std::string> points;

  auto common = [&](CLI::App* cmd, bool with_input) {
    if (with_input) cmd->add_option("input", input, "JSON input file, '-' for stdin");
    cmd->add_option("--out,-o", output, "write the JSON report here instead of stdout");
    cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  };

  auto* realize = app.add_subcommand("realize", "transform JSON -> Kulkarni representation");
  common(realize, true);
  realize->add_option("--points", opt.points, "verification points")->capture_default_str();
  realize->add_flag("--exact", opt.exact, "also emit the exact-rational representation");

  auto* check = app.add_subcommand("check-mphstar", "leading-part factorization verdict");
  common(check, true);
  check->add_flag("--no-minimal", no_minimal, "do not treat the input denominator as minimal");
  check->add_option("--trials", opt.trials, "restriction trials for degree >= 3")->capture_default_str();

  auto* project = app.add_subcommand("project", "univariate law of <a, X>");
  common(project, true);
  project->add_option("--a", opt.direction, "non-negative direction")->required()->delimiter(',');
  project->add_option("--u", opt.u_grid, "transform arguments")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo reward simulation");
  common(simulate, true);
  simulate->add_option("--samples", samples, "sample paths (default 100000)");
  simulate->add_option("--s", points, "transform point, comma separated; repeatable");
  simulate->add_option("--a", opt.direction, "projection direction to check")->delimiter(',');
  simulate->add_option("--u", opt.u_grid, "projection grid")->delimiter(',');

  auto* demo = app.add_subcommand("wishart-demo", "the Wishart trace example end to end");
  common(demo, false);
  demo->add_option("--samples", samples, "Monte Carlo samples (default 1000000, 0 to skip)");
  demo->add_option("--trials", opt.trials, "restriction trials")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    opt.minimal = !no_minimal;
    opt.s_points = parse_points(points);
    mvph::Json report;
    if (*realize) {
      report = mvph::commands::realize(mvph::parse_json(read_input(input)), opt);
    } else if (*check) {
      report = mvph::commands::check_mphstar(mvph::parse_json(read_input(input)), opt);
    } else if (*project) {
      report = mvph::commands::project(mvph::parse_json(read_input(input)), opt);
    } else if (*simulate) {
      if (simulate->count("--samples") > 0) opt.samples = samples;
      report = mvph::commands::simulate(mvph::parse_json(read_input(input)), opt);
    } else {
      if (demo->count("--samples") > 0) opt.samples = samples;
      report = mvph::commands::wishart_demo(opt);
    }
    write_output(output, report);
  } catch (const mvph::DomainError& e) {
    std::cerr << "mvph: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mvph: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
