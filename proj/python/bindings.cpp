#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mvph/commands.hpp"
#include "mvph/error.hpp"
#include "mvph/kulkarni.hpp"
#include "mvph/wishart.hpp"

namespace py = pybind11;
using namespace mvph;

namespace {

std::string run(Json (*command)(const Json&, const commands::Options&), const std::string& input,
                const commands::Options& options) {
  const Json in = parse_json(input);
  py::gil_scoped_release release;
  return command(in, options).dump();
}

commands::Options base_options(std::uint64_t seed) {
  commands::Options o;
  o.seed = seed;
  return o;
}

KulkarniRep make_rep(Eigen::RowVectorXd alpha, Eigen::MatrixXd T, Eigen::MatrixXd K,
                     std::optional<Eigen::VectorXd> t, std::optional<double> p0) {
  KulkarniRep rep = KulkarniRep::markovian(std::move(alpha), std::move(T), std::move(K));
  if (t) rep.t = *t;
  if (p0) rep.p0 = *p0;
  return rep;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multivariate matrix-exponential realization and MPH* certificates";

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def(
      "realize",
      [](const std::string& input, std::uint64_t seed, std::size_t points, bool exact) {
        auto o = base_options(seed);
        o.points = points;
        o.exact = exact;
        return run(commands::realize, input, o);
      },
      py::arg("input"), py::arg("seed") = 42, py::arg("points") = 30, py::arg("exact") = false);

  m.def(
      "check_mphstar",
      [](const std::string& input, std::uint64_t seed, std::size_t trials, bool minimal) {
        auto o = base_options(seed);
        o.trials = trials;
        o.minimal = minimal;
        return run(commands::check_mphstar, input, o);
      },
      py::arg("input"), py::arg("seed") = 42, py::arg("trials") = 1024, py::arg("minimal") = true);

  m.def(
      "project",
      [](const std::string& input, std::vector<double> a, std::vector<double> u) {
        auto o = base_options(42);
        o.direction = std::move(a);
        o.u_grid = std::move(u);
        return run(commands::project, input, o);
      },
      py::arg("input"), py::arg("a"), py::arg("u") = std::vector<double>{});

  m.def(
      "simulate",
      [](const std::string& input, std::size_t samples, std::uint64_t seed,
         std::vector<std::vector<double>> s, std::vector<double> a, std::vector<double> u,
         unsigned workers) {
        auto o = base_options(seed);
        o.samples = samples;
        o.s_points = std::move(s);
        o.direction = std::move(a);
        o.u_grid = std::move(u);
        o.workers = workers;
        return run(commands::simulate, input, o);
      },
      py::arg("input"), py::arg("samples") = 100000, py::arg("seed") = 42,
      py::arg("s") = std::vector<std::vector<double>>{}, py::arg("a") = std::vector<double>{},
      py::arg("u") = std::vector<double>{}, py::arg("workers") = 0);

  m.def(
      "wishart_demo",
      [](std::size_t samples, std::uint64_t seed, std::size_t trials) {
        auto o = base_options(seed);
        o.samples = samples;
        o.trials = trials;
        py::gil_scoped_release release;
        return commands::wishart_demo(o).dump();
      },
      py::arg("samples") = 1000000, py::arg("seed") = 42, py::arg("trials") = 1024);

  m.def(
      "transform_eval",
      [](Eigen::RowVectorXd alpha, Eigen::MatrixXd T, Eigen::MatrixXd K, std::vector<double> s,
         std::optional<Eigen::VectorXd> t, std::optional<double> p0) {
        const KulkarniRep rep = make_rep(std::move(alpha), std::move(T), std::move(K), t, p0);
        return transform_eval(rep, s);
      },
      py::arg("alpha"), py::arg("T"), py::arg("K"), py::arg("s"), py::arg("t") = py::none(),
      py::arg("p0") = py::none());

  m.def(
      "validate_mphstar",
      [](Eigen::RowVectorXd alpha, Eigen::MatrixXd T, Eigen::MatrixXd K,
         std::optional<Eigen::VectorXd> t, std::optional<double> p0) {
        const KulkarniRep rep = make_rep(std::move(alpha), std::move(T), std::move(K), t, p0);
        return to_json(validate_mphstar(rep)).dump();
      },
      py::arg("alpha"), py::arg("T"), py::arg("K"), py::arg("t") = py::none(),
      py::arg("p0") = py::none());

  m.def(
      "leading_part",
      [](const std::string& expr, std::size_t n) {
        return leading_part(Polynomial::parse(expr, n)).to_string();
      },
      py::arg("expr"), py::arg("n"));

  auto w = m.def_submodule("wishart", "The 2x2 Wishart trivariate example");
  w.def("transform", [](const wishart::Vec3& s) { return wishart::transform_closed(s); });
  w.def("density", [](const wishart::Vec3& x) { return wishart::density(x).value; });
  w.def("in_support",
        [](const wishart::Vec3& x) { return std::string(wishart::to_string(wishart::in_support(x))); });
  w.def("projection", [](const wishart::Vec3& a, double u) {
    const auto p = wishart::projection_transform(a, u);
    return py::make_tuple(p.lambda1, p.lambda2, p.value);
  });
  w.def("denominator", [] { return wishart::transform_poly().to_string(); });
}
