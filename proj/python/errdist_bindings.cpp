#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "errdist/errors.hpp"
#include "errdist/estimators.hpp"
#include "errdist/kernels.hpp"
#include "errdist/localpoly.hpp"
#include "errdist/models.hpp"
#include "errdist/montecarlo.hpp"

namespace py = pybind11;
using namespace errdist;

namespace {

// LocalPolyFit borrows its dataset; this owns both for Python.
class OwnedFit {
 public:
  OwnedFit(std::vector<double> z, std::vector<double> y, int order, double bandwidth,
           const std::string& kernel)
      : data_(std::make_unique<Dataset>(std::move(z), std::move(y))),
        fit_(make_config(order, bandwidth, kernel), *data_) {}

  double predict(double x) const { return fit_.predict(x); }
  std::vector<double> coefficients(double x) const {
    const Eigen::VectorXd b = fit_.coefficients(x);
    return {b.data(), b.data() + b.size()};
  }
  std::vector<double> smoothing_weights(double x) const { return fit_.smoothing_weights(x); }
  std::vector<double> residuals() const { return fit_.residuals(); }
  std::vector<std::string> warnings() const { return fit_.warnings(); }

 private:
  static LocalPolyConfig make_config(int order, double bandwidth, const std::string& kernel) {
    LocalPolyConfig c;
    c.order = order;
    c.bandwidth = bandwidth;
    c.kernel = Kernel::from_name(kernel);
    return c;
  }

  std::unique_ptr<Dataset> data_;
  LocalPolyFit fit_;
};

ErrorModel make_error(const std::string& family, double scale, double df, double half_width) {
  if (family == "normal") return ErrorModel::normal(scale);
  if (family == "student_t") return ErrorModel::student_t(df, scale);
  if (family == "uniform") return ErrorModel::uniform(half_width);
  throw InvalidArgument("unknown error model '" + family + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Residual-based estimation of the error distribution in nonparametric regression";

  auto base = py::register_exception<Error>(m, "ErrdistError", PyExc_RuntimeError);
  py::register_exception<SingularDesign>(m, "SingularDesign", base.ptr());
  py::register_exception<InfeasibleConstraint>(m, "InfeasibleConstraint", base.ptr());
  py::register_exception<DegenerateErrors>(m, "DegenerateErrors", base.ptr());
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<InvalidSize>(m, "InvalidSize", base.ptr());

  py::class_<Kernel>(m, "Kernel")
      .def(py::init(&Kernel::from_name), py::arg("name") = "triweight")
      .def_property_readonly("name", &Kernel::name)
      .def("value", &Kernel::value)
      .def("derivative", &Kernel::derivative)
      .def("second_derivative", &Kernel::second_derivative)
      .def("cdf", &Kernel::cdf)
      .def("__repr__", [](const Kernel& k) { return "Kernel('" + k.name() + "')"; });

  m.def(
      "bandwidths",
      [](std::size_t n, double a_const, double c_const) {
        const Bandwidths bw = bandwidths({a_const, c_const}, n);
        return py::make_tuple(bw.a_n, bw.c_n);
      },
      py::arg("n"), py::arg("a_const") = 1.0, py::arg("c_const") = 1.0,
      "Returns (a_n, c_n) = (a n^{-1/4}/ln n, c n^{-1/4}).");

  py::class_<OwnedFit>(m, "LocalPolyFit")
      .def(py::init<std::vector<double>, std::vector<double>, int, double, const std::string&>(),
           py::arg("z"), py::arg("y"), py::arg("order") = 2, py::arg("bandwidth"),
           py::arg("kernel") = "epanechnikov")
      .def("predict", &OwnedFit::predict)
      .def("coefficients", &OwnedFit::coefficients)
      .def("smoothing_weights", &OwnedFit::smoothing_weights)
      .def("residuals", &OwnedFit::residuals)
      .def_property_readonly("warnings", &OwnedFit::warnings);

  py::class_<EdfCurve>(m, "EdfCurve")
      .def(py::init<std::vector<double>>(), py::arg("samples"))
      .def("__call__", &EdfCurve::eval);

  py::class_<SmoothedEdf>(m, "SmoothedEdf")
      .def(py::init([](std::vector<double> residuals, double bandwidth, const std::string& kernel) {
             return SmoothedEdf(std::move(residuals), bandwidth, Kernel::from_name(kernel));
           }),
           py::arg("residuals"), py::arg("bandwidth"), py::arg("kernel") = "triweight")
      .def("__call__", &SmoothedEdf::eval)
      .def("density", &SmoothedEdf::density);

  m.def("c0_hat", [](std::vector<double> e, double t) { return c0_hat(e, t); });
  m.def("meanzero_corrected_eval", [](std::vector<double> e, double t) { return meanzero_corrected_eval(e, t); });
  m.def("el_weights", [](std::vector<double> e) { return el_weights(e); });
  m.def("el_cdf_eval", [](std::vector<double> e, std::vector<double> w, double t) { return el_cdf_eval(e, w, t); });

  py::class_<ErrorModel>(m, "ErrorModel")
      .def(py::init(&make_error), py::arg("family") = "normal", py::arg("scale") = 1.0,
           py::arg("df") = 5.0, py::arg("half_width") = 1.0)
      .def_property_readonly("name", &ErrorModel::name)
      .def("cdf", &ErrorModel::cdf)
      .def("density", &ErrorModel::density)
      .def("variance", &ErrorModel::variance)
      .def("tail_first_moment", &ErrorModel::tail_first_moment);

  m.def("var_empirical", &var_empirical);
  m.def("var_smoothed", &var_smoothed);
  m.def("var_efficient_meanzero", &var_efficient_meanzero);
  m.def("variance_gap", &variance_gap);
  m.def("influence_function", &influence_function, py::arg("model"), py::arg("eps"), py::arg("t"));

  m.def(
      "sample_scenario",
      [](std::size_t n, std::uint64_t seed, const ErrorModel& error, std::vector<double> coefficients) {
        const Dataset d = sample_scenario(CovariateModel::uniform(),
                                          RegressionModel::polynomial(std::move(coefficients)), error, n, seed);
        py::dict out;
        out["z"] = d.z;
        out["y"] = d.y;
        out["errors"] = *d.true_errors;
        return out;
      },
      py::arg("n"), py::arg("seed"), py::arg("error"),
      py::arg("coefficients") = std::vector<double>{1.0, 1.0, -2.0},
      "Uniform covariates, polynomial regression function, given error law.");

  m.def(
      "run_monte_carlo",
      [](std::size_t n, std::size_t replications, const ErrorModel& error, std::vector<double> t_grid,
         std::uint64_t seed, unsigned threads) {
        ScenarioConfig c;
        c.n = n;
        c.replications = replications;
        c.error = error;
        c.t_grid = std::move(t_grid);
        c.seed = seed;
        const MonteCarloReport r = run_monte_carlo(c, threads);
        py::list rows;
        for (const auto& s : r.per_t) {
          py::dict row;
          row["t"] = s.t;
          row["estimator"] = std::string(estimator_name(s.estimator));
          row["emp_mean"] = s.emp_mean;
          row["emp_var"] = s.emp_var;
          row["theory_var"] = s.theory_var;
          rows.append(row);
        }
        py::dict out;
        out["rows"] = rows;
        out["median_remainder"] = r.median_remainder;
        out["q90_remainder"] = r.q90_remainder;
        out["failures"] = r.failures;
        return out;
      },
      py::arg("n"), py::arg("replications"), py::arg("error"), py::arg("t_grid") = std::vector<double>{0.0},
      py::arg("seed") = 20040101, py::arg("threads") = 1);

  m.attr("__version__") = "0.1.0";
}
