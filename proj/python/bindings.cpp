// pybind11 surface: thin wrappers over the C++ core for notebook use and
// the smoke tests.  Heavy lifting stays in C++; everything here converts
// arguments and reshapes results.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "piml/effdim.hpp"
#include "piml/experiment.hpp"
#include "piml/kernel.hpp"
#include "piml/quantization.hpp"
#include "piml/regressor.hpp"
#include "piml/threads.hpp"

namespace py = pybind11;
using namespace piml;

namespace {

KernelBackend make_backend(const std::string& kind, int n_max,
                           bool force_galerkin) {
  if (kind == "closed") return KernelBackend::closed_form();
  if (kind == "spectral") return KernelBackend::spectral(n_max, force_galerkin);
  throw std::invalid_argument("backend must be 'closed' or 'spectral'");
}

KernelConfig make_config(double L, double lambda, double mu,
                         const std::string& backend, int n_max,
                         bool force_galerkin) {
  return KernelConfig::standard_1d(L, lambda, mu,
                                   make_backend(backend, n_max, force_galerkin));
}

SolverKind make_solver(const std::string& name) {
  if (name == "auto") return SolverKind::auto_select;
  if (name == "dual") return SolverKind::dual;
  if (name == "low_rank") return SolverKind::low_rank;
  throw std::invalid_argument("solver must be 'auto', 'dual', or 'low_rank'");
}

}  // namespace

PYBIND11_MODULE(_piml, m) {
  m.doc() = "Kernel regression with differential-operator penalties";

  py::class_<KernelEngine>(m, "Kernel")
      .def(py::init([](double L, double lambda, double mu,
                       const std::string& backend, int n_max,
                       bool force_galerkin) {
             return KernelEngine(
                 make_config(L, lambda, mu, backend, n_max, force_galerkin));
           }),
           py::arg("L") = 1.0, py::arg("lam") = 1.0, py::arg("mu") = 0.0,
           py::arg("backend") = "closed", py::arg("n_max") = 512,
           py::arg("force_galerkin") = false)
      .def("eval",
           [](const KernelEngine& k, double x, double y) {
             return k.eval(x, y);
           },
           py::arg("x"), py::arg("y"))
      .def("gram",
           [](const KernelEngine& k, const Eigen::VectorXd& xs) {
             Eigen::MatrixXd pts(xs.size(), 1);
             pts.col(0) = xs;
             return k.gram(pts);
           },
           py::arg("xs"))
      .def("weak_form_residual",
           [](const KernelEngine& k, double x, int test_order) {
             Eigen::VectorXd pt(1);
             pt[0] = x;
             return k.weak_form_residual(pt, test_order);
           },
           py::arg("x"), py::arg("test_order") = 10);

  py::class_<KernelModel>(m, "Model")
      .def_property_readonly(
          "dual_coeffs",
          [](const KernelModel& mod) { return mod.dual_coeffs; })
      .def_property_readonly(
          "spectral_coeffs",
          [](const KernelModel& mod) { return mod.spectral_coeffs; })
      .def_property_readonly("solver",
                             [](const KernelModel& mod) {
                               return mod.fit_diagnostics.solver;
                             })
      .def_property_readonly("solver_residual",
                             [](const KernelModel& mod) {
                               return mod.fit_diagnostics.solver_residual;
                             })
      .def("predict",
           [](const KernelModel& mod, const Eigen::VectorXd& xs) {
             Eigen::MatrixXd pts(xs.size(), 1);
             pts.col(0) = xs;
             return predict_many(mod, pts);
           },
           py::arg("xs"))
      .def("predict_one",
           [](const KernelModel& mod, double x) { return predict(mod, x); },
           py::arg("x"))
      .def("to_json", &model_to_json);

  m.def(
      "fit",
      [](const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double L,
         double lambda, double mu, const std::string& backend, int n_max,
         const std::string& solver, int low_rank_modes) {
        Dataset data;
        data.xs.resize(xs.size(), 1);
        data.xs.col(0) = xs;
        data.ys = ys;
        FitOptions opts;
        opts.solver = make_solver(solver);
        opts.low_rank_modes = low_rank_modes;
        return fit(make_config(L, lambda, mu, backend, n_max, false), data,
                   opts);
      },
      py::arg("xs"), py::arg("ys"), py::arg("L") = 1.0, py::arg("lam") = 1.0,
      py::arg("mu") = 0.0, py::arg("backend") = "closed",
      py::arg("n_max") = 512, py::arg("solver") = "auto",
      py::arg("low_rank_modes") = 1024);

  m.def("model_from_json", &model_from_json, py::arg("text"));

  m.def(
      "exact_spectrum",
      [](double lambda, double mu, double L, std::size_t count) {
        const Spectrum spec =
            exact_spectrum_1d({lambda, mu}, L, std::max<std::size_t>(count, 6));
        std::vector<double> eigs(spec.eigenvalues.begin(),
                                 spec.eigenvalues.begin() +
                                     std::ptrdiff_t(
                                         std::min(count,
                                                  spec.eigenvalues.size())));
        return eigs;
      },
      py::arg("lam"), py::arg("mu"), py::arg("L") = 1.0,
      py::arg("count") = 50);

  m.def(
      "effective_dimension",
      [](const std::vector<double>& eigenvalues, double kappa, double lambda,
         double mu, double L) {
        Spectrum spec;
        spec.eigenvalues = eigenvalues;
        spec.provenance.assign(eigenvalues.size(),
                               EigProvenance{EigSource::galerkin, 0});
        spec.params = SpectrumParams{lambda, mu, L, 1, 1, true};
        const EffDimReport rep = effective_dimension(spec, kappa);
        return py::make_tuple(rep.value, rep.truncation_tail_bound);
      },
      py::arg("eigenvalues"), py::arg("kappa"), py::arg("lam") = 1.0,
      py::arg("mu") = 0.0, py::arg("L") = 1.0);

  m.def(
      "minimax_schedule",
      [](std::size_t n, int s, int d) {
        const RegularizationParams reg = minimax_schedule(n, s, d);
        return py::make_tuple(reg.lambda, reg.mu);
      },
      py::arg("n"), py::arg("s") = 1, py::arg("d") = 1);

  m.def(
      "speedup_schedule",
      [](std::size_t n, double model_error) {
        const RegularizationParams reg = speedup_schedule(n, model_error);
        return py::make_tuple(reg.lambda, reg.mu);
      },
      py::arg("n"), py::arg("model_error") = 0.0);

  m.def(
      "run_experiment",
      [](const std::string& scenario, std::uint64_t seed,
         std::size_t replicates, std::size_t mc_eval,
         const std::vector<std::size_t>& n_grid) {
        Scenario sc = scenario == "imperfect" ? Scenario::imperfect()
                                              : Scenario::perfect();
        if (scenario != "perfect" && scenario != "imperfect")
          throw std::invalid_argument(
              "scenario must be 'perfect' or 'imperfect'");
        ExperimentOptions opts;
        opts.seed = seed;
        opts.replicates = replicates;
        opts.mc_eval = mc_eval;
        opts.n_grid = n_grid;
        const ExperimentResult res = run_experiment(sc, opts);
        py::dict out;
        out["scenario"] = res.scenario;
        out["n_grid"] = res.n_grid;
        out["err_mean"] = res.err_mean;
        out["err_std"] = res.err_std;
        out["slope"] = res.rate.slope;
        out["intercept"] = res.rate.intercept;
        out["r2"] = res.rate.r2;
        out["failures"] = res.failures;
        return out;
      },
      py::arg("scenario") = "perfect", py::arg("seed") = 0,
      py::arg("replicates") = 10, py::arg("mc_eval") = 500,
      py::arg("n_grid") = std::vector<std::size_t>{});

  m.def("set_thread_limit", &set_thread_limit, py::arg("n"));
}
