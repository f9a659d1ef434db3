#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracp/battery.hpp"
#include "fracp/eigensolver.hpp"
#include "fracp/inequalities.hpp"
#include "fracp/parallel.hpp"
#include "fracp/pointwise.hpp"

namespace py = pybind11;
using namespace fracp;

namespace {

ShapeSpec to_shape(const std::vector<Primitive>& parts) { return ShapeSpec{parts}; }

KernelOperator make_kernel(const std::vector<Primitive>& shape, double h, const Params& params,
                           double trunc_factor) {
  return assemble_kernel(build_lattice(to_shape(shape), h, params), params, trunc_factor);
}

py::dict check_dict(const CheckResult& r) {
  py::dict d;
  d["lhs"] = r.lhs;
  d["rhs"] = r.rhs;
  d["slack"] = r.slack;
  d["holds"] = r.holds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete fractional p-Laplacian eigenvalues and spectral inequalities";

  static py::exception<Error> error_type(m, "FracpError", PyExc_RuntimeError);
  static py::exception<NotConverged> not_converged_type(m, "NotConverged", error_type.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NotConverged& e) {
      py::set_error(not_converged_type, e.what());
    } catch (const Error& e) {
      py::set_error(error_type, e.what());
    }
  });

  py::class_<Params>(m, "Params")
      .def(py::init([](double s, double p, int dim) {
             Params params{s, p, dim};
             validate(params);
             return params;
           }),
           py::arg("s") = 0.5, py::arg("p") = 2.0, py::arg("dim") = 1)
      .def_readwrite("s", &Params::s)
      .def_readwrite("p", &Params::p)
      .def_readwrite("dim", &Params::dim)
      .def("__repr__", [](const Params& p) {
        return "Params(s=" + std::to_string(p.s) + ", p=" + std::to_string(p.p) +
               ", dim=" + std::to_string(p.dim) + ")";
      });

  py::class_<Interval>(m, "Interval")
      .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Interval::lo)
      .def_readwrite("hi", &Interval::hi);
  py::class_<Ball>(m, "Ball")
      .def(py::init<std::vector<double>, double>(), py::arg("center"), py::arg("radius"))
      .def_readwrite("center", &Ball::center)
      .def_readwrite("radius", &Ball::radius);
  py::class_<Box>(m, "Box")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &Box::lo)
      .def_readwrite("hi", &Box::hi);

  py::class_<SolverOptions>(m, "SolverOptions")
      .def(py::init<>())
      .def_readwrite("max_iter", &SolverOptions::max_iter)
      .def_readwrite("grad_tol", &SolverOptions::grad_tol)
      .def_readwrite("step0", &SolverOptions::step0)
      .def_readwrite("armijo_c", &SolverOptions::armijo_c)
      .def_readwrite("path_nodes", &SolverOptions::path_nodes)
      .def_readwrite("path_iters", &SolverOptions::path_iters)
      .def_readwrite("seed", &SolverOptions::seed);

  py::class_<KernelOperator>(m, "Kernel")
      .def(py::init(&make_kernel), py::arg("shape"), py::arg("h"), py::arg("params"),
           py::arg("trunc_factor") = kDefaultTruncFactor)
      .def_property_readonly("size", &KernelOperator::size)
      .def_property_readonly("params", &KernelOperator::params)
      .def_property_readonly("trunc_radius", &KernelOperator::trunc_radius)
      .def_property_readonly("measure", [](const KernelOperator& K) { return K.domain().measure(); })
      .def_property_readonly("components",
                             [](const KernelOperator& K) { return K.domain().component_count(); })
      .def_property_readonly("coordinates",
                             [](const KernelOperator& K) {
                               Eigen::MatrixXd xy(static_cast<Eigen::Index>(K.size()), K.domain().dim());
                               for (std::size_t i = 0; i < K.size(); ++i) {
                                 for (int d = 0; d < K.domain().dim(); ++d) {
                                   xy(static_cast<Eigen::Index>(i), d) = K.domain().coordinate(i)[static_cast<std::size_t>(d)];
                                 }
                               }
                               return xy;
                             })
      .def_property_readonly("pair_weights", &KernelOperator::pair_weights)
      .def_property_readonly("ext_weights", &KernelOperator::ext_weights);

  py::class_<EigenResult>(m, "EigenResult")
      .def_readonly("lambda_", &EigenResult::lambda)
      .def_readonly("u", &EigenResult::u)
      .def_readonly("residual", &EigenResult::residual)
      .def_readonly("iterations", &EigenResult::iterations)
      .def_readonly("converged", &EigenResult::converged);

  m.def("energy", [](const KernelOperator& K, const GridFunction& u) { return gagliardo_energy(K, u).total; });
  m.def("energy_gradient", &energy_gradient);
  m.def("rayleigh_quotient", &rayleigh_quotient);
  m.def("normalize", py::overload_cast<const KernelOperator&, const GridFunction&>(&normalize));
  m.def("eigen_residual", &eigen_residual);
  m.def("solve_lambda1",
        [](const KernelOperator& K, const SolverOptions& o, std::optional<GridFunction> init) {
          py::gil_scoped_release release;
          return solve_lambda1(K, o, init);
        },
        py::arg("kernel"), py::arg("options") = SolverOptions{}, py::arg("initial") = py::none());
  m.def("solve_lambda2",
        [](const KernelOperator& K, const GridFunction& u1, const SolverOptions& o) {
          py::gil_scoped_release release;
          return solve_lambda2_path(K, u1, o);
        },
        py::arg("kernel"), py::arg("u1"), py::arg("options") = SolverOptions{});
  m.def("matrix_oracle_p2", &matrix_oracle_p2);
  m.def("loop_upper_bound", &loop_upper_bound, py::arg("kernel"), py::arg("u"), py::arg("grid") = 256);
  m.def("hidden_convexity_gap", &hidden_convexity_gap);

  m.def("faber_krahn",
        [](const std::vector<Primitive>& shape, double h, const Params& params, const SolverOptions& o) {
          const auto r = faber_krahn_check(build_lattice(to_shape(shape), h, params), params, o);
          py::dict d;
          d["lambda1"] = r.lambda1;
          d["ball_bound"] = r.ball_bound;
          d["margin"] = r.margin;
          d["holds"] = r.holds;
          return d;
        },
        py::arg("shape"), py::arg("h"), py::arg("params"), py::arg("options") = SolverOptions{});
  m.def("hks_sweep",
        [](double R, const std::vector<double>& distances, const Params& params, double h,
           const SolverOptions& o) {
          py::list rows;
          for (const auto& r : hks_sweep(R, distances, params, h, o)) {
            py::dict d;
            d["distance"] = r.distance;
            d["lambda2_union"] = r.lambda2_union;
            d["lambda1_ball"] = r.lambda1_ball;
            d["scaled_bound"] = r.scaled_bound;
            d["gap"] = r.gap;
            rows.append(d);
          }
          return rows;
        },
        py::arg("radius"), py::arg("distances"), py::arg("params"), py::arg("h"),
        py::arg("options") = SolverOptions{});

  m.def("j_p", &j_p);
  m.def("estimate_cp", &estimate_cp);
  m.def("check_split_power", [](double a, double b, double p, double cp) {
    return check_dict(check_split_power(a, b, p, cp));
  });
  m.def("check_odd_loop", [](double U, double V, double w1, double w2, double p) {
    return check_dict(check_odd_loop(U, V, w1, w2, p));
  });
  m.def("check_jp_strong_monotone",
        [](double a, double b, double p) { return check_dict(check_jp_strong_monotone(a, b, p)); });
  m.def("check_nodal_lower_bound",
        [](double a, double b, double p) { return check_dict(check_nodal_lower_bound(a, b, p)); });
  m.def("run_property_battery", [](std::uint64_t samples, std::uint64_t seed) {
    py::list out;
    for (const auto& s : run_property_battery(samples, seed)) {
      py::dict d;
      d["check"] = s.check;
      d["samples"] = s.samples;
      d["violations"] = s.violations;
      d["worst_slack"] = s.worst_slack;
      out.append(d);
    }
    return out;
  });
  m.def("set_num_threads", &set_num_threads);
}
