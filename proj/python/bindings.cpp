// Python bindings. Matrices cross as complex numpy arrays, sequences as lists
// of them. Library errors surface as skewdirac.Error with a `code` attribute.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skewdirac/continuous.hpp"
#include "skewdirac/error.hpp"
#include "skewdirac/inverse_discrete.hpp"
#include "skewdirac/io.hpp"
#include "skewdirac/random.hpp"
#include "skewdirac/weyl_discrete.hpp"

namespace py = pybind11;
using namespace skewdirac;

namespace {

Index block_size(const std::vector<Matrix>& ms, Index divisor_cols) {
  if (ms.empty()) fail(ErrorCode::Validation, "empty sequence");
  return ms.front().cols() / divisor_cols;
}

BetaSequence to_beta(const std::vector<Matrix>& rows) {
  return BetaSequence{rows.empty() ? 1 : rows.front().rows(), rows};
}

DiscreteDiracSystem to_system(const std::vector<Matrix>& c) {
  return DiscreteDiracSystem{block_size(c, 2), c};
}

WeylTaylorData to_taylor(const std::vector<Matrix>& alpha) {
  return WeylTaylorData{block_size(alpha, 1), alpha};
}

py::dict diagnostics_dict(const InverseDiagnostics& d) {
  py::dict out;
  out["min_eigenvalue"] = d.min_eigenvalue;
  out["max_eigenvalue"] = d.max_eigenvalue;
  out["displacement_residual"] = d.displacement_residual;
  out["margin"] = d.margin;
  out["marginal"] = d.marginal;
  out["condition_numbers"] = d.condition_numbers;
  out["coisometry_defect"] = d.coisometry_defect;
  return out;
}

}  // namespace

PYBIND11_MODULE(_skewdirac, m) {
  m.doc() = "Forward and inverse spectral problems for skew-self-adjoint Dirac systems";

  static py::handle error_type = PyErr_NewException("skewdirac.Error", PyExc_RuntimeError, nullptr);
  m.attr("Error") = error_type;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  m.def(
      "system_from_beta", [](const std::vector<Matrix>& beta) { return system_from_beta(to_beta(beta)).c; },
      py::arg("beta"), "C_k = I - 2 beta(k)* beta(k) for coisometric p x 2p rows.");

  m.def(
      "beta_from_system", [](const std::vector<Matrix>& c) { return beta_from_system(to_system(c)).beta; },
      py::arg("c"), "Rows generating the coefficients, in the canonical gauge.");

  m.def(
      "taylor_from_beta", [](const std::vector<Matrix>& beta) { return taylor_from_system(to_beta(beta)).alpha; },
      py::arg("beta"), "Taylor coefficients alpha_0..alpha_n of the Weyl function.");

  m.def(
      "taylor_from_system",
      [](const std::vector<Matrix>& c) { return taylor_from_system(beta_from_system(to_system(c))).alpha; },
      py::arg("c"));

  m.def(
      "fundamental_solution",
      [](const std::vector<Matrix>& c, Complex lambda) { return fundamental_solution(to_system(c), lambda); },
      py::arg("c"), py::arg("lam"), "W_{n+1}(lambda).");

  m.def(
      "weyl_function",
      [](const std::vector<Matrix>& c, Complex lambda, std::optional<Matrix> r, std::optional<Matrix> q) {
        const DiscreteDiracSystem sys = to_system(c);
        const Index p = sys.p;
        const AdmissiblePair pair = AdmissiblePair::constant(r.value_or(Matrix::Zero(p, p)),
                                                             q.value_or(Matrix::Identity(p, p)));
        return weyl_eval(sys, pair, lambda);
      },
      py::arg("c"), py::arg("lam"), py::arg("r") = py::none(), py::arg("q") = py::none(),
      "phi(lambda) for the constant pair (R, Q); defaults R = 0, Q = I.");

  m.def(
      "solve_inverse",
      [](const std::vector<Matrix>& alpha, double invertibility) {
        InverseOptions options;
        options.invertibility = invertibility;
        const InverseResult r = solve_inverse(to_taylor(alpha), options);
        py::dict out;
        out["c"] = r.system.c;
        out["beta"] = r.beta.beta;
        out["s"] = r.snode.s();
        out["pi"] = r.snode.pi();
        out["diagnostics"] = diagnostics_dict(r.diagnostics);
        return out;
      },
      py::arg("alpha"), py::arg("invertibility") = 1e-10,
      "Recover the system from Taylor data. Returns c, beta, s, pi and diagnostics.");

  m.def(
      "classify_admissible",
      [](const std::vector<Matrix>& alpha, double threshold) {
        const Classification c = classify_admissible(to_taylor(alpha), threshold);
        return py::make_tuple(std::string(to_string(c.verdict)), c.margin);
      },
      py::arg("alpha"), py::arg("threshold") = 1e-10, "(verdict, margin) with verdict Weyl, Marginal or NotWeyl.");

  m.def(
      "random_beta",
      [](Index n, Index p, std::uint64_t seed, double margin) {
        Rng rng(seed);
        return random_beta_sequence(rng, n, p, margin).beta;
      },
      py::arg("n"), py::arg("p"), py::arg("seed") = 1, py::arg("margin") = 1e-3);

  m.def(
      "weyl_continuous",
      [](const std::vector<Matrix>& v, double l, Complex lambda) {
        PotentialGrid pot{block_size(v, 1), l, 0.0, v};
        for (const Matrix& x : v) pot.bound = std::max(pot.bound, spectral_norm(x));
        return weyl_continuous(pot, lambda);
      },
      py::arg("v"), py::arg("l"), py::arg("lam"),
      "Weyl function of the continuous system with v sampled on a uniform grid of [0, l].");

  m.def(
      "recover_potential",
      [](const std::vector<Matrix>& v, double l, Index intervals, double xi_max, double eta_offset) {
        PotentialGrid pot{block_size(v, 1), l, 0.0, v};
        for (const Matrix& x : v) pot.bound = std::max(pot.bound, spectral_norm(x));
        require_valid(pot);
        FourierOptions options;
        options.eta = 2.0 * pot.bound + eta_offset;
        options.xi_max = xi_max;
        const SKernelGrid sk = recover_s([&pot](Complex lambda) { return weyl_continuous(pot, lambda); },
                                         pot.bound, l, intervals, options);
        const Matrix s_op = build_S_operator(sk);
        py::dict out;
        out["tail_estimate"] = sk.tail_estimate;
        if (pot.p == 1) {
          const PotentialGrid rec = recover_potential_p1(recover_chi(sk, s_op));
          out["v"] = rec.v;
          const PotentialGrid resampled =
              make_potential(1, l, intervals, [&pot](double x) { return pot.at(x); });
          out["relative_l2_error"] = relative_l2_error(rec, resampled);
        } else {
          out["beta_gram"] = recover_beta_gram(sk, s_op);
        }
        return out;
      },
      py::arg("v"), py::arg("l"), py::arg("intervals"), py::arg("xi_max") = 400.0, py::arg("eta_offset") = 1.0,
      "Forward Weyl function of v, then recovery on `intervals` grid cells. Returns v and the relative L2 error "
      "for p = 1, beta*beta otherwise.");

  m.def("to_json_taylor", [](const std::vector<Matrix>& alpha) { return io::to_json(to_taylor(alpha)); },
        py::arg("alpha"));
  m.def("parse_taylor", [](const std::string& text) { return io::parse_taylor(text).alpha; }, py::arg("text"));
}
