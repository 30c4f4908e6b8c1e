#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <vector>

#include "fracback/caputo.hpp"
#include "fracback/error.hpp"
#include "fracback/experiment.hpp"
#include "fracback/inverse.hpp"
#include "fracback/mesh.hpp"

namespace py = pybind11;
using namespace fracback;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const std::vector<double>& v) {
    Array a(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

double grading_or_default(std::optional<double> r, double alpha) { return r ? *r : default_grading(alpha); }

py::dict report_dict(const ErrorReport& r) {
    py::dict d;
    d["alpha"] = r.alpha;
    d["N"] = r.N;
    d["M"] = r.M;
    d["r"] = r.r;
    d["lambda"] = r.lambda;
    d["delta"] = r.delta;
    d["seed"] = r.seed;
    d["E_u0_inf"] = r.e_u0_inf;
    d["E_u0_2"] = r.e_u0_2;
    d["E_psi_inf"] = r.e_psi_inf;
    d["E_psi_2"] = r.e_psi_2;
    d["E_psi_clean_inf"] = r.e_psi_clean_inf;
    d["E_psi_clean_2"] = r.e_psi_clean_2;
    d["wall_seconds"] = r.wall_seconds;
    return d;
}

py::list reports(const std::vector<ErrorReport>& rows) {
    py::list out;
    for (const auto& r : rows) out.append(report_dict(r));
    return out;
}

MeshPolicy policy(std::optional<double> r, bool companion) {
    MeshPolicy p;
    p.grading = r;
    p.uniform_companion = companion;
    return p;
}

py::dict forward(double alpha, std::size_t N, std::size_t M, std::optional<double> r, double l, double T,
                 bool zero_data) {
    const ManufacturedCase mc{alpha, l, T};
    ProblemConfig cfg = mc.problem(N, M, grading_or_default(r, alpha));
    StateVector u0(cfg.interior(), 0.0);
    if (zero_data) {
        cfg.source = nullptr;
    } else {
        u0 = sample_interior(cfg.grid, [&](double x) { return mc.u0(x); });
    }
    std::optional<Trajectory> traj;
    {
        py::gil_scoped_release release;
        traj.emplace(solve_forward(cfg, u0));
    }
    py::array_t<double> u({static_cast<py::ssize_t>(M + 1), static_cast<py::ssize_t>(N + 1)});
    auto view = u.mutable_unchecked<2>();
    for (std::size_t k = 0; k <= M; ++k) {
        view(k, 0) = 0.0;
        view(k, N) = 0.0;
        const auto s = traj->state(k);
        for (std::size_t i = 0; i < s.size(); ++i) view(k, i + 1) = s[i];
    }
    py::dict d;
    d["t"] = to_array(cfg.mesh.times());
    d["x"] = to_array(cfg.grid.nodes());
    d["u"] = u;
    return d;
}

py::dict reconstruct_case(std::optional<Array> psi, double alpha, std::size_t N, std::size_t M,
                          std::optional<double> r, double lambda, double delta, std::uint64_t seed, double l, double T,
                          unsigned jobs) {
    const ManufacturedCase mc{alpha, l, T};
    const ProblemConfig cfg = mc.problem(N, M, grading_or_default(r, alpha));
    StateVector clean;
    ReconstructOptions opts;
    opts.jobs = jobs;
    if (psi) {
        clean = to_vector(*psi);
        if (clean.size() != cfg.interior()) {
            throw std::invalid_argument("psi must hold the N-1 interior values");
        }
    } else {
        clean = sample_interior(cfg.grid, [&](double x) { return mc.psi(x); });
        opts.reference_u0 = sample_interior(cfg.grid, [&](double x) { return mc.u0(x); });
    }
    const StateVector measured = add_noise(clean, {delta, seed});
    ReconstructionResult res;
    {
        py::gil_scoped_release release;
        res = reconstruct(measured, cfg, lambda, opts);
    }
    py::dict d;
    std::vector<double> x(cfg.grid.nodes().begin() + 1, cfg.grid.nodes().end() - 1);
    d["x"] = to_array(x);
    d["u0_hat"] = to_array(res.u0_hat);
    d["psi_measured"] = to_array(measured);
    d["psi_hat"] = to_array(res.psi_hat);
    d["E_psi_inf"] = res.psi_error.inf;
    d["E_psi_2"] = res.psi_error.l2h;
    d["condition_number"] = res.condition_number;
    if (res.u0_error) {
        d["u0_exact"] = to_array(*opts.reference_u0);
        d["E_u0_inf"] = res.u0_error->inf;
        d["E_u0_2"] = res.u0_error->l2h;
    }
    return d;
}

py::dict oracle(double alpha, std::size_t modes, std::size_t fine_M, std::size_t N, std::size_t M,
                std::optional<double> r, double lambda, double l, double T, unsigned jobs) {
    const ManufacturedCase mc{alpha, l, T};
    OracleCheck check;
    {
        py::gil_scoped_release release;
        check = run_oracle_check(mc, modes, fine_M, N, M, grading_or_default(r, alpha), lambda, jobs);
    }
    py::list rows;
    for (const auto& row : check.rows) {
        py::dict d;
        d["k"] = row.k;
        d["lambda_k"] = row.lambda_k;
        d["A_k_T"] = row.A_k_T;
        d["B_k_T"] = row.B_k_T;
        d["u0_k_oracle"] = row.u0_k_oracle;
        d["u0_k_fd"] = row.u0_k_fd;
        rows.append(d);
    }
    py::dict d;
    d["rows"] = rows;
    d["gronwall_floor"] = check.gronwall_floor;
    d["relative_gap_l2h"] = check.relative_gap_l2h;
    d["all_positive"] = check.all_positive();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Time-fractional pseudo-parabolic forward solver and backward reconstruction";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<CacheMismatch>(m, "CacheMismatch", PyExc_RuntimeError);

    m.def("gamma", &gamma_function, py::arg("z"));
    m.def("default_grading", &default_grading, py::arg("alpha"));
    m.def(
        "graded_times", [](double T, std::size_t M, double r) { return to_array(TimeMesh(T, M, r).times()); },
        py::arg("T"), py::arg("M"), py::arg("r"));
    m.def(
        "add_noise",
        [](const Array& psi, double delta, std::uint64_t seed) {
            return to_array(add_noise(to_vector(psi), {delta, seed}));
        },
        py::arg("psi"), py::arg("delta"), py::arg("seed") = 42);

    m.def("forward", &forward, py::arg("alpha") = 0.5, py::arg("N") = 100, py::arg("M") = 100,
          py::arg("r") = py::none(), py::arg("l") = 1.0, py::arg("T") = 1.0, py::arg("zero_data") = false,
          "Manufactured forward solve; returns t, x and u with shape (M+1, N+1).");
    m.def("reconstruct", &reconstruct_case, py::arg("psi") = py::none(), py::arg("alpha") = 0.5,
          py::arg("N") = 100, py::arg("M") = 100, py::arg("r") = py::none(), py::arg("lambda_") = 1e-10,
          py::arg("delta") = 0.0, py::arg("seed") = 42, py::arg("l") = 1.0, py::arg("T") = 1.0,
          py::arg("jobs") = 0,
          "Recovers u0 from interior terminal data; psi defaults to the manufactured one.");
    m.def(
        "table1",
        [](const std::vector<double>& alphas, const std::vector<std::size_t>& grids, double lambda,
           std::optional<double> r, bool companion, unsigned jobs) {
            std::vector<ErrorReport> rows;
            {
                py::gil_scoped_release release;
                rows = run_table1(alphas, grids, lambda, policy(r, companion), jobs);
            }
            return reports(rows);
        },
        py::arg("alphas"), py::arg("grids"), py::arg("lambda_") = 1e-10, py::arg("r") = py::none(),
        py::arg("companion") = true, py::arg("jobs") = 0);
    m.def(
        "table2",
        [](const std::vector<double>& alphas, const std::vector<double>& deltas, std::size_t N, std::size_t M,
           double lambda, std::uint64_t seed, std::optional<double> r, bool companion, unsigned jobs) {
            std::vector<ErrorReport> rows;
            {
                py::gil_scoped_release release;
                rows = run_table2(alphas, deltas, N, M, lambda, seed, policy(r, companion), jobs);
            }
            return reports(rows);
        },
        py::arg("alphas"), py::arg("deltas"), py::arg("N") = 100, py::arg("M") = 100, py::arg("lambda_") = 1e-6,
        py::arg("seed") = 42, py::arg("r") = py::none(), py::arg("companion") = true, py::arg("jobs") = 0);
    m.def("oracle_check", &oracle, py::arg("alpha") = 0.5, py::arg("modes") = 20, py::arg("fine_M") = 10000,
          py::arg("N") = 200, py::arg("M") = 200, py::arg("r") = py::none(), py::arg("lambda_") = 1e-10,
          py::arg("l") = 1.0, py::arg("T") = 1.0, py::arg("jobs") = 0);
}
