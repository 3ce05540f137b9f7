#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xxz/eigensolver.hpp"
#include "xxz/entanglement.hpp"
#include "xxz/io.hpp"
#include "xxz/model.hpp"
#include "xxz/scan.hpp"
#include "xxz/state_analysis.hpp"

namespace py = pybind11;
using namespace xxz;

namespace {

FullStateVector state_from_array(const std::vector<double>& amplitudes) {
    FullStateVector f;
    std::size_t n = 0;
    while ((std::size_t{1} << n) < amplitudes.size()) ++n;
    if ((std::size_t{1} << n) != amplitudes.size()) {
        throw std::invalid_argument("amplitude array length must be a power of two");
    }
    f.n_sites = static_cast<int>(n);
    f.amplitudes = amplitudes;
    return f;
}

DensityMatrix rdm_from_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != 4 || m.cols() != 4) {
        throw std::invalid_argument("expected a 4x4 two-qubit density matrix");
    }
    DensityMatrix rho;
    rho.n_sub = 2;
    rho.entries = m;
    return rho;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact diagonalization and entanglement analysis of two-leg XXZ ladders";

    py::class_<LadderSpec>(m, "LadderSpec")
        .def(py::init([](int n_rungs, double j_leg, double j_rung, double delta) {
                 LadderSpec s;
                 s.n_rungs = n_rungs;
                 s.j_leg = j_leg;
                 s.j_rung = j_rung;
                 s.delta = delta;
                 s.validate();
                 return s;
             }),
             py::arg("n_rungs"), py::arg("j_leg"), py::arg("j_rung"), py::arg("delta"))
        .def_readonly("n_rungs", &LadderSpec::n_rungs)
        .def_readonly("j_leg", &LadderSpec::j_leg)
        .def_readonly("j_rung", &LadderSpec::j_rung)
        .def_readonly("delta", &LadderSpec::delta)
        .def_property_readonly("n_sites", &LadderSpec::n_sites);

    py::class_<SectorBasis>(m, "SectorBasis")
        .def_property_readonly("n_sites", &SectorBasis::n_sites)
        .def("__len__", &SectorBasis::size)
        .def("state", &SectorBasis::state, py::arg("rank"))
        .def("rank_of", &SectorBasis::rank_of, py::arg("mask"))
        .def_property_readonly("states", [](const SectorBasis& b) { return b.states(); });

    py::class_<SparseSymmetricMatrix>(m, "SparseSymmetricMatrix")
        .def_property_readonly("dim", [](const SparseSymmetricMatrix& h) { return h.dim; })
        .def_property_readonly("nnz", &SparseSymmetricMatrix::nnz)
        .def("apply",
             [](const SparseSymmetricMatrix& h, const std::vector<double>& x) {
                 return apply_hamiltonian(h, x);
             },
             py::arg("x"))
        .def("to_coo", [](const SparseSymmetricMatrix& h) {
            std::vector<std::size_t> rows;
            rows.reserve(h.nnz());
            for (std::size_t i = 0; i < h.dim; ++i) {
                for (std::size_t k = h.row_start[i]; k < h.row_start[i + 1]; ++k) rows.push_back(i);
            }
            return py::make_tuple(rows, h.col, h.val);
        });

    py::class_<GroundStateResult>(m, "GroundStateResult")
        .def_readonly("e0", &GroundStateResult::e0)
        .def_readonly("e1", &GroundStateResult::e1)
        .def_readonly("psi0", &GroundStateResult::psi0)
        .def_readonly("residual0", &GroundStateResult::residual0)
        .def_readonly("residual1", &GroundStateResult::residual1)
        .def_readonly("degenerate", &GroundStateResult::degenerate)
        .def_readonly("iterations", &GroundStateResult::iterations);

    py::class_<GgmResult>(m, "GgmResult")
        .def_readonly("value", &GgmResult::value)
        .def_readonly("lambda_max_sq", &GgmResult::lambda_max_sq)
        .def_readonly("restricted", &GgmResult::restricted)
        .def_property_readonly("argmax_mask",
                               [](const GgmResult& g) { return g.argmax_partition.part_a; });

    py::class_<ScanRecord>(m, "ScanRecord")
        .def_readonly("alpha", &ScanRecord::alpha)
        .def_readonly("delta", &ScanRecord::delta)
        .def_readonly("e0", &ScanRecord::e0)
        .def_readonly("e1", &ScanRecord::e1)
        .def_readonly("gap_per_spin", &ScanRecord::gap_per_spin)
        .def_readonly("q_leg", &ScanRecord::q_leg)
        .def_readonly("q_rung", &ScanRecord::q_rung)
        .def_readonly("cxx_leg", &ScanRecord::cxx_leg)
        .def_readonly("czz_leg", &ScanRecord::czz_leg)
        .def_readonly("cxx_rung", &ScanRecord::cxx_rung)
        .def_readonly("czz_rung", &ScanRecord::czz_rung)
        .def_readonly("ggm", &ScanRecord::ggm)
        .def_readonly("failed", &ScanRecord::failed)
        .def_property_readonly("degenerate",
                               [](const ScanRecord& r) { return r.degenerate.value_or(false); });

    m.def("site_index", &site_index, py::arg("spec"), py::arg("rung"), py::arg("leg"));
    m.def("enumerate_sector_basis", &enumerate_sector_basis, py::arg("n_sites"),
          py::arg("sz_total"));
    m.def("build_hamiltonian", &build_hamiltonian, py::arg("spec"), py::arg("basis"));

    m.def(
        "lanczos_extremal",
        [](const SparseSymmetricMatrix& h, double tol, int max_iter, std::uint64_t seed) {
            LanczosOptions opt;
            opt.tol = tol;
            opt.max_iter = max_iter;
            opt.seed = seed;
            return lanczos_extremal(h, opt);
        },
        py::arg("matrix"), py::arg("tol") = 1e-10, py::arg("max_iter") = 20000,
        py::arg("seed") = 12345);

    m.def("dense_eigenvalues", [](const SparseSymmetricMatrix& h) {
        return dense_eigensolve_oracle(h).eigenvalues;
    });

    m.def(
        "embed_to_full",
        [](const std::vector<double>& psi, const SectorBasis& basis) {
            return embed_to_full(psi, basis).amplitudes;
        },
        py::arg("psi_sector"), py::arg("basis"));

    m.def(
        "two_site_rdm",
        [](const std::vector<double>& amplitudes, int site_a, int site_b) {
            return two_site_rdm(state_from_array(amplitudes), site_a, site_b).entries;
        },
        py::arg("amplitudes"), py::arg("site_a"), py::arg("site_b"));

    m.def(
        "partial_trace",
        [](const std::vector<double>& amplitudes, std::uint32_t kept_mask) {
            return partial_trace(state_from_array(amplitudes), kept_mask).entries;
        },
        py::arg("amplitudes"), py::arg("kept_sites_mask"));

    m.def(
        "spin_correlation",
        [](const std::vector<double>& amplitudes, int site_i, int site_j, const std::string& axis) {
            Axis ax;
            if (axis == "x") ax = Axis::x;
            else if (axis == "y") ax = Axis::y;
            else if (axis == "z") ax = Axis::z;
            else throw std::invalid_argument("axis must be x, y or z");
            return spin_correlation(state_from_array(amplitudes), site_i, site_j, ax);
        },
        py::arg("amplitudes"), py::arg("site_i"), py::arg("site_j"), py::arg("axis"));

    m.def("concurrence",
          [](const Eigen::MatrixXd& rho) { return concurrence(rdm_from_matrix(rho)); },
          py::arg("rho"));

    m.def(
        "ggm",
        [](const std::vector<double>& amplitudes, std::optional<int> restriction, int workers) {
            return ggm(state_from_array(amplitudes), restriction, workers);
        },
        py::arg("amplitudes"), py::arg("restriction") = std::nullopt, py::arg("workers") = 1);

    m.def(
        "evaluate_point",
        [](int n_rungs, const std::string& mode, double alpha, double delta,
           const std::string& observables, double tol, std::uint64_t seed, int workers) {
            const ScanMode m_ = scan_mode_from_string(mode);
            const LadderSpec spec = couplings_from_point(n_rungs, m_, alpha, delta);
            LanczosOptions solver;
            solver.tol = tol;
            solver.seed = seed;
            return evaluate_point(spec, parse_observables(observables), solver, m_, alpha, delta,
                                  nullptr, workers);
        },
        py::arg("n_rungs"), py::arg("mode"), py::arg("alpha"), py::arg("delta"),
        py::arg("observables") = "all", py::arg("tol") = 1e-10, py::arg("seed") = 12345,
        py::arg("workers") = 1);

    m.def(
        "run_phase_scan",
        [](int n_rungs, const std::string& mode, double alpha_min, double alpha_max,
           int alpha_steps, double delta_min, double delta_max, int delta_steps,
           const std::string& observables, double tol, std::uint64_t seed, int workers) {
            ScanConfig cfg;
            cfg.n_rungs = n_rungs;
            cfg.mode = scan_mode_from_string(mode);
            cfg.alpha = {alpha_min, alpha_max, alpha_steps};
            cfg.delta = {delta_min, delta_max, delta_steps};
            cfg.observables = parse_observables(observables);
            cfg.solver.tol = tol;
            cfg.solver.seed = seed;
            cfg.workers = workers;
            return run_phase_scan(cfg);
        },
        py::arg("n_rungs"), py::arg("mode"), py::arg("alpha_min"), py::arg("alpha_max"),
        py::arg("alpha_steps"), py::arg("delta_min"), py::arg("delta_max"), py::arg("delta_steps"),
        py::arg("observables") = "all", py::arg("tol") = 1e-10, py::arg("seed") = 12345,
        py::arg("workers") = 1);

    m.def("records_to_csv", &csv_to_string, py::arg("records"));
}
