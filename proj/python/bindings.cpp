#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wignerchaos/error.hpp"
#include "wignerchaos/experiment.hpp"
#include "wignerchaos/io.hpp"
#include "wignerchaos/kernel.hpp"
#include "wignerchaos/moment.hpp"
#include "wignerchaos/pairing.hpp"
#include "wignerchaos/rmsim.hpp"

namespace py = pybind11;
using namespace wigner;

namespace {

using PairList = std::vector<std::pair<int, int>>;

std::vector<PairList> drain(PairingStream stream) {
    std::vector<PairList> out;
    while (auto pi = stream.next()) out.push_back(pi->pairs());
    return out;
}

StepKernel kernel_from_entries(int order, double delta, std::uint32_t cells,
                               const std::vector<std::pair<std::vector<CellIndex>, Complex>>& entries) {
    KernelBuilder b(order, Grid(delta, cells));
    for (const auto& [idx, v] : entries) b.add(idx, v);
    return std::move(b).build();
}

py::dict report_dict(const MomentReport& r) {
    py::list contributions;
    for (const auto& c : r.contributions) contributions.append(py::make_tuple(c.pairing.pairs(), c.value));
    py::dict d;
    d["total"] = r.total;
    d["engine"] = to_string(r.engine);
    d["word"] = r.word;
    d["blocks"] = r.block_structure.sizes();
    d["contributions"] = contributions;
    d["warnings"] = r.warnings;
    return d;
}

KernelFamily make_family(const std::string& name, int order, double rho) {
    switch (parse_family_kind(name)) {
        case FamilyKind::TensorSum: return KernelFamily::tensor_sum(order);
        case FamilyKind::CorrelatedPair: return KernelFamily::correlated_pair(order, rho);
        case FamilyKind::StaticBad: return KernelFamily::static_bad(order);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown family");
}

}  // namespace

PYBIND11_MODULE(_wignerchaos, m) {
    m.doc() = "Exact moments of multiple Wigner integrals with step kernels";
    py::register_exception<Error>(m, "WignerChaosError", PyExc_ValueError);

    py::class_<StepKernel>(m, "StepKernel")
        .def(py::init(&kernel_from_entries), py::arg("order"), py::arg("delta"), py::arg("cells"),
             py::arg("entries"), "entries: list of (index tuple, complex value); duplicates are summed")
        .def_static("from_json", [](const std::string& text) { return io::kernel_from_json(io::parse_json_text(text)); })
        .def("to_json", [](const StepKernel& f) { return io::kernel_to_json(f).dump(); })
        .def_property_readonly("order", &StepKernel::order)
        .def_property_readonly("delta", [](const StepKernel& f) { return f.grid().delta; })
        .def_property_readonly("cells", [](const StepKernel& f) { return f.grid().cells; })
        .def_property_readonly("nnz", &StepKernel::nnz)
        .def("coefficient", [](const StepKernel& f, const std::vector<CellIndex>& idx) { return f.coefficient(idx); })
        .def("norm", &StepKernel::norm)
        .def("__eq__", &StepKernel::operator==)
        .def("__repr__", [](const StepKernel& f) {
            return "StepKernel(order=" + std::to_string(f.order()) + ", cells=" + std::to_string(f.grid().cells) +
                   ", nnz=" + std::to_string(f.nnz()) + ")";
        });

    m.def("inner", &inner);
    m.def("adjoint", &adjoint);
    m.def("contract", &contract, py::arg("f"), py::arg("g"), py::arg("p"));
    m.def("full_contraction", &full_contraction);
    m.def("refine", &refine);
    m.def("is_mirror_symmetric", &is_mirror_symmetric, py::arg("f"), py::arg("tol") = kDefaultSymmetryTol);
    m.def("is_fully_symmetric", &is_fully_symmetric, py::arg("f"), py::arg("tol") = kDefaultSymmetryTol);

    m.def("enumerate_pairings", [](int n, bool nc) { return drain(nc ? enumerate_nc_pairings(n) : enumerate_pairings(n)); },
          py::arg("n"), py::arg("noncrossing") = false);
    m.def("enumerate_respectful",
          [](const std::vector<int>& sizes, bool nc) {
              const BlockStructure b(sizes);
              return drain(nc ? enumerate_respectful_nc(b) : enumerate_respectful(b));
          },
          py::arg("sizes"), py::arg("noncrossing") = true);
    m.def("is_noncrossing", [](const PairList& pairs) { return is_noncrossing(Pairing(pairs)); });
    m.def("is_connected", [](const PairList& pairs, const std::vector<int>& sizes) {
        return is_connected(Pairing(pairs), BlockStructure(sizes));
    });
    m.def("catalan", &catalan);

    m.def("pairing_integral",
          [](const std::vector<StepKernel>& ks, const PairList& pairs, bool naive) {
              return pairing_integral(ks, Pairing(pairs), naive ? Strategy::Naive : Strategy::Auto);
          },
          py::arg("kernels"), py::arg("pairs"), py::arg("naive") = false);
    m.def("free_joint_moment",
          [](const std::vector<StepKernel>& ks, const std::vector<int>& word, int jobs) {
              return report_dict(free_joint_moment({ks, word}, {Strategy::Auto, jobs}));
          },
          py::arg("kernels"), py::arg("word"), py::arg("jobs") = 1);
    m.def("classical_joint_moment",
          [](const std::vector<StepKernel>& ks, const std::vector<int>& word, int jobs) {
              return report_dict(classical_joint_moment({ks, word}, {Strategy::Auto, jobs}));
          },
          py::arg("kernels"), py::arg("word"), py::arg("jobs") = 1);
    m.def("semicircular_family_moment", [](const std::vector<std::vector<double>>& c, const std::vector<int>& w) {
        return semicircular_family_moment(CovarianceMatrix(c), w);
    });
    m.def("gaussian_family_moment", [](const std::vector<std::vector<double>>& c, const std::vector<int>& w) {
        return gaussian_family_moment(CovarianceMatrix(c), w);
    });
    m.def("semicircular_moment", &semicircular_moment, py::arg("t"), py::arg("order"));
    m.def("fourth_moment_gap", [](const StepKernel& f) { return fourth_moment_gap(f); });
    m.def("contraction_norms", &contraction_norms);

    m.def("family_kernels",
          [](const std::string& name, int order, int k, double rho) { return make_family(name, order, rho).kernels(k); },
          py::arg("family"), py::arg("order"), py::arg("k"), py::arg("rho") = 0.0);
    m.def("_run_experiment_json",
          [](const std::string& name, int order, double rho, const std::vector<int>& ks, const std::string& mode,
             int max_order) {
              const KernelFamily fam = make_family(name, order, rho);
              ConvergenceReport r;
              if (mode == "component") {
                  r = run_component_convergence(fam, ks);
              } else if (mode == "joint") {
                  r = run_joint_convergence({fam}, fam.limit_covariance(), ks, max_order);
              } else if (mode == "transfer") {
                  r = run_transfer_principle({fam}, ks, max_order);
              } else {
                  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + mode + "'");
              }
              return io::convergence_report_to_json(r).dump();
          });
    m.def("_simulate_json",
          [](const std::vector<std::vector<int>>& words, int dim, int samples, std::uint64_t seed,
             const std::vector<std::vector<double>>& cov, int jobs) {
              SimConfig cfg;
              cfg.dim = dim;
              cfg.samples = samples;
              cfg.seed = seed;
              cfg.jobs = jobs;
              cfg.covariance = CovarianceMatrix(cov);
              py::gil_scoped_release release;
              return io::empirical_moments_to_json(empirical_trace_moments(cfg, words), cfg).dump();
          });
}
