#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nvgates/analysis.hpp"
#include "nvgates/cavity.hpp"
#include "nvgates/errors.hpp"
#include "nvgates/gates.hpp"
#include "nvgates/netlist.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace nvgates;

namespace {

GateKind gate_arg(const py::object& gate) {
  if (py::isinstance<GateKind>(gate)) return gate.cast<GateKind>();
  const auto name = gate.cast<std::string>();
  if (auto g = parse_gate_kind(name)) return *g;
  throw py::value_error("unknown gate '" + name + "'");
}

std::vector<AmplitudePair> spin_pairs(const std::vector<std::pair<Complex, Complex>>& spins) {
  std::vector<AmplitudePair> out;
  for (const auto& [a, b] : spins) out.push_back({a, b});
  return out;
}

py::list outcomes_to_list(const RunResult& result) {
  py::list out;
  for (const auto& o : result.outcomes) {
    out.append(py::dict("outcome"_a = o.outcome.label(), "probability"_a = o.probability,
                        "spins"_a = Eigen::VectorXcd(o.spins.amplitudes()), "empty"_a = o.empty));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Photon-mediated CNOT, Toffoli and Fredkin gates on NV-center spins";

  py::register_exception<NormalizationError>(m, "NormalizationError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ModeError>(m, "ModeError", PyExc_ValueError);
  py::register_exception<WiringError>(m, "WiringError", PyExc_ValueError);
  static py::handle netlist_error = py::exception<NetlistError>(m, "NetlistError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NetlistError& e) {
      py::object err = py::reinterpret_borrow<py::object>(netlist_error)(e.what());
      err.attr("kind") = std::string(to_string(e.kind()));
      err.attr("line") = e.line();
      err.attr("column") = e.column();
      PyErr_SetObject(netlist_error.ptr(), err.ptr());
    }
  });

  py::enum_<GateKind>(m, "Gate")
      .value("CNOT", GateKind::kCnot)
      .value("TOFFOLI", GateKind::kToffoli)
      .value("FREDKIN", GateKind::kFredkin);

  py::enum_<InputConvention>(m, "InputConvention")
      .value("BALANCED", InputConvention::kBalanced)
      .value("UNIFORM_RANDOM", InputConvention::kUniformRandom);

  py::enum_<FidelityNormalization>(m, "Normalization")
      .value("POSTSELECTED", FidelityNormalization::kPostselected)
      .value("UNNORMALIZED", FidelityNormalization::kUnnormalized)
      .value("COHERENT_OUTCOME_SUM", FidelityNormalization::kCoherentOutcomeSum);

  py::class_<ReflectionPair>(m, "ReflectionPair")
      .def(py::init<Complex, Complex>(), "hot"_a, "cold"_a)
      .def_readwrite("hot", &ReflectionPair::hot)
      .def_readwrite("cold", &ReflectionPair::cold)
      .def_static("ideal", &ReflectionPair::ideal)
      .def_static("resonant", &ReflectionPair::resonant, "r_hot"_a)
      .def("__repr__", [](const ReflectionPair& r) {
        return py::str("ReflectionPair(hot={!r}, cold={!r})").format(r.hot, r.cold).cast<std::string>();
      });

  m.def(
      "reflection_coefficient",
      [](double g, double kappa, double gamma, double cavity_detuning, double nv_detuning) {
        return reflection_coefficient(CavityParams{g, kappa, gamma, cavity_detuning, nv_detuning});
      },
      "g"_a, "kappa"_a, "gamma"_a, "cavity_detuning"_a = 0.0, "nv_detuning"_a = 0.0);
  m.def("resonant_reflection", &resonant_reflection, "coupling_ratio"_a);
  m.def("coupling_ratio_for_reflection", &coupling_ratio_for_reflection, "r_hot"_a);
  m.def(
      "kappa_from_quality_factor",
      [](double q, double wavelength_m, bool angular) {
        return kappa_from_quality_factor(q, wavelength_m,
                                         angular ? LinewidthConvention::kAngular : LinewidthConvention::kOrdinary);
      },
      "quality_factor"_a, "wavelength_m"_a, "angular"_a = false);

  m.def("fidelity_closed_form", [](const py::object& g, double r) { return fidelity_closed_form(gate_arg(g), r); },
        "gate"_a, "r"_a);
  m.def("efficiency_closed_form",
        [](const py::object& g, double r) { return efficiency_closed_form(gate_arg(g), r); }, "gate"_a, "r"_a);

  m.def(
      "fidelity_simulated",
      [](const py::object& g, const ReflectionPair& r, InputConvention input, int samples, std::uint64_t seed,
         FidelityNormalization normalization) {
        return fidelity_simulated(gate_arg(g), r, InputSpec{input, samples, seed}, normalization);
      },
      "gate"_a, "r"_a, "input"_a = InputConvention::kBalanced, "samples"_a = 200, "seed"_a = 2024,
      "normalization"_a = FidelityNormalization::kPostselected);
  m.def(
      "efficiency_simulated",
      [](const py::object& g, const ReflectionPair& r, InputConvention input, int samples, std::uint64_t seed) {
        return efficiency_simulated(gate_arg(g), r, InputSpec{input, samples, seed});
      },
      "gate"_a, "r"_a, "input"_a = InputConvention::kBalanced, "samples"_a = 200, "seed"_a = 2024);

  m.def(
      "sweep_csv",
      [](const std::vector<py::object>& gates, const std::vector<double>& ratios) {
        std::vector<GateKind> kinds;
        for (const auto& g : gates) kinds.push_back(gate_arg(g));
        return sweep_csv(sweep(kinds, ratios));
      },
      "gates"_a, "ratios"_a, "Resonant sweep over g/sqrt(kappa gamma) as CSV text.");
  m.def("linspace", &linspace, "lo"_a, "hi"_a, "steps"_a);

  m.def("ideal_unitary", [](const py::object& g) { return ideal_gate_unitary(gate_arg(g)).unitary; }, "gate"_a);
  m.def("gate_spin_count", [](const py::object& g) { return gate_spin_count(gate_arg(g)); }, "gate"_a);

  py::class_<Netlist>(m, "Netlist")
      .def_readonly("n_spins", &Netlist::n_spins)
      .def_readonly("modes", &Netlist::modes)
      .def_property_readonly("element_count", [](const Netlist& n) { return n.elements.size(); })
      .def_property_readonly("detectors",
                             [](const Netlist& n) {
                               std::vector<ModeLabel> out;
                               for (const auto& d : n.detectors) out.push_back(d.mode);
                               return out;
                             })
      .def_property_readonly("outcomes",
                             [](const Netlist& n) {
                               std::vector<std::string> out;
                               for (const auto& o : n.outcomes()) out.push_back(o.label());
                               return out;
                             })
      .def("serialize", &serialize_netlist)
      .def("__eq__", [](const Netlist& a, const Netlist& b) { return a == b; });

  m.def("parse_netlist", &parse_netlist, "text"_a);
  m.def("load_netlist", &load_netlist, "path"_a);
  m.def("gate_circuit", [](const py::object& g) { return build_gate_circuit(gate_arg(g)); }, "gate"_a);

  m.def(
      "run",
      [](const Netlist& net, const std::vector<std::pair<Complex, Complex>>& spins,
         std::optional<ReflectionPair> r, std::pair<Complex, Complex> photon) {
        const auto sources = net.source_modes();
        if (sources.size() != 1) throw py::value_error("netlist must have exactly one source mode");
        const auto pairs = spin_pairs(spins);
        const auto input = make_product_state(net.layout(), {photon.first, photon.second}, sources.front(), pairs);
        const auto result = run_netlist(net, input, r.value_or(ReflectionPair::ideal()));
        return py::dict("pre_detection_norm2"_a = result.pre_detection_norm2,
                        "undetected_probability"_a = result.undetected_probability,
                        "outcomes"_a = outcomes_to_list(result));
      },
      "netlist"_a, "spins"_a, "r"_a = py::none(),
      "photon"_a = std::pair<Complex, Complex>{kBalancedPair[0], kBalancedPair[1]},
      "Propagate a product input and enumerate detector outcomes. `spins` is one (a, b) pair per spin.");
}
