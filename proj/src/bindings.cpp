// Copyright 2026 The hotspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hotspin/benchmark.hpp"
#include "hotspin/clifford.hpp"
#include "hotspin/errors.hpp"
#include "hotspin/hmm.hpp"
#include "hotspin/readout.hpp"
#include "hotspin/runner.hpp"
#include "hotspin/tomography.hpp"

namespace py = pybind11;
using namespace hotspin;
using nlohmann::json;

namespace {

json parse(const std::string& s) { return json::parse(s); }

}  // namespace

PYBIND11_MODULE(_hotspin, m) {
  m.doc() = "hotspin simulator core";

  py::register_exception<Error>(m, "HotspinError", PyExc_RuntimeError);

  m.def("experiment_kinds", &experiment_kinds);
  m.def("bundled_profile_names", &bundled_profile_names);
  m.def(
      "bundled_profile",
      [](const std::string& name) { return profile_to_json(bundled_profile(name)).dump(); },
      "Profile JSON text for a bundled name.");

  m.def(
      "run_experiment",
      [](const std::string& config_json, const std::string& base_dir) -> py::tuple {
        RunConfig cfg;
        try {
          cfg = RunConfig::from_json(parse(config_json), base_dir);
        } catch (const Error& e) {
          return py::make_tuple(int(kExitValidation),
                                error_json(kExitValidation, e.kind(), e.what()).dump(),
                                py::dict());
        }
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(cfg);
        }
        py::dict raw;
        for (const auto& [k, v] : r.raw) raw[py::str(k)] = py::bytes(v);
        return py::make_tuple(r.exit_code, r.report.dump(), raw);
      },
      py::arg("config_json"), py::arg("base_dir") = ".",
      "Runs one experiment in memory; returns (exit_code, report_json, raw_files).");

  m.def(
      "execute",
      [](const std::string& config_json, const std::string& out_dir, unsigned threads) {
        RunConfig cfg = RunConfig::from_json(parse(config_json));
        cfg.out_dir = out_dir;
        cfg.threads = threads;
        py::gil_scoped_release release;
        return execute(cfg);
      },
      py::arg("config_json"), py::arg("out_dir"), py::arg("threads") = 0);

  m.def("reproduce_table1", [](std::uint64_t seed, std::vector<std::string> profiles) {
    Table1Options o;
    if (!profiles.empty()) o.profiles = std::move(profiles);
    py::gil_scoped_release release;
    return reproduce_table1(o, seed).dump();
  });

  // Readout
  m.def(
      "readout_fidelity",
      [](const std::string& profile, int shots, std::uint64_t seed) {
        Stream rng(seed);
        const ReadoutFidelity f =
            estimate_readout_fidelity(ReadoutModel::from_profile(bundled_profile(profile)), shots, rng);
        py::dict d;
        d["f_charge"] = f.f_charge;
        d["f_even"] = f.f_even;
        d["f_odd"] = f.f_odd;
        d["se_charge"] = f.se_charge;
        d["se_even"] = f.se_even;
        d["se_odd"] = f.se_odd;
        return d;
      },
      py::arg("profile"), py::arg("shots"), py::arg("seed"));

  // HMM
  m.def(
      "simulate_chains",
      [](double p_init_even, double p_read_even, double p_read_odd, double p_eo, double p_oe,
         int n_chains, int n_reads, std::uint64_t seed) {
        Stream rng(seed);
        return simulate_chains(HmmModel::parity(p_init_even, p_read_even, p_read_odd, p_eo, p_oe),
                               n_chains, n_reads, rng)
            .chains;
      },
      py::arg("p_init_even"), py::arg("p_read_even"), py::arg("p_read_odd"),
      py::arg("p_even_to_odd"), py::arg("p_odd_to_even"), py::arg("n_chains"), py::arg("n_reads"),
      py::arg("seed"));
  m.def(
      "fit_spam",
      [](std::vector<std::vector<int>> chains, std::uint64_t seed, int restarts) {
        ChainData d;
        d.chains = std::move(chains);
        Stream rng(seed);
        SpamEstimate e;
        {
          py::gil_scoped_release release;
          e = fit_spam(d, rng, restarts);
        }
        return e.to_json().dump();
      },
      py::arg("chains"), py::arg("seed"), py::arg("restarts") = 10);
  m.def("chain_log_likelihood", [](const std::string& model_json, const std::vector<int>& chain) {
    return chain_log_likelihood(HmmModel::from_json(parse(model_json)), chain);
  });
  m.def("viterbi_path", [](const std::string& model_json, const std::vector<int>& chain) {
    return viterbi_path(HmmModel::from_json(parse(model_json)), chain);
  });

  // Groups and benchmarking
  m.def("clifford_group_size", [](int n_qubits) {
    return n_qubits == 1 ? CliffordGroup::one_qubit().size() : CliffordGroup::two_qubit().size();
  });
  m.def("clifford_gate_counts", [](int n_qubits) {
    const CliffordGroup& g = n_qubits == 1 ? CliffordGroup::one_qubit() : CliffordGroup::two_qubit();
    return py::make_tuple(g.avg_physical_1q(), g.avg_two_qubit());
  });
  m.def("ideal_gate_ptm", [](const std::string& name) { return Eigen::MatrixXd(ideal_gate_ptm(name)); });
  m.def("rb_fidelity", &rb_fidelity, py::arg("b"), py::arg("n_qubits"));

  // Tomography
  m.def("hamiltonian_generator", [](int k) { return Eigen::MatrixXd(hamiltonian_generator(k)); });
  m.def("stochastic_generator", [](int k) { return Eigen::MatrixXd(stochastic_generator(k)); });
  m.def("matrix_exp", [](const Eigen::MatrixXd& g) { return Eigen::MatrixXd(matrix_exp(Mat16(g))); });
  m.def("decompose_channel", [](const Eigen::MatrixXd& lambda) {
    return decompose_generator(error_generator(Mat16(lambda))).to_json().dump();
  });
  m.def(
      "cptp_project",
      [](const Eigen::MatrixXd& lambda, double tol) {
        return Eigen::MatrixXd(cptp_project(Mat16(lambda), tol));
      },
      py::arg("lambda_"), py::arg("tol") = 1e-9);
  m.def("avg_from_ent", &avg_from_ent, py::arg("f_ent"), py::arg("d") = 4);

  m.attr("REPORT_SCHEMA") = kReportSchema;
  m.attr("ERROR_SCHEMA") = kErrorSchema;
}
