// Copyright 2026 The capalloc Authors
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


// Python bindings. Structured arguments and results use the same dict layout
// as the JSON files read and written by the command-line tool.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "capalloc/allocator.hpp"
#include "capalloc/bench.hpp"
#include "capalloc/io.hpp"
#include "capalloc/learner.hpp"
#include "capalloc/model.hpp"

namespace py = pybind11;
using namespace capalloc;

namespace {

io::Json to_native(const py::handle& value) {
  const auto text = py::module_::import("json").attr("dumps")(value).cast<std::string>();
  return io::Json::parse(text);
}

py::object to_python(const io::Json& value) { return py::module_::import("json").attr("loads")(value.dump()); }

bench::TrainingMode parse_mode(const std::string& mode) {
  if (mode == "random") return bench::TrainingMode::Random;
  if (mode == "entire") return bench::TrainingMode::Entire;
  throw ContractError("mode must be \"random\" or \"entire\"");
}

CapabilityMatrix capabilities(const std::vector<std::vector<double>>& rows) {
  return CapabilityMatrix(DenseMatrix::from_rows(rows));
}

py::object learn_py(const py::dict& training, const py::dict& sparsity, double alpha_a, double alpha_b,
                    std::size_t threads, bool report) {
  const auto set = io::training_from_json(to_native(training));
  const auto pattern = io::sparsity_from_json(to_native(sparsity));
  LearnerConfig config;
  config.alpha_a = alpha_a;
  config.alpha_b = alpha_b;
  config.threads = threads;
  LearnedModel model;
  {
    py::gil_scoped_release release;
    model = learn(set, pattern, config);
  }
  auto out = io::to_json(io::ModelData{model.A, model.b, pattern});
  if (report) out["report"] = io::learn_report_json(model, true);
  return to_python(out);
}

py::object allocate_py(const py::dict& instance, const py::dict& model, bool strict, bool visit_bounds,
                       std::size_t max_nodes) {
  const auto inst = io::instance_from_json(to_native(instance), io::model_from_json(to_native(model)));
  AllocationOptions options;
  options.integrality = strict ? IntegralityMode::Strict : IntegralityMode::Automatic;
  options.visit_bounds = visit_bounds;
  options.branch_and_bound.max_nodes = max_nodes;
  AllocationPlan plan;
  {
    py::gil_scoped_release release;
    plan = solve_allocation(inst, options);
  }
  return to_python(io::to_json(inst, plan));
}

py::object validate_py(const py::dict& instance, const py::dict& model, const py::dict& plan, double tolerance) {
  const auto inst = io::instance_from_json(to_native(instance), io::model_from_json(to_native(model)));
  return to_python(io::to_json(validate_plan(inst, io::plan_from_json(to_native(plan), inst), tolerance)));
}

py::object case_spec_py(std::size_t index) { return to_python(io::to_json(bench::table_case(index))); }

py::object realization_py(const py::dict& spec, const std::string& mode, double sparsity_error,
                          std::size_t realization) {
  const auto s = io::case_spec_from_json(to_native(spec));
  const auto inputs = bench::realization_inputs(s, parse_mode(mode), sparsity_error, realization);
  io::Json out = {
      {"ground_truth",
       io::to_json(io::ModelData{inputs.data.truth.A, inputs.data.truth.b, inputs.data.truth.sparsity})},
      {"sparsity", io::to_json(inputs.sparsity)},
      {"training", io::to_json(inputs.training, s.num_agent_types)}};
  return to_python(out);
}

py::object run_case_py(const py::dict& spec, const std::string& mode, double sparsity_error, double alpha_a,
                       double alpha_b, std::size_t threads, bool include_timing) {
  const auto s = io::case_spec_from_json(to_native(spec));
  bench::BenchOptions options;
  options.learner.alpha_a = alpha_a;
  options.learner.alpha_b = alpha_b;
  options.threads = threads;
  bench::BenchReport report;
  {
    py::gil_scoped_release release;
    report = bench::run_case(s, parse_mode(mode), sparsity_error, options);
  }
  std::ostringstream csv;
  bench::write_report_csv_header(csv);
  bench::write_report_csv_rows(csv, report, include_timing);
  py::dict out;
  out["num_ok"] = report.num_ok();
  out["mean_error"] = report.mean_error();
  out["mean_false_positive"] = report.mean_false_positive();
  out["mean_false_negative"] = report.mean_false_negative();
  out["mean_train_seconds"] = include_timing ? report.mean_train_seconds() : 0.0;
  out["csv"] = csv.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_capalloc, m) {
  m.doc() = "Capability-matrix learning and multi-agent task allocation";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  static py::exception<DomainError> domain_error(m, "DomainError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainError& e) {
      domain_error(e.what());
    }
  });

  m.def(
      "classify",
      [](const std::vector<Count>& team, const std::vector<std::vector<double>>& A, const std::vector<double>& b,
         double tolerance) { return classify(TeamConfiguration(team), capabilities(A), b, tolerance); },
      py::arg("team"), py::arg("A"), py::arg("b"), py::arg("tolerance") = kFeasibilityTolerance,
      "True iff A @ team >= b - tolerance elementwise.");
  m.def(
      "team_capability",
      [](const std::vector<Count>& team, const std::vector<std::vector<double>>& A) {
        return team_capability(TeamConfiguration(team), capabilities(A));
      },
      py::arg("team"), py::arg("A"), "Cumulative capability vector A @ team.");
  m.def("learn", &learn_py, py::arg("training"), py::arg("sparsity"), py::arg("alpha_a") = 0.25,
        py::arg("alpha_b") = 1.0, py::arg("threads") = 0, py::arg("report") = false,
        "Learn (A, b) from labeled teams; returns a model dict.");
  m.def("allocate", &allocate_py, py::arg("instance"), py::arg("model"), py::arg("strict") = false,
        py::arg("visit_bounds") = true, py::arg("max_nodes") = 1'000'000,
        "Solve the allocation MILP; returns a plan dict.");
  m.def("validate", &validate_py, py::arg("instance"), py::arg("model"), py::arg("plan"),
        py::arg("tolerance") = 1e-6, "List every constraint the plan violates.");
  m.def("table_case", &case_spec_py, py::arg("index"), "Benchmark case spec 0-7 as a dict.");
  m.def("realization", &realization_py, py::arg("spec"), py::arg("mode") = "random",
        py::arg("sparsity_error") = 0.0, py::arg("realization") = 0,
        "Ground truth, sparsity and training set of one benchmark realization (0-based).");
  m.def("run_case", &run_case_py, py::arg("spec"), py::arg("mode") = "random", py::arg("sparsity_error") = 0.0,
        py::arg("alpha_a") = 0.25, py::arg("alpha_b") = 1.0, py::arg("threads") = 0,
        py::arg("include_timing") = true, "Run every realization of a benchmark case.");
}
