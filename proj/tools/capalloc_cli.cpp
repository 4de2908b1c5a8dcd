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


// capalloc: generate benchmarks, label and learn requirement models, run the
// benchmark study, and allocate and validate mission plans.
//
// Exit codes: 0 success, 1 domain error (bad data, infeasible problem,
// violated plan), 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capalloc/allocator.hpp"
#include "capalloc/bench.hpp"
#include "capalloc/io.hpp"
#include "capalloc/learner.hpp"

namespace fs = std::filesystem;
using namespace capalloc;

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GenBenchArgs {
  std::string case_name = "0";
  std::string spec_path;
  std::uint64_t seed = 0;
  std::string mode = "entire";
  std::size_t realization = 1;
  std::string out_dir;
};

struct LabelArgs {
  std::string raw_path;
  std::vector<double> thresholds;
  std::string direction = "at-most";
  bool stochastic = false;
  std::size_t draws = 5;
  double pass_fraction = 0.8;
  std::string out_path;
};

struct LearnArgs {
  std::string training_path;
  std::string sparsity_path;
  double alpha_a = 0.25;
  double alpha_b = 1.0;
  std::size_t threads = 0;
  std::string out_path;
  std::string report_path;
  bool report_timing = false;
};

struct BenchArgs {
  std::string case_name = "0";
  std::string spec_path;
  std::string mode = "random";
  std::size_t train_cap = 200;
  std::size_t realizations = 10;
  double sparsity_error = 0.0;
  std::uint64_t seed = 0;
  double alpha_a = 0.25;
  double alpha_b = 1.0;
  std::size_t threads = 0;
  bool omit_timing = false;
  std::string out_path;
};

struct AllocateArgs {
  std::string instance_path;
  std::string model_path;
  std::string out_path;
  bool strict = false;
  bool no_visit_bounds = false;
  std::size_t max_nodes = 1'000'000;
};

struct ValidateArgs {
  std::string instance_path;
  std::string plan_path;
  std::string model_path;
};

bench::TrainingMode parse_mode(const std::string& mode) {
  return mode == "entire" ? bench::TrainingMode::Entire : bench::TrainingMode::Random;
}

// --case N picks a predefined case; --case custom reads --spec.
bench::CaseSpec resolve_case(const std::string& name, const std::string& spec_path, std::string& label) {
  if (name == "custom") {
    if (spec_path.empty()) throw UsageError("--case custom needs --spec bench.json");
    label = "custom";
    return io::case_spec_from_json(io::read_json(spec_path));
  }
  if (!spec_path.empty()) throw UsageError("--spec is only valid with --case custom");
  std::size_t index = 0;
  try {
    std::size_t used = 0;
    index = std::stoul(name, &used);
    if (used != name.size()) throw std::invalid_argument(name);
  } catch (const std::logic_error&) {
    throw UsageError("--case must be 0-" + std::to_string(bench::kNumTableCases - 1) + " or custom");
  }
  if (index >= bench::kNumTableCases) {
    throw UsageError("--case must be 0-" + std::to_string(bench::kNumTableCases - 1) + " or custom");
  }
  label = name;
  return bench::table_case(index);
}

int run_gen_bench(const GenBenchArgs& a) {
  std::string label;
  auto spec = resolve_case(a.case_name, a.spec_path, label);
  spec.seed = a.seed;
  if (a.realization < 1) throw UsageError("--realization is 1-based");
  const auto inputs = bench::realization_inputs(spec, parse_mode(a.mode), 0.0, a.realization - 1);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  io::write_json(dir / "bench.json", io::to_json(spec));
  io::write_json(dir / "ground_truth.json",
                 io::to_json(io::ModelData{inputs.data.truth.A, inputs.data.truth.b, inputs.data.truth.sparsity}));
  io::write_json(dir / "sparsity.json", io::to_json(inputs.data.truth.sparsity));
  io::write_json(dir / "training.json", io::to_json(inputs.training, spec.num_agent_types));
  std::size_t samples = 0;
  for (const auto& t : inputs.training) samples += t.size();
  std::cout << "wrote case " << label << " realization " << a.realization << " (" << samples
            << " training samples) to " << dir.string() << "\n";
  return 0;
}

int run_label(const LabelArgs& a) {
  const auto raw_json = io::read_json(a.raw_path);
  const auto raw = io::raw_from_json(raw_json);
  if (a.thresholds.size() != 1 && a.thresholds.size() != raw.size()) {
    throw UsageError("--threshold takes one value or one per task (" + std::to_string(raw.size()) + ")");
  }
  const bool at_most = a.direction == "at-most";
  TrainingSet training(raw.size());
  const auto num_types = raw_json.value("num_agent_types", std::size_t{0});
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double f = a.thresholds.size() == 1 ? a.thresholds[0] : a.thresholds[i];
    for (const auto& r : raw[i]) {
      TrainingSample s{r.team, r.performance.value_or(0.0), false};
      if (a.stochastic) {
        if (r.draws.size() != a.draws) {
          throw io::FormatError("task " + std::to_string(i + 1) + ": every record needs " + std::to_string(a.draws) +
                                " draws");
        }
        std::vector<double> d = r.draws;
        double sign = at_most ? 1.0 : -1.0;
        for (auto& v : d) v *= sign;
        s.is_valid = bench::stochastic_label(d, sign * f, a.pass_fraction);
        double mean = 0.0;
        for (double v : r.draws) mean += v;
        s.performance = mean / static_cast<double>(r.draws.size());
      } else {
        if (!r.performance) {
          throw io::FormatError("task " + std::to_string(i + 1) + ": a record without \"performance\" needs --stochastic");
        }
        s.is_valid = at_most ? *r.performance <= f : *r.performance >= f;
      }
      training[i].push_back(std::move(s));
    }
  }
  io::write_json(a.out_path, io::to_json(training, num_types));
  std::size_t valid = 0, total = 0;
  for (const auto& t : training) {
    for (const auto& s : t) {
      valid += s.is_valid;
      ++total;
    }
  }
  std::cout << "labeled " << total << " records, " << valid << " valid\n";
  return 0;
}

SparsityPattern read_sparsity(const std::string& path) {
  const auto j = io::read_json(path);
  if (j.is_object() && j.contains("sparsity")) return io::model_from_json(j).sparsity;
  return io::sparsity_from_json(j);
}

int run_learn(const LearnArgs& a) {
  const auto training = io::training_from_json(io::read_json(a.training_path));
  const auto sparsity = read_sparsity(a.sparsity_path);
  LearnerConfig config;
  config.alpha_a = a.alpha_a;
  config.alpha_b = a.alpha_b;
  config.threads = a.threads;
  if (!(config.alpha_b > 0.0) || !(config.alpha_a >= 0.0)) throw UsageError("need --alpha-b > 0 and --alpha-a >= 0");
  const auto model = learn(training, sparsity, config);
  io::write_json(a.out_path, io::to_json(io::ModelData{model.A, model.b, sparsity}));
  if (!a.report_path.empty()) io::write_json(a.report_path, io::learn_report_json(model, a.report_timing));
  std::cout << "learned " << sparsity.num_capabilities() << " capabilities for " << sparsity.num_tasks()
            << " tasks, objective " << model.total_objective() << "\n";
  return 0;
}

int run_bench(const BenchArgs& a) {
  std::string label;
  auto spec = resolve_case(a.case_name, a.spec_path, label);
  spec.seed = a.seed;
  spec.random_train_cap = a.train_cap;
  spec.realizations = a.realizations;
  try {
    spec.validate();
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
  if (!(a.sparsity_error >= 0.0 && a.sparsity_error <= 0.5)) throw UsageError("--sparsity-error must lie in [0, 0.5]");
  bench::BenchOptions options;
  options.learner.alpha_a = a.alpha_a;
  options.learner.alpha_b = a.alpha_b;
  options.threads = a.threads;
  const auto report = bench::run_case(spec, parse_mode(a.mode), a.sparsity_error, options, label);
  std::ostringstream csv;
  bench::write_report_csv_header(csv);
  bench::write_report_csv_rows(csv, report, !a.omit_timing);
  io::write_file_atomic(a.out_path, csv.str());
  std::printf("case %s %s sparsity_error %.3g: %zu/%zu realizations, mean error %.4f (fp %.4f, fn %.4f), "
              "mean train %.4g s\n",
              label.c_str(), bench::to_string(report.mode), a.sparsity_error, report.num_ok(),
              report.realizations.size(), report.mean_error(), report.mean_false_positive(),
              report.mean_false_negative(), report.mean_train_seconds());
  for (const auto& r : report.realizations) {
    if (!r.ok) std::fprintf(stderr, "realization %zu failed: %s\n", r.realization + 1, r.failure.c_str());
  }
  return 0;
}

// The instance names its model; --model overrides it. Relative paths are
// taken from the instance file's directory.
AllocationInstance read_instance(const std::string& instance_path, const std::string& model_override) {
  const auto j = io::read_json(instance_path);
  fs::path model_path;
  if (!model_override.empty()) {
    model_path = model_override;
  } else {
    if (!j.is_object() || !j.contains("model") || !j["model"].is_string()) {
      throw io::FormatError("instance names no model; pass --model");
    }
    model_path = j["model"].get<std::string>();
    if (model_path.is_relative()) model_path = fs::path(instance_path).parent_path() / model_path;
  }
  const auto model = io::model_from_json(io::read_json(model_path));
  return io::instance_from_json(j, model);
}

int run_allocate(const AllocateArgs& a) {
  const auto instance = read_instance(a.instance_path, a.model_path);
  AllocationOptions options;
  options.integrality = a.strict ? IntegralityMode::Strict : IntegralityMode::Automatic;
  options.visit_bounds = !a.no_visit_bounds;
  options.branch_and_bound.max_nodes = a.max_nodes;
  const auto plan = solve_allocation(instance, options);
  io::write_json(a.out_path, io::to_json(instance, plan));
  std::printf("objective %.6g, mission time %.6g s, %zu nodes%s\n", plan.objective_value, plan.mission_time,
              plan.nodes_explored, plan.proven_optimal ? "" : " (node cap hit, not proven optimal)");
  for (const auto& r : plan.routes(instance)) std::cout << "  " << io::describe_route(instance, r) << "\n";
  return 0;
}

int run_validate(const ValidateArgs& a) {
  const auto instance = read_instance(a.instance_path, a.model_path);
  const auto plan = io::plan_from_json(io::read_json(a.plan_path), instance);
  const auto violations = validate_plan(instance, plan);
  std::cout << io::dump(io::to_json(violations));
  if (!violations.empty()) {
    std::fprintf(stderr, "capalloc: %zu violated constraints\n", violations.size());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn task requirements from team samples and allocate heterogeneous agent teams."};
  app.require_subcommand(1, 1);
  app.footer("Environment: CAPALLOC_THREADS caps worker threads (default: all cores).");

  GenBenchArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-bench", "Write ground truth, pools and labeled training data for one case.");
  gen_cmd->add_option("--case", gen.case_name, "Predefined case 0-7, or custom")->capture_default_str();
  gen_cmd->add_option("--spec", gen.spec_path, "bench.json for --case custom");
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  gen_cmd->add_option("--mode", gen.mode, "Training set: the entire pool or a random subset")
      ->check(CLI::IsMember({"entire", "random"}))
      ->capture_default_str();
  gen_cmd->add_option("--realization", gen.realization, "Realization number (1-based)")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();

  LabelArgs lab;
  auto* label_cmd = app.add_subcommand("label", "Turn raw performance records into labeled training data.");
  label_cmd->add_option("--training", lab.raw_path, "Raw records (training.json layout, labels ignored)")->required();
  label_cmd->add_option("--threshold", lab.thresholds, "Threshold f*, one value or one per task")->required();
  label_cmd->add_option("--direction", lab.direction, "Valid when performance is at-most or at-least f*")
      ->check(CLI::IsMember({"at-most", "at-least"}))
      ->capture_default_str();
  label_cmd->add_flag("--stochastic", lab.stochastic, "Label from repeated draws per record");
  label_cmd->add_option("--draws", lab.draws, "Draws per record in stochastic mode")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  label_cmd->add_option("--pass-fraction", lab.pass_fraction, "Fraction of draws that must pass")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  label_cmd->add_option("--out", lab.out_path, "Labeled training.json")->required();

  LearnArgs lrn;
  auto* learn_cmd = app.add_subcommand("learn", "Learn capabilities A and requirements b from positive samples.");
  learn_cmd->add_option("--training", lrn.training_path, "Labeled training.json")->required();
  learn_cmd->add_option("--sparsity", lrn.sparsity_path, "Sparsity pattern (sparsity.json or a model.json)")
      ->required();
  learn_cmd->add_option("--alpha-a", lrn.alpha_a, "Weight of the min-capability term")->capture_default_str();
  learn_cmd->add_option("--alpha-b", lrn.alpha_b, "Weight of the threshold term")->capture_default_str();
  learn_cmd->add_option("--threads", lrn.threads, "Worker threads (0 = default)")->capture_default_str();
  learn_cmd->add_option("--out", lrn.out_path, "model.json")->required();
  learn_cmd->add_option("--report", lrn.report_path, "Optional learn_report.json");
  learn_cmd->add_flag("--report-timing", lrn.report_timing, "Include solve times in the report");

  BenchArgs bch;
  auto* bench_cmd = app.add_subcommand("bench", "Run the prediction-error and timing study for one case.");
  bench_cmd->add_option("--case", bch.case_name, "Predefined case 0-7, or custom")->capture_default_str();
  bench_cmd->add_option("--spec", bch.spec_path, "bench.json for --case custom");
  bench_cmd->add_option("--mode", bch.mode, "Train on the entire pool or a random subset")
      ->check(CLI::IsMember({"entire", "random"}))
      ->capture_default_str();
  bench_cmd->add_option("--train-cap", bch.train_cap, "Samples per task in random mode")->capture_default_str();
  bench_cmd->add_option("--realizations", bch.realizations, "Number of realizations")->capture_default_str();
  bench_cmd->add_option("--sparsity-error", bch.sparsity_error, "Fraction of capability pattern entries flipped")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bch.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--alpha-a", bch.alpha_a, "Learner weight of the min-capability term")->capture_default_str();
  bench_cmd->add_option("--alpha-b", bch.alpha_b, "Learner weight of the threshold term")->capture_default_str();
  bench_cmd->add_option("--threads", bch.threads, "Concurrent realizations (0 = default)")->capture_default_str();
  bench_cmd->add_flag("--omit-timing", bch.omit_timing, "Write 0 for train_seconds so reruns are byte-identical");
  bench_cmd->add_option("--out", bch.out_path, "report.csv")->required();

  AllocateArgs alc;
  auto* alloc_cmd = app.add_subcommand("allocate", "Solve the team formation, routing and scheduling program.");
  alloc_cmd->add_option("--instance", alc.instance_path, "instance.json")->required();
  alloc_cmd->add_option("--model", alc.model_path, "model.json (overrides the instance's model path)");
  alloc_cmd->add_option("--out", alc.out_path, "plan.json")->required();
  alloc_cmd->add_flag("--strict", alc.strict, "Declare flows integral from the start");
  alloc_cmd->add_flag("--no-visit-bounds", alc.no_visit_bounds, "Omit the cycle-cutting visit rows");
  alloc_cmd->add_option("--max-nodes", alc.max_nodes, "Branch-and-bound node cap")->capture_default_str();

  ValidateArgs val;
  auto* validate_cmd = app.add_subcommand("validate", "Check a plan against every constraint; exit 0 iff valid.");
  validate_cmd->add_option("--instance", val.instance_path, "instance.json")->required();
  validate_cmd->add_option("--plan", val.plan_path, "plan.json")->required();
  validate_cmd->add_option("--model", val.model_path, "model.json (overrides the instance's model path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen_cmd) return run_gen_bench(gen);
    if (*label_cmd) return run_label(lab);
    if (*learn_cmd) return run_learn(lrn);
    if (*bench_cmd) return run_bench(bch);
    if (*alloc_cmd) return run_allocate(alc);
    if (*validate_cmd) return run_validate(val);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "capalloc: usage error: %s\n", e.what());
    return 2;
  } catch (const io::FormatError& e) {
    std::fprintf(stderr, "capalloc: bad input: %s\n", e.what());
    return 1;
  } catch (const AllocationFailed& e) {
    std::fprintf(stderr, "capalloc: allocation failed (%s): %s\n", lp::to_string(e.status), e.what());
    return 1;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "capalloc: domain error: %s\n", e.what());
    return 1;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "capalloc: invalid data: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "capalloc: error: %s\n", e.what());
    return 1;
  }
  return 2;
}
