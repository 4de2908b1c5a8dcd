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


#include "capalloc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace capalloc::io {

namespace {

void emit(const Json& v, std::string& out, int depth);

void emit_number(const Json& v, std::string& out) {
  if (v.is_number_unsigned()) {
    out += std::to_string(v.get<std::uint64_t>());
  } else if (v.is_number_integer()) {
    out += std::to_string(v.get<std::int64_t>());
  } else {
    double d = v.get<double>();
    if (!std::isfinite(d)) {
      out += "null";
      return;
    }
    if (d == 0.0) d = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", d);
    out += buf;
  }
}

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(2 * depth), ' '); }

void emit(const Json& v, std::string& out, int depth) {
  switch (v.type()) {
    case Json::value_t::null: out += "null"; return;
    case Json::value_t::boolean: out += v.get<bool>() ? "true" : "false"; return;
    case Json::value_t::string: out += v.dump(); return;
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned:
    case Json::value_t::number_float: emit_number(v, out); return;
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(v.begin(), v.end(), is_scalar);
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) {
          out += '\n';
          indent(out, depth + 1);
        }
        emit(item, out, depth + 1);
      }
      if (!flat) {
        out += '\n';
        indent(out, depth);
      }
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += '\n';
        indent(out, depth + 1);
        out += Json(key).dump();
        out += ": ";
        emit(item, out, depth + 1);
      }
      out += '\n';
      indent(out, depth);
      out += '}';
      return;
    }
    default: throw ContractError("cannot serialize this JSON value");
  }
}

const Json& field(const Json& object, const char* key) {
  if (!object.is_object()) throw FormatError("expected a JSON object holding \"" + std::string(key) + "\"");
  const auto it = object.find(key);
  if (it == object.end()) throw FormatError("missing field \"" + std::string(key) + "\"");
  return *it;
}

template <typename T>
T get(const Json& object, const char* key) {
  try {
    return field(object, key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError("field \"" + std::string(key) + "\": " + e.what());
  }
}

// null stands for +infinity.
double get_limit(const Json& value) {
  return value.is_null() ? std::numeric_limits<double>::infinity() : value.get<double>();
}

Json limit_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

DenseMatrix matrix_from(const Json& value, std::size_t rows, std::size_t cols, const char* what) {
  if (!value.is_array() || value.size() != rows) {
    throw FormatError(std::string(what) + " must have " + std::to_string(rows) + " rows");
  }
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!value[r].is_array() || value[r].size() != cols) {
      throw FormatError(std::string(what) + " rows must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = value[r][c].get<double>();
  }
  return m;
}

Json matrix_json(const DenseMatrix& m) { return Json(m.to_rows()); }

std::vector<IndexPair> pairs_from(const Json& value, std::size_t first_limit, std::size_t second_limit,
                                  const char* what) {
  std::vector<IndexPair> out;
  if (!value.is_array()) throw FormatError(std::string(what) + " must be a list of index pairs");
  for (const auto& p : value) {
    if (!p.is_array() || p.size() != 2) throw FormatError(std::string(what) + " entries must be pairs");
    const auto a = p[0].get<std::int64_t>();
    const auto b = p[1].get<std::int64_t>();
    if (a < 1 || b < 1 || static_cast<std::size_t>(a) > first_limit || static_cast<std::size_t>(b) > second_limit) {
      throw FormatError(std::string(what) + " index out of range");
    }
    out.emplace_back(static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1));
  }
  return out;
}

Json pairs_json(const std::vector<IndexPair>& pairs) {
  Json out = Json::array();
  for (const auto& [a, b] : pairs) out.push_back({a + 1, b + 1});
  return out;
}

SparsityPattern sparsity_with_dims(const Json& value, std::size_t C, std::size_t K, std::size_t M) {
  return SparsityPattern::from_positive_sets(C, K, M, pairs_from(field(value, "A1"), C, K, "A1"),
                                             pairs_from(field(value, "B1"), C, M, "B1"));
}

// Runs a parser, reporting library contract errors and JSON type errors as
// format errors of the file being read.
template <typename F>
auto parsing(const char* what, F&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const FormatError&) {
    throw;
  } catch (const ContractError& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const Json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

TeamConfiguration team_from(const Json& value, std::size_t num_types) {
  if (!value.is_array() || value.size() != num_types) {
    throw FormatError("team must list " + std::to_string(num_types) + " agent counts");
  }
  std::vector<Count> counts;
  for (const auto& c : value) {
    const auto n = c.get<std::int64_t>();
    if (n < 0) throw FormatError("team counts must be nonnegative");
    counts.push_back(static_cast<Count>(n));
  }
  return TeamConfiguration(std::move(counts));
}

Json team_json(const TeamConfiguration& team) {
  return Json(std::vector<Count>(team.counts().begin(), team.counts().end()));
}

std::vector<DenseMatrix> cube_from(const Json& value, std::size_t K, std::size_t N, const char* what) {
  if (!value.is_array() || value.size() != K) {
    throw FormatError(std::string(what) + " needs one matrix per agent type");
  }
  std::vector<DenseMatrix> out;
  for (const auto& m : value) out.push_back(matrix_from(m, N, N, what));
  return out;
}

template <typename T>
EdgeTensor<T> tensor_from(const Json& value, std::size_t K, std::size_t N, const char* what) {
  EdgeTensor<T> out(K, std::vector<std::vector<T>>(N, std::vector<T>(N, 0)));
  const auto cube = cube_from(value, K, N, what);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        const double v = cube[k](i, j);
        if (v < 0 || v != std::floor(v)) throw FormatError(std::string(what) + " entries must be nonnegative integers");
        out[k][i][j] = static_cast<T>(v);
      }
    }
  }
  return out;
}

std::string node_name(const AllocationInstance& instance, std::size_t node) {
  if (node == instance.start_node()) return "s";
  if (node == instance.terminal_node()) return "u";
  return std::to_string(node + 1);
}

}  // namespace

std::string dump(const Json& value) {
  std::string out;
  emit(value, out, 0);
  out += '\n';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError("cannot write " + tmp.string());
    f << contents;
    f.flush();
    if (!f) throw FormatError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FormatError("cannot move output into place at " + path.string());
  }
}

void write_json(const std::filesystem::path& path, const Json& value) { write_file_atomic(path, dump(value)); }

Json read_json(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json to_json(const SparsityPattern& pattern) {
  return {{"num_capabilities", pattern.num_capabilities()},
          {"num_agent_types", pattern.num_agent_types()},
          {"num_tasks", pattern.num_tasks()},
          {"A1", pairs_json(pattern.positive_capabilities())},
          {"B1", pairs_json(pattern.positive_requirements())}};
}

SparsityPattern sparsity_from_json(const Json& value) {
  return parsing("sparsity", [&] {
    return sparsity_with_dims(value, get<std::size_t>(value, "num_capabilities"),
                              get<std::size_t>(value, "num_agent_types"), get<std::size_t>(value, "num_tasks"));
  });
}

Json to_json(const ModelData& model) {
  return {{"num_agent_types", model.A.num_agent_types()},
          {"num_capabilities", model.A.num_capabilities()},
          {"num_tasks", model.b.num_tasks()},
          {"A", matrix_json(model.A.values())},
          {"b", matrix_json(model.b.values())},
          {"sparsity",
           {{"A1", pairs_json(model.sparsity.positive_capabilities())},
            {"B1", pairs_json(model.sparsity.positive_requirements())}}}};
}

ModelData model_from_json(const Json& value) {
  return parsing("model", [&] {
    const auto K = get<std::size_t>(value, "num_agent_types");
    const auto C = get<std::size_t>(value, "num_capabilities");
    const auto M = get<std::size_t>(value, "num_tasks");
    ModelData out;
    out.A = CapabilityMatrix(matrix_from(field(value, "A"), C, K, "A"));
    out.b = RequirementSet(matrix_from(field(value, "b"), M, C, "b"));
    out.sparsity = sparsity_with_dims(field(value, "sparsity"), C, K, M);
    return out;
  });
}

Json learn_report_json(const LearnedModel& model, bool include_timing) {
  Json rows = Json::array();
  for (std::size_t c = 0; c < model.reports.size(); ++c) {
    const auto& r = model.reports[c];
    Json row = {{"capability", c + 1},
                {"objective", r.objective},
                {"status", lp::to_string(r.status)},
                {"num_variables", r.num_variables},
                {"num_sample_constraints", r.num_sample_constraints},
                {"num_active_constraints", r.num_active_constraints},
                {"rounds", r.rounds},
                {"closed_form", r.closed_form}};
    if (include_timing) row["solve_milliseconds"] = r.solve_milliseconds;
    rows.push_back(std::move(row));
  }
  return {{"capabilities", std::move(rows)}, {"total_objective", model.total_objective()}};
}

Json to_json(const TrainingSet& training, std::size_t num_agent_types) {
  Json tasks = Json::array();
  for (const auto& samples : training) {
    Json list = Json::array();
    for (const auto& s : samples) {
      list.push_back({{"team", team_json(s.team)}, {"performance", s.performance}, {"valid", s.is_valid}});
    }
    tasks.push_back(std::move(list));
  }
  return {{"num_agent_types", num_agent_types}, {"num_tasks", training.size()}, {"tasks", std::move(tasks)}};
}

TrainingSet training_from_json(const Json& value) {
  return parsing("training", [&] {
    const auto K = get<std::size_t>(value, "num_agent_types");
    const auto& tasks = field(value, "tasks");
    if (!tasks.is_array()) throw FormatError("\"tasks\" must be a list of sample lists");
    if (value.contains("num_tasks") && value["num_tasks"].get<std::size_t>() != tasks.size()) {
      throw FormatError("\"num_tasks\" disagrees with the task list");
    }
    TrainingSet out;
    for (const auto& list : tasks) {
      auto& samples = out.emplace_back();
      for (const auto& s : list) {
        TrainingSample sample;
        sample.team = team_from(field(s, "team"), K);
        sample.performance = s.value("performance", 0.0);
        sample.is_valid = s.value("valid", false);
        samples.push_back(std::move(sample));
      }
    }
    return out;
  });
}

RawSet raw_from_json(const Json& value) {
  return parsing("raw records", [&] {
    const auto K = get<std::size_t>(value, "num_agent_types");
    const auto& tasks = field(value, "tasks");
    if (!tasks.is_array()) throw FormatError("\"tasks\" must be a list of record lists");
    RawSet out;
    for (const auto& list : tasks) {
      auto& records = out.emplace_back();
      for (const auto& r : list) {
        RawRecord record;
        record.team = team_from(field(r, "team"), K);
        if (r.contains("draws")) record.draws = r["draws"].get<std::vector<double>>();
        if (r.contains("performance")) {
          record.performance = r["performance"].get<double>();
        } else if (record.draws.empty()) {
          throw FormatError("record needs \"performance\" or \"draws\"");
        }
        records.push_back(std::move(record));
      }
    }
    return out;
  });
}

Json to_json(const bench::CaseSpec& spec) {
  return {{"num_tasks", spec.num_tasks},
          {"num_agent_types", spec.num_agent_types},
          {"num_capabilities", spec.num_capabilities},
          {"per_type_count", spec.per_type_count},
          {"mean_pool_size", spec.mean_pool_size},
          {"random_train_cap", spec.random_train_cap},
          {"realizations", spec.realizations},
          {"seed", spec.seed},
          {"capability_density", spec.capability_density},
          {"requirement_density", spec.requirement_density},
          {"quantile_low", spec.quantile_low},
          {"quantile_high", spec.quantile_high}};
}

bench::CaseSpec case_spec_from_json(const Json& value) {
  return parsing("case spec", [&] {
    if (!value.is_object()) throw FormatError("case spec must be a JSON object");
    bench::CaseSpec spec;
    spec.num_tasks = value.value("num_tasks", spec.num_tasks);
    spec.num_agent_types = value.value("num_agent_types", spec.num_agent_types);
    spec.num_capabilities = value.value("num_capabilities", spec.num_capabilities);
    spec.per_type_count = value.value("per_type_count", spec.per_type_count);
    spec.mean_pool_size = value.value("mean_pool_size", spec.mean_pool_size);
    spec.random_train_cap = value.value("random_train_cap", spec.random_train_cap);
    spec.realizations = value.value("realizations", spec.realizations);
    spec.seed = value.value("seed", spec.seed);
    spec.capability_density = value.value("capability_density", spec.capability_density);
    spec.requirement_density = value.value("requirement_density", spec.requirement_density);
    spec.quantile_low = value.value("quantile_low", spec.quantile_low);
    spec.quantile_high = value.value("quantile_high", spec.quantile_high);
    spec.validate();
    return spec;
  });
}

Json to_json(const AllocationInstance& instance, const std::string& model_path) {
  Json time = Json::array(), energy = Json::array();
  for (const auto& m : instance.travel_time) time.push_back(matrix_json(m));
  for (const auto& m : instance.travel_energy) energy.push_back(matrix_json(m));
  Json limits = Json::array();
  for (double d : instance.energy_limit) limits.push_back(limit_json(d));
  return {{"model", model_path},
          {"num_tasks", instance.num_tasks},
          {"num_agent_types", instance.num_agent_types()},
          {"travel_time", std::move(time)},
          {"travel_energy", std::move(energy)},
          {"task_time", matrix_json(instance.task_time)},
          {"fleet", instance.fleet},
          {"energy_limit", std::move(limits)},
          {"energy_weight", instance.energy_weight},
          {"time_weight", instance.time_weight},
          {"big_m", instance.big_m ? Json(*instance.big_m) : Json(nullptr)},
          {"team_size_cap", instance.team_size_cap ? Json(*instance.team_size_cap) : Json(nullptr)}};
}

AllocationInstance instance_from_json(const Json& value, const ModelData& model) {
  return parsing("instance", [&] {
    AllocationInstance inst;
    inst.num_tasks = get<std::size_t>(value, "num_tasks");
    const auto K = get<std::size_t>(value, "num_agent_types");
    const std::size_t N = inst.num_tasks + 2;
    inst.capabilities = model.A;
    inst.requirements = model.b;
    inst.travel_time = cube_from(field(value, "travel_time"), K, N, "travel_time");
    inst.travel_energy = cube_from(field(value, "travel_energy"), K, N, "travel_energy");
    inst.task_time = matrix_from(field(value, "task_time"), K, inst.num_tasks, "task_time");
    for (const auto& n : field(value, "fleet")) {
      const auto count = n.get<std::int64_t>();
      if (count < 0) throw FormatError("fleet sizes must be nonnegative");
      inst.fleet.push_back(static_cast<Count>(count));
    }
    for (const auto& d : field(value, "energy_limit")) inst.energy_limit.push_back(get_limit(d));
    inst.energy_weight = get<double>(value, "energy_weight");
    inst.time_weight = get<double>(value, "time_weight");
    if (value.contains("big_m") && !value["big_m"].is_null()) inst.big_m = value["big_m"].get<double>();
    if (value.contains("team_size_cap") && !value["team_size_cap"].is_null()) {
      inst.team_size_cap = value["team_size_cap"].get<Count>();
    }
    inst.validate();
    return inst;
  });
}

std::string describe_route(const AllocationInstance& instance, const Route& route) {
  std::string out = "type " + std::to_string(route.agent_type + 1) + " x" + std::to_string(route.agents) + ":";
  for (std::size_t p = 0; p < route.nodes.size(); ++p) {
    out += p == 0 ? " " : " -> ";
    out += node_name(instance, route.nodes[p]);
  }
  return out;
}

Json to_json(const AllocationInstance& instance, const AllocationPlan& plan) {
  Json routes = Json::array(), summary = Json::array(), teams = Json::array();
  for (const auto& r : plan.routes(instance)) {
    std::vector<std::size_t> nodes;
    for (std::size_t n : r.nodes) nodes.push_back(n + 1);
    routes.push_back({{"agent_type", r.agent_type + 1}, {"agents", r.agents}, {"nodes", nodes}});
    summary.push_back(describe_route(instance, r));
  }
  for (const auto& t : plan.teams) teams.push_back(team_json(t));
  return {{"num_tasks", instance.num_tasks},
          {"num_agent_types", instance.num_agent_types()},
          {"status", lp::to_string(plan.status)},
          {"proven_optimal", plan.proven_optimal},
          {"strict_integer", plan.strict_integer},
          {"nodes_explored", plan.nodes_explored},
          {"objective", plan.objective_value},
          {"mission_time", plan.mission_time},
          {"flows", plan.flows},
          {"edge_used", plan.edge_used},
          {"teams", std::move(teams)},
          {"start_times", plan.start_times},
          {"routes", std::move(routes)},
          {"route_summary", std::move(summary)}};
}

AllocationPlan plan_from_json(const Json& value, const AllocationInstance& instance) {
  return parsing("plan", [&] {
    const std::size_t K = instance.num_agent_types();
    const std::size_t N = instance.num_nodes();
    if (get<std::size_t>(value, "num_tasks") != instance.num_tasks || get<std::size_t>(value, "num_agent_types") != K) {
      throw FormatError("plan dimensions do not match the instance");
    }
    AllocationPlan plan;
    plan.flows = tensor_from<Count>(field(value, "flows"), K, N, "flows");
    plan.edge_used = tensor_from<std::uint8_t>(field(value, "edge_used"), K, N, "edge_used");
    const auto& teams = field(value, "teams");
    if (!teams.is_array() || teams.size() != instance.num_tasks) throw FormatError("plan needs one team per task");
    for (const auto& t : teams) plan.teams.push_back(team_from(t, K));
    plan.start_times = get<std::vector<double>>(value, "start_times");
    if (plan.start_times.size() != N) throw FormatError("plan needs one start time per node");
    plan.mission_time = get<double>(value, "mission_time");
    plan.objective_value = get<double>(value, "objective");
    plan.proven_optimal = value.value("proven_optimal", false);
    plan.strict_integer = value.value("strict_integer", false);
    plan.nodes_explored = value.value("nodes_explored", std::size_t{0});
    return plan;
  });
}

Json to_json(const std::vector<Violation>& violations) {
  Json out = Json::array();
  for (const auto& v : violations) {
    std::vector<std::size_t> indices;
    for (std::size_t i : v.indices) indices.push_back(i + 1);
    out.push_back({{"family", to_string(v.family)}, {"indices", indices}, {"slack", v.slack}, {"message", v.message}});
  }
  return out;
}

}  // namespace capalloc::io
