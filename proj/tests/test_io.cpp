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


#include <filesystem>
#include <fstream>

#include "capalloc/io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace capalloc;
namespace fs = std::filesystem;

TEST_CASE("dump: sorted keys, 12 significant digits, inline scalar arrays") {
  io::Json j = {{"b", 1.0 / 3.0}, {"a", {1, 2, 3}}, {"c", {{"z", true}, {"y", nullptr}}}, {"d", -0.0}};
  CHECK(io::dump(j) ==
        "{\n"
        "  \"a\": [1, 2, 3],\n"
        "  \"b\": 0.333333333333,\n"
        "  \"c\": {\n"
        "    \"y\": null,\n"
        "    \"z\": true\n"
        "  },\n"
        "  \"d\": 0\n"
        "}\n");
  CHECK(io::dump(io::Json(std::numeric_limits<double>::infinity())) == "null\n");
}

TEST_CASE("model, sparsity and training round-trip with 1-based indices") {
  const io::ModelData model{fixtures::robot_capabilities(), fixtures::robot_requirements(),
                            fixtures::robot_sparsity()};
  const auto j = io::to_json(model);
  CHECK(j["sparsity"]["A1"][0] == io::Json({1, 1}));
  const auto back = io::model_from_json(io::Json::parse(io::dump(j)));
  CHECK(back.A.values() == model.A.values());
  CHECK(back.b.values() == model.b.values());
  CHECK(back.sparsity == model.sparsity);
  CHECK(io::sparsity_from_json(io::to_json(model.sparsity)) == model.sparsity);

  const auto training = fixtures::robot_training_set();
  const auto t2 = io::training_from_json(io::Json::parse(io::dump(io::to_json(training, 5))));
  REQUIRE(t2.size() == training.size());
  for (std::size_t i = 0; i < t2.size(); ++i) {
    REQUIRE(t2[i].size() == training[i].size());
    for (std::size_t l = 0; l < t2[i].size(); ++l) {
      CHECK(t2[i][l].team == training[i][l].team);
      CHECK(t2[i][l].is_valid == training[i][l].is_valid);
    }
  }
}

TEST_CASE("malformed files raise FormatError") {
  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(R"({"num_agent_types": 2})")), io::FormatError);
  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(
                      R"({"num_agent_types": 1, "num_capabilities": 1, "num_tasks": 1, "A": [[-1]], "b": [[1]],
                          "sparsity": {"A1": [[1, 1]], "B1": [[1, 1]]}})")),
                  io::FormatError);
  CHECK_THROWS_AS(io::sparsity_from_json(io::Json::parse(
                      R"({"num_agent_types": 1, "num_capabilities": 1, "num_tasks": 1, "A1": [[2, 1]], "B1": []})")),
                  io::FormatError);
  CHECK_THROWS_AS(io::training_from_json(io::Json::parse(R"({"num_agent_types": 2, "tasks": [[{"team": [1]}]]})")),
                  io::FormatError);
  CHECK_THROWS_AS(io::read_json("/nonexistent/capalloc.json"), io::FormatError);
}

TEST_CASE("instance and plan round-trip; atomic writes leave no temporaries") {
  const auto A = fixtures::robot_capabilities();
  const auto b = fixtures::robot_requirements();
  auto inst = fixtures::robot_instance(A, b);
  inst.energy_limit[0] = std::numeric_limits<double>::infinity();
  const auto j = io::to_json(inst, "model.json");
  CHECK(j["energy_limit"][0].is_null());
  const auto back = io::instance_from_json(io::Json::parse(io::dump(j)), io::ModelData{A, b, fixtures::robot_sparsity()});
  CHECK(std::isinf(back.energy_limit[0]));
  CHECK(back.team_size_cap == inst.team_size_cap);
  CHECK(back.fleet == inst.fleet);
  CHECK(back.travel_time[2](1, 3) == doctest::Approx(inst.travel_time[2](1, 3)).epsilon(1e-11));

  // A hand-made plan: one largebot 3 from s to task 4 and back.
  EdgeTensor<Count> flows(5, std::vector<std::vector<Count>>(7, std::vector<Count>(7, 0)));
  flows[4][5][3] = 1;
  flows[4][3][6] = 1;
  const auto plan = plan_from_flows(inst, flows);
  REQUIRE(plan);
  const auto pj = io::to_json(inst, *plan);
  CHECK(pj["route_summary"][0] == "type 5 x1: s -> 4 -> u");
  CHECK(pj["routes"][0]["nodes"] == io::Json({6, 4, 7}));
  const auto plan2 = io::plan_from_json(io::Json::parse(io::dump(pj)), inst);
  CHECK(plan2.flows == plan->flows);
  CHECK(plan2.edge_used == plan->edge_used);
  CHECK(plan2.teams == plan->teams);
  CHECK(validate_plan(inst, plan2).size() == validate_plan(inst, *plan).size());

  const auto dir = fs::temp_directory_path() / "capalloc_io_test";
  fs::create_directories(dir);
  io::write_json(dir / "plan.json", pj);
  io::write_json(dir / "plan.json", pj);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  CHECK(io::read_json(dir / "plan.json") == io::Json::parse(io::dump(pj)));
  fs::remove_all(dir);
}

TEST_CASE("case spec json keeps defaults for missing fields") {
  const auto spec = io::case_spec_from_json(io::Json::parse(R"({"num_tasks": 3, "mean_pool_size": 100,
                                                               "random_train_cap": 50})"));
  CHECK(spec.num_tasks == 3);
  CHECK(spec.num_agent_types == 6);
  CHECK(spec.capability_density == 0.7);
  const auto again = io::case_spec_from_json(io::to_json(spec));
  CHECK(again.mean_pool_size == 100);
  CHECK_THROWS_AS(io::case_spec_from_json(io::Json::parse(R"({"mean_pool_size": 100000})")), io::FormatError);
}
