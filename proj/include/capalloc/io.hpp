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


// JSON file formats. Every writer emits sorted keys and 12 significant
// digits, so equal inputs give byte-identical files. Indices are 1-based on
// disk and 0-based in memory.

#ifndef CAPALLOC_IO_HPP_
#define CAPALLOC_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "capalloc/allocator.hpp"
#include "capalloc/bench.hpp"
#include "capalloc/learner.hpp"
#include "capalloc/model.hpp"
#include "json.hpp"

namespace capalloc::io {

using Json = nlohmann::json;

/// Malformed or missing input file.
class FormatError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Canonical text: two-space indent, arrays of scalars on one line, floats
/// as %.12g, non-finite numbers as null, trailing newline.
std::string dump(const Json& value);

/// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_json(const std::filesystem::path& path, const Json& value);
Json read_json(const std::filesystem::path& path);

struct ModelData {
  CapabilityMatrix A;
  RequirementSet b;
  SparsityPattern sparsity;
};

Json to_json(const SparsityPattern& pattern);
SparsityPattern sparsity_from_json(const Json& value);

Json to_json(const ModelData& model);
ModelData model_from_json(const Json& value);

/// Per-capability objectives, statuses and LP sizes. Includes solve times
/// only when asked, since those differ between runs.
Json learn_report_json(const LearnedModel& model, bool include_timing);

Json to_json(const TrainingSet& training, std::size_t num_agent_types);
/// Samples without a "valid" field read as invalid.
TrainingSet training_from_json(const Json& value);

/// One unlabeled record: a team and either a performance value or repeated
/// performance draws.
struct RawRecord {
  TeamConfiguration team;
  std::optional<double> performance;
  std::vector<double> draws;
};
using RawSet = std::vector<std::vector<RawRecord>>;
RawSet raw_from_json(const Json& value);

Json to_json(const bench::CaseSpec& spec);
/// Missing fields keep their CaseSpec defaults.
bench::CaseSpec case_spec_from_json(const Json& value);

/// The instance without its learned model; "model" holds model_path.
Json to_json(const AllocationInstance& instance, const std::string& model_path);
AllocationInstance instance_from_json(const Json& value, const ModelData& model);

Json to_json(const AllocationInstance& instance, const AllocationPlan& plan);
AllocationPlan plan_from_json(const Json& value, const AllocationInstance& instance);

Json to_json(const std::vector<Violation>& violations);

/// "s -> 3 -> 1 -> u" style rendering with 1-based task numbers.
std::string describe_route(const AllocationInstance& instance, const Route& route);

}  // namespace capalloc::io

#endif  // CAPALLOC_IO_HPP_
