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

// Capability / requirement data model and the linear feasibility predicate
// A * y >= b shared by the learner, the synthetic benchmark and the allocator.

#ifndef CAPALLOC_MODEL_HPP_
#define CAPALLOC_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace capalloc {

/// Thrown when a caller breaks a documented precondition (dimension
/// mismatch, negative capability, malformed pattern, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when the inputs are well formed but the problem they describe has
/// no answer (infeasible allocation, missing positive samples, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Absolute slack used by classify(); learned values come out of
/// floating-point LP solves, so samples sitting on the boundary need it.
inline constexpr double kFeasibilityTolerance = 1e-7;

template <typename Tag>
struct StrongIndex {
  std::size_t index = 0;
  constexpr explicit StrongIndex(std::size_t i = 0) : index(i) {}
  constexpr auto operator<=>(const StrongIndex&) const = default;
};

using AgentTypeId = StrongIndex<struct AgentTypeTag>;
using TaskId = StrongIndex<struct TaskTag>;
using CapabilityId = StrongIndex<struct CapabilityTag>;

using Count = std::uint32_t;

/// Number of agents of each type assigned to one task.
class TeamConfiguration {
 public:
  TeamConfiguration() = default;
  explicit TeamConfiguration(std::vector<Count> counts) : counts_(std::move(counts)) {}
  TeamConfiguration(std::initializer_list<Count> counts) : counts_(counts) {}

  std::size_t size() const { return counts_.size(); }
  Count operator[](std::size_t k) const { return counts_[k]; }
  Count operator[](AgentTypeId k) const { return counts_[k.index]; }
  std::span<const Count> counts() const { return counts_; }
  Count total() const;

  /// Element-wise sum; both teams must have the same number of types.
  TeamConfiguration operator+(const TeamConfiguration& other) const;
  /// Element-wise y <= other.
  bool dominated_by(const TeamConfiguration& other) const;

  auto operator<=>(const TeamConfiguration&) const = default;

 private:
  std::vector<Count> counts_;
};

/// Row-major dense matrix of doubles.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// |C| x |K| matrix; entry (c, k) is how much of capability c one agent of
/// type k contributes. Nonnegative everywhere.
class CapabilityMatrix {
 public:
  CapabilityMatrix() = default;
  explicit CapabilityMatrix(DenseMatrix values);

  std::size_t num_capabilities() const { return values_.rows(); }
  std::size_t num_agent_types() const { return values_.cols(); }
  double operator()(std::size_t c, std::size_t k) const { return values_(c, k); }
  double operator()(CapabilityId c, AgentTypeId k) const { return values_(c.index, k.index); }
  std::span<const double> row(std::size_t c) const { return values_.row(c); }
  std::vector<double> column(std::size_t k) const;
  const DenseMatrix& values() const { return values_; }

  CapabilityMatrix scaled(double factor) const;

 private:
  DenseMatrix values_;
};

/// |M| x |C| thresholds; row i is the requirement vector b_i of task i.
class RequirementSet {
 public:
  RequirementSet() = default;
  explicit RequirementSet(DenseMatrix thresholds);

  std::size_t num_tasks() const { return thresholds_.rows(); }
  std::size_t num_capabilities() const { return thresholds_.cols(); }
  double operator()(std::size_t i, std::size_t c) const { return thresholds_(i, c); }
  std::span<const double> task(std::size_t i) const { return thresholds_.row(i); }
  std::span<const double> task(TaskId i) const { return thresholds_.row(i.index); }
  const DenseMatrix& values() const { return thresholds_; }

  RequirementSet scaled(double factor) const;

 private:
  DenseMatrix thresholds_;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Which capability and requirement entries are known to be positive. The
/// complement sets (known zeros) are implied, so the two partitions are
/// disjoint and exhaustive by construction.
class SparsityPattern {
 public:
  SparsityPattern() = default;
  /// capability_positive is |C| x |K|, requirement_positive is |C| x |M|.
  SparsityPattern(std::vector<std::vector<bool>> capability_positive,
                  std::vector<std::vector<bool>> requirement_positive);
  static SparsityPattern all_positive(std::size_t num_capabilities, std::size_t num_agent_types,
                                      std::size_t num_tasks);
  /// Builds the pattern from (c, k) and (c, i) lists of positive entries.
  static SparsityPattern from_positive_sets(std::size_t num_capabilities, std::size_t num_agent_types,
                                            std::size_t num_tasks, const std::vector<IndexPair>& a1,
                                            const std::vector<IndexPair>& b1);

  std::size_t num_capabilities() const { return num_capabilities_; }
  std::size_t num_agent_types() const { return num_agent_types_; }
  std::size_t num_tasks() const { return num_tasks_; }

  bool capability_positive(std::size_t c, std::size_t k) const {
    return capability_[c * num_agent_types_ + k] != 0;
  }
  bool requirement_positive(std::size_t c, std::size_t i) const {
    return requirement_[c * num_tasks_ + i] != 0;
  }

  std::vector<IndexPair> positive_capabilities() const;  // A1
  std::vector<IndexPair> zero_capabilities() const;      // A0
  std::vector<IndexPair> positive_requirements() const;  // B1
  std::vector<IndexPair> zero_requirements() const;      // B0

  /// Agent types k with (c, k) in A1.
  std::vector<std::size_t> support(std::size_t c) const;
  /// Tasks i with (c, i) in B1.
  std::vector<std::size_t> required_tasks(std::size_t c) const;

  SparsityPattern with_capability(std::size_t c, std::size_t k, bool positive) const;

  bool operator==(const SparsityPattern&) const = default;

 private:
  std::size_t num_capabilities_ = 0;
  std::size_t num_agent_types_ = 0;
  std::size_t num_tasks_ = 0;
  std::vector<std::uint8_t> capability_;
  std::vector<std::uint8_t> requirement_;
};

struct TrainingSample {
  TeamConfiguration team;
  double performance = 0.0;
  bool is_valid = false;
};

/// Samples grouped by task: training[i] holds every sample of task i.
using TrainingSet = std::vector<std::vector<TrainingSample>>;

/// A * team. Additive in the team.
std::vector<double> team_capability(const TeamConfiguration& team, const CapabilityMatrix& A);

/// True iff (A * team)_c >= b_c - tolerance for every capability c.
bool classify(const TeamConfiguration& team, const CapabilityMatrix& A, std::span<const double> b,
              double tolerance = kFeasibilityTolerance);

/// Throws ContractError unless every sample has the given number of types.
void check_training_dimensions(const TrainingSet& training, std::size_t num_agent_types);

}  // namespace capalloc

#endif  // CAPALLOC_MODEL_HPP_
