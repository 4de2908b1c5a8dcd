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

#include "capalloc/model.hpp"

#include <cmath>
#include <string>

namespace capalloc {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace

Count TeamConfiguration::total() const {
  Count sum = 0;
  for (Count c : counts_) sum += c;
  return sum;
}

TeamConfiguration TeamConfiguration::operator+(const TeamConfiguration& other) const {
  require(other.size() == size(), "team sizes differ");
  std::vector<Count> out(counts_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += other.counts_[k];
  return TeamConfiguration(std::move(out));
}

bool TeamConfiguration::dominated_by(const TeamConfiguration& other) const {
  require(other.size() == size(), "team sizes differ");
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (counts_[k] > other.counts_[k]) return false;
  }
  return true;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  DenseMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == cols, "ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::vector<double>> DenseMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r].assign(row(r).begin(), row(r).end());
  return out;
}

CapabilityMatrix::CapabilityMatrix(DenseMatrix values) : values_(std::move(values)) {
  for (std::size_t c = 0; c < values_.rows(); ++c) {
    for (double v : values_.row(c)) {
      require(std::isfinite(v) && v >= 0.0, "capability values must be finite and nonnegative");
    }
  }
}

std::vector<double> CapabilityMatrix::column(std::size_t k) const {
  std::vector<double> col(num_capabilities());
  for (std::size_t c = 0; c < col.size(); ++c) col[c] = values_(c, k);
  return col;
}

CapabilityMatrix CapabilityMatrix::scaled(double factor) const {
  require(factor > 0.0, "scale factor must be positive");
  DenseMatrix m = values_;
  for (std::size_t c = 0; c < m.rows(); ++c) {
    for (double& v : m.row(c)) v *= factor;
  }
  return CapabilityMatrix(std::move(m));
}

RequirementSet::RequirementSet(DenseMatrix thresholds) : thresholds_(std::move(thresholds)) {
  for (std::size_t i = 0; i < thresholds_.rows(); ++i) {
    for (double v : thresholds_.row(i)) {
      require(std::isfinite(v) && v >= 0.0, "requirement thresholds must be finite and nonnegative");
    }
  }
}

RequirementSet RequirementSet::scaled(double factor) const {
  require(factor > 0.0, "scale factor must be positive");
  DenseMatrix m = thresholds_;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (double& v : m.row(i)) v *= factor;
  }
  return RequirementSet(std::move(m));
}

SparsityPattern::SparsityPattern(std::vector<std::vector<bool>> capability_positive,
                                 std::vector<std::vector<bool>> requirement_positive) {
  num_capabilities_ = capability_positive.size();
  require(requirement_positive.size() == num_capabilities_,
          "capability and requirement patterns disagree on |C|");
  num_agent_types_ = num_capabilities_ == 0 ? 0 : capability_positive.front().size();
  num_tasks_ = num_capabilities_ == 0 ? 0 : requirement_positive.front().size();
  capability_.reserve(num_capabilities_ * num_agent_types_);
  requirement_.reserve(num_capabilities_ * num_tasks_);
  for (std::size_t c = 0; c < num_capabilities_; ++c) {
    require(capability_positive[c].size() == num_agent_types_, "ragged capability pattern");
    require(requirement_positive[c].size() == num_tasks_, "ragged requirement pattern");
    bool any = false;
    for (bool v : capability_positive[c]) {
      capability_.push_back(v ? 1 : 0);
      any = any || v;
    }
    require(any, "capability row " + std::to_string(c + 1) + " has no positive entry");
    for (bool v : requirement_positive[c]) requirement_.push_back(v ? 1 : 0);
  }
}

SparsityPattern SparsityPattern::all_positive(std::size_t num_capabilities, std::size_t num_agent_types,
                                              std::size_t num_tasks) {
  return SparsityPattern(
      std::vector<std::vector<bool>>(num_capabilities, std::vector<bool>(num_agent_types, true)),
      std::vector<std::vector<bool>>(num_capabilities, std::vector<bool>(num_tasks, true)));
}

SparsityPattern SparsityPattern::from_positive_sets(std::size_t num_capabilities,
                                                    std::size_t num_agent_types, std::size_t num_tasks,
                                                    const std::vector<IndexPair>& a1,
                                                    const std::vector<IndexPair>& b1) {
  std::vector<std::vector<bool>> cap(num_capabilities, std::vector<bool>(num_agent_types, false));
  std::vector<std::vector<bool>> req(num_capabilities, std::vector<bool>(num_tasks, false));
  for (auto [c, k] : a1) {
    require(c < num_capabilities && k < num_agent_types, "A1 index out of range");
    cap[c][k] = true;
  }
  for (auto [c, i] : b1) {
    require(c < num_capabilities && i < num_tasks, "B1 index out of range");
    req[c][i] = true;
  }
  return SparsityPattern(std::move(cap), std::move(req));
}

std::vector<IndexPair> SparsityPattern::positive_capabilities() const {
  std::vector<IndexPair> out;
  for (std::size_t c = 0; c < num_capabilities_; ++c)
    for (std::size_t k = 0; k < num_agent_types_; ++k)
      if (capability_positive(c, k)) out.emplace_back(c, k);
  return out;
}

std::vector<IndexPair> SparsityPattern::zero_capabilities() const {
  std::vector<IndexPair> out;
  for (std::size_t c = 0; c < num_capabilities_; ++c)
    for (std::size_t k = 0; k < num_agent_types_; ++k)
      if (!capability_positive(c, k)) out.emplace_back(c, k);
  return out;
}

std::vector<IndexPair> SparsityPattern::positive_requirements() const {
  std::vector<IndexPair> out;
  for (std::size_t c = 0; c < num_capabilities_; ++c)
    for (std::size_t i = 0; i < num_tasks_; ++i)
      if (requirement_positive(c, i)) out.emplace_back(c, i);
  return out;
}

std::vector<IndexPair> SparsityPattern::zero_requirements() const {
  std::vector<IndexPair> out;
  for (std::size_t c = 0; c < num_capabilities_; ++c)
    for (std::size_t i = 0; i < num_tasks_; ++i)
      if (!requirement_positive(c, i)) out.emplace_back(c, i);
  return out;
}

std::vector<std::size_t> SparsityPattern::support(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < num_agent_types_; ++k)
    if (capability_positive(c, k)) out.push_back(k);
  return out;
}

std::vector<std::size_t> SparsityPattern::required_tasks(std::size_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < num_tasks_; ++i)
    if (requirement_positive(c, i)) out.push_back(i);
  return out;
}

SparsityPattern SparsityPattern::with_capability(std::size_t c, std::size_t k, bool positive) const {
  require(c < num_capabilities_ && k < num_agent_types_, "capability index out of range");
  SparsityPattern copy = *this;
  copy.capability_[c * num_agent_types_ + k] = positive ? 1 : 0;
  bool any = false;
  for (std::size_t kk = 0; kk < num_agent_types_; ++kk) any = any || copy.capability_positive(c, kk);
  require(any, "capability row " + std::to_string(c + 1) + " would have no positive entry");
  return copy;
}

std::vector<double> team_capability(const TeamConfiguration& team, const CapabilityMatrix& A) {
  require(team.size() == A.num_agent_types(), "team has " + std::to_string(team.size()) +
                                                  " agent types, capability matrix has " +
                                                  std::to_string(A.num_agent_types()));
  std::vector<double> out(A.num_capabilities(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    const auto row = A.row(c);
    double sum = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k) sum += row[k] * static_cast<double>(team[k]);
    out[c] = sum;
  }
  return out;
}

bool classify(const TeamConfiguration& team, const CapabilityMatrix& A, std::span<const double> b,
              double tolerance) {
  require(b.size() == A.num_capabilities(), "requirement vector has " + std::to_string(b.size()) +
                                                " entries, capability matrix has " +
                                                std::to_string(A.num_capabilities()) + " rows");
  const auto capability = team_capability(team, A);
  for (std::size_t c = 0; c < capability.size(); ++c) {
    if (capability[c] < b[c] - tolerance) return false;
  }
  return true;
}

void check_training_dimensions(const TrainingSet& training, std::size_t num_agent_types) {
  for (std::size_t i = 0; i < training.size(); ++i) {
    for (const auto& sample : training[i]) {
      require(sample.team.size() == num_agent_types,
              "task " + std::to_string(i + 1) + " has a sample with " +
                  std::to_string(sample.team.size()) + " agent types, expected " +
                  std::to_string(num_agent_types));
    }
  }
}

}  // namespace capalloc
