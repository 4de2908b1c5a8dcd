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

#include <ostream>
#include <sstream>

#include "capalloc/lp.hpp"

namespace capalloc::lp {

namespace {

void write_terms(const LinearProgram& lp, const std::vector<Term>& terms, std::ostream& out) {
  if (terms.empty()) {
    out << "0";
    return;
  }
  bool first = true;
  for (const auto& t : terms) {
    const double c = t.coefficient;
    if (first) {
      out << c << ' ' << lp.variable_name(t.variable);
    } else {
      out << (c < 0 ? " - " : " + ") << (c < 0 ? -c : c) << ' ' << lp.variable_name(t.variable);
    }
    first = false;
  }
}

const char* relation_text(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "=";
  }
  return "?";
}

}  // namespace

void write_lp_text(const LinearProgram& lp, std::ostream& out) {
  const auto precision = out.precision(12);
  std::vector<Term> objective;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    if (lp.objective()[j] != 0.0) objective.push_back({j, lp.objective()[j]});
  }
  out << (lp.sense() == Sense::Maximize ? "maximize" : "minimize") << ": ";
  write_terms(lp, objective, out);
  out << '\n';
  for (const auto& row : lp.constraints()) {
    out << row.name << ": ";
    write_terms(lp, row.terms, out);
    out << ' ' << relation_text(row.relation) << ' ' << row.rhs << '\n';
  }
  out << "bounds:\n";
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const auto [lo, up] = lp.bounds()[j];
    out << lo << " <= " << lp.variable_name(j) << " <= " << up << '\n';
  }
  out.precision(precision);
}

void write_lp_text(const MixedIntegerProgram& mip, std::ostream& out) {
  write_lp_text(mip.base, out);
  out << "integer:";
  for (std::size_t j : mip.integral) out << ' ' << mip.base.variable_name(j);
  out << '\n';
}

std::string to_lp_text(const LinearProgram& lp) {
  std::ostringstream s;
  write_lp_text(lp, s);
  return s.str();
}

}  // namespace capalloc::lp
