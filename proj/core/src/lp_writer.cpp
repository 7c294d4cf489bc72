// Copyright 2026 The Matchforge Authors
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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <utility>

#include "matchforge/opt_model.hpp"

namespace matchforge {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_terms(std::ofstream& out, const OptModel& model,
                 const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const LinearTerm& t : terms) {
    if (t.coef == 0.0) continue;
    if (first) {
      out << (t.coef < 0 ? "- " : "") << num(std::fabs(t.coef));
      first = false;
    } else {
      out << (t.coef < 0 ? " - " : " + ") << num(std::fabs(t.coef));
    }
    out << ' ' << model.var(t.var).name;
  }
  if (first) out << "0 " << model.var(0).name;
}

}  // namespace

void write_lp_format(const OptModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIoError, "cannot write '" + path + "'");

  out << (model.sense() == Sense::kMaximize ? "Maximize\n" : "Minimize\n");
  out << " obj: ";
  std::vector<LinearTerm> lin;
  for (int j = 0; j < model.num_vars(); ++j) {
    double cj = model.var(j).obj;
    for (const auto& sq : model.squared_terms()) {
      for (const LinearTerm& t : sq.expr) {
        if (t.var == j) cj += -2.0 * sq.weight * sq.target * t.coef;
      }
    }
    if (cj != 0.0) lin.push_back({j, cj});
  }
  write_terms(out, model, lin);

  if (model.has_quadratic_objective()) {
    // expand sum_k w_k (e_k . x)^2 into the bracketed quadratic form
    std::map<std::pair<int, int>, double> q;  // (i<=j) -> printed coefficient
    for (const auto& sq : model.squared_terms()) {
      for (const LinearTerm& a : sq.expr) {
        for (const LinearTerm& b : sq.expr) {
          if (a.var > b.var) continue;
          const double w = 2.0 * sq.weight * a.coef * b.coef;
          q[{a.var, b.var}] += (a.var == b.var) ? w : 2.0 * w;
        }
      }
    }
    out << " + [ ";
    bool first = true;
    for (const auto& [key, coef] : q) {
      if (coef == 0.0) continue;
      if (!first) out << (coef < 0 ? " - " : " + ");
      else if (coef < 0) out << "- ";
      first = false;
      out << num(std::fabs(coef)) << ' ' << model.var(key.first).name;
      if (key.first == key.second) {
        out << "^2";
      } else {
        out << " * " << model.var(key.second).name;
      }
    }
    out << " ] / 2";
    double constant = 0.0;
    for (const auto& sq : model.squared_terms())
      constant += sq.weight * sq.target * sq.target;
    if (constant != 0.0) out << "\n\\ constant term omitted: " << num(constant);
  }
  out << '\n';

  out << "Subject To\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const auto& row = model.row(r);
    if (row.kind == RowKind::kLazy) continue;
    out << ' ' << row.name << ": ";
    write_terms(out, model, row.terms);
    switch (row.rel) {
      case Relation::kLe: out << " <= "; break;
      case Relation::kGe: out << " >= "; break;
      case Relation::kEq: out << " = "; break;
    }
    out << num(row.rhs) << '\n';
  }
  bool any_lazy = false;
  for (int r = 0; r < model.num_rows(); ++r)
    any_lazy = any_lazy || model.row(r).kind == RowKind::kLazy;
  if (any_lazy) {
    out << "\\ Lazy constraints (enforced on all reported solutions)\n";
    for (int r = 0; r < model.num_rows(); ++r) {
      const auto& row = model.row(r);
      if (row.kind != RowKind::kLazy) continue;
      out << ' ' << row.name << ": ";
      write_terms(out, model, row.terms);
      switch (row.rel) {
        case Relation::kLe: out << " <= "; break;
        case Relation::kGe: out << " >= "; break;
        case Relation::kEq: out << " = "; break;
      }
      out << num(row.rhs) << '\n';
    }
  }

  out << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(j);
    if (!std::isfinite(v.lo) && !std::isfinite(v.hi)) {
      out << ' ' << v.name << " free\n";
    } else if (!std::isfinite(v.hi)) {
      out << ' ' << num(v.lo) << " <= " << v.name << '\n';
    } else if (!std::isfinite(v.lo)) {
      out << ' ' << v.name << " <= " << num(v.hi) << '\n';
    } else {
      out << ' ' << num(v.lo) << " <= " << v.name << " <= " << num(v.hi) << '\n';
    }
  }
  bool any_bin = false;
  for (int j = 0; j < model.num_vars(); ++j)
    any_bin = any_bin || model.var(j).kind == VarKind::kBinary;
  if (any_bin) {
    out << "Binaries\n";
    for (int j = 0; j < model.num_vars(); ++j) {
      if (model.var(j).kind == VarKind::kBinary)
        out << ' ' << model.var(j).name << '\n';
    }
  }
  out << "End\n";
  if (!out) throw Error(Errc::kIoError, "short write to '" + path + "'");
}

}  // namespace matchforge
