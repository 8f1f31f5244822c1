// Copyright 2026 The qcontract Authors
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

#include "qcontract/io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SpecError("expected a complex number as [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw SpecError("bad number '" + s + "'");
  return x;
}

int parse_int(const std::string& s) {
  int x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw SpecError("bad integer '" + s + "'");
  return x;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json operator_to_json(const Operator& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Operator operator_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SpecError("operator must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw SpecError("operator rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Operator a(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw SpecError("operator rows differ in length");
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return a;
}

Json spec_to_json(const LindbladSpec& spec) {
  Json j;
  j["dim"] = spec.dim;
  j["hamiltonian"] = operator_to_json(spec.hamiltonian);
  Json jumps = Json::array();
  for (const auto& jump : spec.jumps) {
    Json e;
    e["op"] = operator_to_json(jump.op);
    e["rate"] = jump.rate;
    jumps.push_back(std::move(e));
  }
  j["jumps"] = std::move(jumps);
  return j;
}

LindbladSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw SpecError("spec: missing integer 'dim'");
  LindbladSpec spec;
  spec.dim = j["dim"].get<int>();
  if (spec.dim < 1) throw SpecError("spec: dim must be positive");
  spec.hamiltonian = j.contains("hamiltonian") ? operator_from_json(j["hamiltonian"])
                                               : Operator::Zero(spec.dim, spec.dim);
  if (j.contains("jumps")) {
    if (!j["jumps"].is_array()) throw SpecError("spec: 'jumps' must be an array");
    for (const auto& e : j["jumps"]) {
      if (!e.is_object() || !e.contains("op") || !e.contains("rate") || !e["rate"].is_number()) {
        throw SpecError("spec: each jump needs 'op' and numeric 'rate'");
      }
      spec.jumps.push_back({operator_from_json(e["op"]), e["rate"].get<double>()});
    }
  }
  spec.validate();
  return spec;
}

Json basis_to_json(const OperatorBasis& basis) {
  Json elems = Json::array();
  for (int i = 0; i < basis.size(); ++i) {
    Json e;
    e["label"] = basis.labels()[static_cast<std::size_t>(i)];
    e["op"] = operator_to_json(basis[i]);
    elems.push_back(std::move(e));
  }
  if (!basis.interior_dim()) return elems;
  Json j;
  j["interior_dim"] = *basis.interior_dim();
  j["elements"] = std::move(elems);
  return j;
}

OperatorBasis basis_from_json(const Json& j) {
  const Json* elems = &j;
  std::optional<int> interior;
  if (j.is_object()) {
    if (!j.contains("elements")) throw SpecError("basis: missing 'elements'");
    elems = &j["elements"];
    if (j.contains("interior_dim")) interior = j["interior_dim"].get<int>();
  }
  if (!elems->is_array() || elems->empty()) throw SpecError("basis must be a nonempty array");
  std::vector<Operator> ops;
  std::vector<std::string> labels;
  for (const auto& e : *elems) {
    if (e.is_object()) {
      if (!e.contains("op")) throw SpecError("basis element needs 'op'");
      ops.push_back(operator_from_json(e["op"]));
      labels.push_back(e.value("label", "A" + std::to_string(labels.size())));
    } else {
      ops.push_back(operator_from_json(e));
      labels.push_back("A" + std::to_string(labels.size()));
    }
  }
  try {
    return OperatorBasis(std::move(ops), std::move(labels), interior);
  } catch (const BasisError& e) {
    throw SpecError(std::string("basis: ") + e.what());
  } catch (const DimensionError& e) {
    throw SpecError(std::string("basis: ") + e.what());
  }
}

Json model_to_json(const ModelInstance& model) {
  Json j;
  j["name"] = model.name;
  const Json spec = spec_to_json(model.spec);
  for (const auto& [key, value] : spec.items()) j[key] = value;
  j["canonical_basis"] = basis_to_json(model.canonical_basis);
  return j;
}

Json tensor_to_json(const StructureTensor& c) {
  Json j;
  j["n"] = c.n;
  if (std::isinf(c.time)) {
    j["time"] = "inf";
  } else {
    j["time"] = c.time;
  }
  Json outer = Json::array();
  for (int k = 0; k < c.n; ++k) {
    Json mid = Json::array();
    for (int i = 0; i < c.n; ++i) {
      Json inner = Json::array();
      for (int jj = 0; jj < c.n; ++jj) inner.push_back(complex_to_json(c.at(k, i, jj)));
      mid.push_back(std::move(inner));
    }
    outer.push_back(std::move(mid));
  }
  j["C"] = std::move(outer);
  return j;
}

StructureTensor tensor_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("time") || !j.contains("C")) {
    throw SpecError("tensor: need 'n', 'time' and 'C'");
  }
  const int n = j["n"].get<int>();
  double time = 0.0;
  if (j["time"].is_string()) {
    if (j["time"].get<std::string>() != "inf") throw SpecError("tensor: time must be a number or \"inf\"");
    time = std::numeric_limits<double>::infinity();
  } else {
    time = j["time"].get<double>();
  }
  StructureTensor c(n, time);
  const Json& arr = j["C"];
  if (!arr.is_array() || static_cast<int>(arr.size()) != n) throw SpecError("tensor: C has wrong shape");
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int jj = 0; jj < n; ++jj) c.at(k, i, jj) = complex_from_json(arr.at(k).at(i).at(jj));
    }
  }
  return c;
}

std::string tensors_to_csv(const std::vector<StructureTensor>& series) {
  std::string out = "time,k,i,j,re,im\n";
  for (const auto& c : series) {
    const std::string t = format_double(c.time);
    for (int k = 0; k < c.n; ++k) {
      for (int i = 0; i < c.n; ++i) {
        for (int j = 0; j < c.n; ++j) {
          const Complex z = c.at(k, i, j);
          out += t + ',' + std::to_string(k) + ',' + std::to_string(i) + ',' + std::to_string(j) + ',' +
                 format_double(z.real()) + ',' + format_double(z.imag()) + '\n';
        }
      }
    }
  }
  return out;
}

std::vector<StructureTensor> tensors_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "time,k,i,j,re,im") throw SpecError("csv: missing header");
  struct Row {
    int k, i, j;
    Complex z;
  };
  std::vector<std::pair<double, std::vector<Row>>> groups;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() != 6) throw SpecError("csv: expected 6 columns");
    const double t = parse_double(f[0]);
    if (groups.empty() || !(groups.back().first == t)) groups.push_back({t, {}});
    groups.back().second.push_back({parse_int(f[1]), parse_int(f[2]), parse_int(f[3]),
                                    Complex(parse_double(f[4]), parse_double(f[5]))});
  }
  std::vector<StructureTensor> out;
  for (const auto& [t, rows] : groups) {
    int n = 0;
    for (const auto& r : rows) n = std::max({n, r.k + 1, r.i + 1, r.j + 1});
    StructureTensor c(n, t);
    for (const auto& r : rows) {
      if (r.k < 0 || r.i < 0 || r.j < 0) throw SpecError("csv: negative index");
      c.at(r.k, r.i, r.j) = r.z;
    }
    out.push_back(std::move(c));
  }
  return out;
}

Json signature_to_json(const KillingSignature& s) {
  return Json::array({s.positive, s.negative, s.zero});
}

Json classification_to_json(const LieClassification& c) {
  Json j;
  j["label"] = to_string(c.label);
  j["killing_signature"] = signature_to_json(c.killing_signature);
  j["center_dim"] = c.center_dim;
  j["derived_dim"] = c.derived_dim;
  Json diag;
  diag["quotient_dim"] = c.quotient_dim;
  diag["real_form"] = c.real_form;
  diag["jacobi_residual"] = c.jacobi_residual;
  if (!c.note.empty()) diag["note"] = c.note;
  j["diagnostics"] = std::move(diag);
  return j;
}

}  // namespace qcontract
