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

#include "qcontract/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qcontract/algebra_contraction.hpp"
#include "qcontract/deformed_product.hpp"
#include "qcontract/errors.hpp"
#include "qcontract/io.hpp"
#include "qcontract/lindblad.hpp"
#include "qcontract/models.hpp"

namespace qcontract {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string model;
  std::string spec_file;
  double gamma = 1.0;
  std::optional<double> omega;
  int d = 3;
  int n_max = 20;
  int n_guard = 2;
  std::string rates;
  std::string h;
  std::string times;
  std::string schedule;
  std::string basis = "canonical";
  std::string out;
  std::string format = "json";
  double tol = 1e-7;
  double cond_max = 1e12;
  std::string observable;
  bool json = false;
};

struct LoadedModel {
  std::string name;
  LindbladSpec spec;
  std::optional<OperatorBasis> basis;
  double gamma_ref = 1.0;
  std::optional<ModelInstance> instance;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double x = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
      throw UsageError(std::string(what) + ": cannot parse '" + cell + "'");
    }
    out.push_back(x);
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("'" + path + "' is not valid JSON: " + e.what());
  }
}

LoadedModel load_model(const RunConfig& cfg) {
  if (cfg.model.empty() == cfg.spec_file.empty()) throw UsageError("give exactly one of --model or --spec");
  LoadedModel m;
  if (!cfg.model.empty()) {
    ModelParams p;
    p.gamma = cfg.gamma;
    p.omega = cfg.omega;
    p.d = cfg.d;
    p.n_max = cfg.n_max;
    p.n_guard = cfg.n_guard;
    if (!cfg.rates.empty()) {
      p.rates = parse_list(cfg.rates, "--rates");
      p.d = static_cast<int>(p.rates.size()) + 1;
    }
    if (!cfg.h.empty()) p.h = parse_list(cfg.h, "--hdiag");
    m.instance = make_model(cfg.model, p);
    m.name = m.instance->name;
    m.spec = m.instance->spec;
    m.basis = m.instance->canonical_basis;
    m.gamma_ref = m.instance->gamma_ref;
  } else {
    const Json j = read_json_file(cfg.spec_file);
    m.name = j.is_object() ? j.value("name", cfg.spec_file) : cfg.spec_file;
    m.spec = spec_from_json(j);
    if (j.is_object() && j.contains("canonical_basis")) m.basis = basis_from_json(j["canonical_basis"]);
    double largest = 0.0;
    for (const auto& jump : m.spec.jumps) largest = std::max(largest, jump.rate);
    m.gamma_ref = largest > 0.0 ? largest : 1.0;
  }
  if (cfg.basis != "canonical") m.basis = basis_from_json(read_json_file(cfg.basis));
  if (m.basis && m.basis->dim() != m.spec.dim) throw SpecError("basis dimension does not match the model");
  return m;
}

std::optional<std::vector<double>> explicit_times(const RunConfig& cfg) {
  if (!cfg.times.empty() && !cfg.schedule.empty()) throw UsageError("give at most one of --times and --schedule");
  std::vector<double> t;
  if (!cfg.times.empty()) {
    t = parse_list(cfg.times, "--times");
  } else if (!cfg.schedule.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(cfg.schedule);
    std::string cell;
    while (std::getline(ss, cell, ':')) parts.push_back(cell);
    if (parts.size() != 3) throw UsageError("--schedule expects tmin:tmax:n");
    const double lo = parse_list(parts[0], "--schedule")[0];
    const double hi = parse_list(parts[1], "--schedule")[0];
    const double n = parse_list(parts[2], "--schedule")[0];
    if (!(lo > 0.0) || !(hi > lo) || n < 2 || n != std::floor(n)) {
      throw UsageError("--schedule needs 0 < tmin < tmax and an integer count >= 2");
    }
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  } else {
    return std::nullopt;
  }
  if (t.empty()) throw UsageError("empty time list");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0) throw UsageError("times must be finite and >= 0");
    if (i > 0 && !(t[i] > t[i - 1])) throw UsageError("times must be strictly increasing");
  }
  return t;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw UsageError("cannot write '" + cfg.out + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

const OperatorBasis& require_basis(const LoadedModel& m) {
  if (!m.basis) throw UsageError("this command needs a basis: use a registry model, a spec with canonical_basis, or --basis FILE");
  return *m.basis;
}

DeformedOptions deformed_options(const RunConfig& cfg) {
  DeformedOptions o;
  o.cond_max = cfg.cond_max;
  return o;
}

std::vector<double> schedule_for(const RunConfig& cfg, const LoadedModel& m, const Superoperator& adjoint) {
  if (auto t = explicit_times(cfg)) return *t;
  auto t = default_schedule(adjoint, require_basis(m), m.gamma_ref, deformed_options(cfg));
  if (t.size() < 3) {
    throw IllConditionedError("default schedule has fewer than three well-conditioned times", cfg.cond_max,
                              2.0 * (static_cast<double>(t.size()) + 1.0) / m.gamma_ref);
  }
  return t;
}

int cmd_model_list(const RunConfig& cfg, std::ostream& out) {
  Json list = Json::array();
  std::ostringstream text;
  for (const auto& name : model_names()) {
    const ModelInstance m = make_model(name);
    const std::string expected = m.expected_contraction ? to_string(*m.expected_contraction) : "none";
    Json e;
    e["name"] = name;
    e["dim"] = m.spec.dim;
    e["basis_size"] = m.canonical_basis.size();
    e["expected_contraction"] = expected;
    e["description"] = m.description;
    list.push_back(std::move(e));
    text << name << "  dim=" << m.spec.dim << "  basis=" << m.canonical_basis.size() << "  expected=" << expected
         << '\n';
  }
  emit(cfg, out, cfg.json ? dump(list) : text.str());
  return kExitOk;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel m = load_model(cfg);
  const auto times = explicit_times(cfg);
  if (!times) throw UsageError("evolve needs --times or --schedule");
  Operator a;
  std::string label = cfg.observable;
  if (cfg.observable.empty()) {
    a = require_basis(m)[0];
    label = require_basis(m).labels()[0];
  } else if (m.basis && m.basis->find(cfg.observable)) {
    a = (*m.basis)[*m.basis->find(cfg.observable)];
  } else {
    std::ifstream probe(cfg.observable);
    if (!probe) throw UsageError("unknown observable '" + cfg.observable + "'");
    a = operator_from_json(read_json_file(cfg.observable));
  }
  if (a.rows() != m.spec.dim || a.cols() != m.spec.dim) throw SpecError("observable dimension does not match the model");

  const PropagatorFamily family(adjoint_generator(build_generator(m.spec)));
  Json results = Json::array();
  std::string csv = "time,row,col,re,im\n";
  for (double t : *times) {
    const Operator at = qcontract::apply(family.at(t), a);
    Json r;
    r["time"] = t;
    r["norm"] = at.norm();
    r["operator"] = operator_to_json(at);
    results.push_back(std::move(r));
    for (Eigen::Index row = 0; row < at.rows(); ++row) {
      for (Eigen::Index col = 0; col < at.cols(); ++col) {
        csv += format_double(t) + ',' + std::to_string(row) + ',' + std::to_string(col) + ',' +
               format_double(at(row, col).real()) + ',' + format_double(at(row, col).imag()) + '\n';
      }
    }
  }
  if (cfg.format == "csv") {
    emit(cfg, out, csv);
  } else {
    Json j;
    j["model"] = m.name;
    j["observable"] = label;
    j["results"] = std::move(results);
    emit(cfg, out, dump(j));
  }
  return kExitOk;
}

Json limit_to_json(const LimitReport& r) {
  Json j;
  j["converged"] = r.converged;
  j["final_delta"] = r.final_delta;
  j["tensor"] = r.limit ? tensor_to_json(*r.limit) : Json(nullptr);
  Json div = Json::array();
  for (const auto& e : r.divergent_entries) {
    Json x;
    x["k"] = e.k;
    x["i"] = e.i;
    x["j"] = e.j;
    x["rate"] = e.rate;
    div.push_back(std::move(x));
  }
  j["divergent_entries"] = std::move(div);
  return j;
}

Json labels_json(const OperatorBasis& b) {
  Json j = Json::array();
  for (const auto& l : b.labels()) j.push_back(l);
  return j;
}

int cmd_structure(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel m = load_model(cfg);
  const OperatorBasis& basis = require_basis(m);
  const Superoperator adjoint = adjoint_generator(build_generator(m.spec));
  const std::vector<double> times = schedule_for(cfg, m, adjoint);

  LimitReport report;
  if (times.size() >= 3) {
    report = asymptotic_structure_constants(adjoint, basis, times, cfg.tol, deformed_options(cfg));
  } else {
    DeformedOptions o = deformed_options(cfg);
    o.full_space = false;
    for (double t : times) report.series.push_back(structure_constants(DeformedAlgebraContext(adjoint, basis, t, o)));
    report.times_used = times;
  }

  if (cfg.format == "csv") {
    std::vector<StructureTensor> all = report.series;
    if (report.limit) all.push_back(*report.limit);
    emit(cfg, out, tensors_to_csv(all));
  } else {
    Json j;
    j["model"] = m.name;
    j["basis"] = labels_json(basis);
    Json series = Json::array();
    for (const auto& c : report.series) series.push_back(tensor_to_json(c));
    j["series"] = std::move(series);
    j["limit"] = times.size() >= 3 ? limit_to_json(report) : Json(nullptr);
    emit(cfg, out, dump(j));
  }
  return kExitOk;
}

int cmd_contract(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel m = load_model(cfg);
  const OperatorBasis& basis = require_basis(m);
  const Superoperator adjoint = adjoint_generator(build_generator(m.spec));
  const std::vector<double> times = schedule_for(cfg, m, adjoint);
  if (times.size() < 3) throw UsageError("contract needs at least three times");
  const LimitReport report = asymptotic_structure_constants(adjoint, basis, times, cfg.tol, deformed_options(cfg));

  Json j;
  j["model"] = m.name;
  if (report.converged && report.limit) {
    const LieClassification c = classify(*report.limit);
    const Json cj = classification_to_json(c);
    for (const auto& [key, value] : cj.items()) j[key] = value;
  } else {
    j["label"] = to_string(LieLabel::unclassified);
    j["killing_signature"] = nullptr;
    j["center_dim"] = nullptr;
    j["derived_dim"] = nullptr;
    Json diag;
    diag["note"] = "bracket did not converge along the schedule";
    diag["limit"] = limit_to_json(report);
    j["diagnostics"] = std::move(diag);
  }
  j["expected"] = m.instance && m.instance->expected_contraction ? Json(to_string(*m.instance->expected_contraction))
                                                                 : Json(nullptr);
  Json t = Json::array();
  for (double x : times) t.push_back(x);
  j["times"] = std::move(t);
  emit(cfg, out, dump(j));
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.model.empty()) throw UsageError("verify needs --model");
  const LoadedModel m = load_model(cfg);
  const VerifyReport r = verify_model(*m.instance);
  if (cfg.format == "csv" || !cfg.json) {
    std::ostringstream text;
    for (const auto& c : r.checks) {
      text << (c.passed ? "PASS " : "FAIL ") << c.name << "  deviation=" << format_double(c.deviation)
           << "  tolerance=" << format_double(c.tolerance) << '\n';
    }
    text << (r.passed ? "pass" : "fail") << "  max deviation=" << format_double(r.max_deviation) << '\n';
    emit(cfg, out, text.str());
  } else {
    Json j;
    j["model"] = m.name;
    j["passed"] = r.passed;
    j["max_deviation"] = r.max_deviation;
    Json checks = Json::array();
    for (const auto& c : r.checks) {
      Json x;
      x["name"] = c.name;
      x["deviation"] = c.deviation;
      x["tolerance"] = c.tolerance;
      x["passed"] = c.passed;
      checks.push_back(std::move(x));
    }
    j["checks"] = std::move(checks);
    emit(cfg, out, dump(j));
  }
  return r.passed ? kExitOk : kExitFailure;
}

void add_model_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--model", cfg.model, "registry model name");
  app->add_option("--spec", cfg.spec_file, "LindbladSpec JSON file");
  app->add_option("--gamma", cfg.gamma, "jump rate");
  app->add_option("--omega", cfg.omega, "Hamiltonian frequency");
  app->add_option("--d", cfg.d, "dimension for d-level models");
  app->add_option("--n-max", cfg.n_max, "Fock truncation");
  app->add_option("--n-guard", cfg.n_guard, "Fock levels excluded from the interior");
  app->add_option("--rates", cfg.rates, "comma-separated rates gamma_1..gamma_{d-1}");
  app->add_option("--hdiag", cfg.h, "comma-separated diagonal Hamiltonian");
  app->add_option("--basis", cfg.basis, "canonical or a basis JSON file");
  app->add_option("--out", cfg.out, "output file");
  app->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void add_time_options(CLI::App* app, RunConfig& cfg) {
  app->add_option("--times", cfg.times, "comma-separated times");
  app->add_option("--schedule", cfg.schedule, "geometric schedule tmin:tmax:n");
  app->add_option("--tol", cfg.tol, "limit tolerance");
  app->add_option("--cond-max", cfg.cond_max, "largest accepted condition estimate");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformed products and algebra contractions of Lindblad dynamics", "qcontract"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* model = app.add_subcommand("model", "model registry");
  model->require_subcommand(1);
  auto* list = model->add_subcommand("list", "list registered models");
  list->add_flag("--json", cfg.json, "machine-readable output");
  list->add_option("--out", cfg.out, "output file");

  auto* evolve = app.add_subcommand("evolve", "evolve an observable in the Heisenberg picture");
  add_model_options(evolve, cfg);
  add_time_options(evolve, cfg);
  evolve->add_option("--observable", cfg.observable, "basis label or operator JSON file");

  auto* structure = app.add_subcommand("structure", "structure constants along a schedule");
  add_model_options(structure, cfg);
  add_time_options(structure, cfg);

  auto* contract = app.add_subcommand("contract", "classify the contracted algebra");
  add_model_options(contract, cfg);
  add_time_options(contract, cfg);

  auto* verify = app.add_subcommand("verify", "run a model's oracle suite");
  add_model_options(verify, cfg);
  verify->add_flag("--json", cfg.json, "machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*list) return cmd_model_list(cfg, out);
    if (*evolve) return cmd_evolve(cfg, out);
    if (*structure) return cmd_structure(cfg, out);
    if (*contract) return cmd_contract(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IllConditionedError& e) {
    err << "refused: " << e.what() << " (t = " << format_double(e.time())
        << ", condition estimate = " << format_double(e.estimate()) << ")\n";
    return kExitIllConditioned;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace qcontract
