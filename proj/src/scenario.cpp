// Copyright 2026 The qhist Authors
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

#include "qhist/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qhist/error.hpp"

namespace qhist {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(ErrorCode code, const std::string& path, const std::string& what) {
  throw Error(code, (path.empty() ? std::string("/") : path) + ": " + what);
}

std::string child(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorCode::UnknownField, child(path, key), "unknown field '" + key + "'");
  }
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) {
    fail(ErrorCode::SyntaxError, path, "missing required field '" + std::string(key) + "'");
  }
  return *it;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(ErrorCode::SyntaxError, path, "expected an object");
}

void expect_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(ErrorCode::SyntaxError, path, "expected an array");
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(ErrorCode::SyntaxError, path, "expected a string");
  return j.get<std::string>();
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(ErrorCode::SyntaxError, path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorCode::InvalidValue, path, "non-finite number");
  return v;
}

Complex read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {read_number(j, path), 0.0};
  if (!j.is_array() || j.size() != 2) {
    fail(ErrorCode::SyntaxError, path, "expected a complex number [re, im]");
  }
  return {read_number(j[0], child(path, 0)), read_number(j[1], child(path, 1))};
}

std::vector<Complex> read_vector(const json& j, const std::string& path) {
  expect_array(j, path);
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_complex(j[i], child(path, i)));
  return out;
}

ComplexMatrix read_matrix(const json& j, const std::string& path, std::size_t dim) {
  expect_array(j, path);
  if (j.size() != dim) {
    fail(ErrorCode::DimMismatch, path,
         "matrix has " + std::to_string(j.size()) + " rows, expected " + std::to_string(dim));
  }
  std::vector<Complex> entries;
  entries.reserve(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string rp = child(path, r);
    expect_array(j[r], rp);
    if (j[r].size() != dim) {
      fail(ErrorCode::DimMismatch, rp,
           "row has " + std::to_string(j[r].size()) + " entries, expected " +
               std::to_string(dim));
    }
    for (std::size_t c = 0; c < dim; ++c) entries.push_back(read_complex(j[r][c], child(rp, c)));
  }
  return ComplexMatrix(dim, dim, std::move(entries));
}

ordered_json write_complex(Complex c) { return ordered_json::array({c.real(), c.imag()}); }

ordered_json write_matrix(const ComplexMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(write_complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::map<std::string, std::vector<Complex>, std::less<>>& presets() {
  static const double h = 1.0 / std::sqrt(2.0);
  static const std::map<std::string, std::vector<Complex>, std::less<>> table = {
      {"up_z", {1.0, 0.0}},
      {"down_z", {0.0, 1.0}},
      {"plus_x", {h, h}},
      {"minus_x", {h, -h}},
      {"plus_y", {h, Complex(0.0, h)}},
      {"minus_y", {h, Complex(0.0, -h)}},
  };
  return table;
}

struct ParsedName {
  std::string base;
  std::optional<std::size_t> subsystem;  // 0-based
};

/// Splits "sigma_z@2"; throws UnknownOperatorName or DimMismatch.
ParsedName parse_operator_name(std::string_view name, const std::vector<std::size_t>& dims) {
  ParsedName out;
  const auto at = name.find('@');
  out.base = std::string(name.substr(0, at));
  if (out.base != "sigma_x" && out.base != "sigma_y" && out.base != "sigma_z" &&
      out.base != "identity") {
    throw Error(ErrorCode::UnknownOperatorName, "unknown operator '" + std::string(name) + "'");
  }
  if (at != std::string_view::npos) {
    const std::string idx(name.substr(at + 1));
    std::size_t k = 0;
    std::size_t used = 0;
    try {
      k = std::stoul(idx, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (idx.empty() || used != idx.size() || k == 0) {
      throw Error(ErrorCode::UnknownOperatorName,
                  "bad subsystem index in '" + std::string(name) + "'");
    }
    if (k > dims.size()) {
      throw Error(ErrorCode::DimMismatch, "'" + std::string(name) + "' addresses subsystem " +
                                              std::to_string(k) + " of " +
                                              std::to_string(dims.size()));
    }
    out.subsystem = k - 1;
  }
  if (out.base != "identity") {
    if (!out.subsystem) {
      if (dims.size() != 1) {
        throw Error(ErrorCode::DimMismatch, "'" + std::string(name) +
                                                "' needs a subsystem index (@k) on a " +
                                                "composite system");
      }
      out.subsystem = 0;
    }
    if (dims[*out.subsystem] != 2) {
      throw Error(ErrorCode::DimMismatch, "'" + std::string(name) + "' acts on a qubit but " +
                                              "subsystem " +
                                              std::to_string(*out.subsystem + 1) + " has dim " +
                                              std::to_string(dims[*out.subsystem]));
    }
  }
  return out;
}

/// Eigenvalue-ordered labels for named observables.
std::vector<std::string> named_labels(const ParsedName& p) {
  if (p.base == "identity") return {std::string(kIdentityLabel)};
  const char axis = p.base.back();
  return {std::string("-") + axis, std::string("+") + axis};
}

ObservableSpec parse_observable(const json& j, const std::string& path, std::size_t dim,
                                const std::vector<std::size_t>& dims, const Tolerance& tol) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    try {
      parse_operator_name(name, dims);
    } catch (const Error& e) {
      fail(e.code(), path, e.what());
    }
    return NamedObservable{name};
  }
  expect_object(j, path);
  if (j.contains("hermitian")) {
    reject_unknown(j, path, {"hermitian", "labels"});
    HermitianObservable h{read_matrix(j["hermitian"], child(path, "hermitian"), dim), {}};
    if (!is_hermitian(h.matrix, tol)) {
      fail(ErrorCode::NotHermitian, child(path, "hermitian"), "matrix is not Hermitian");
    }
    if (j.contains("labels")) {
      const std::string lp = child(path, "labels");
      expect_array(j["labels"], lp);
      for (std::size_t i = 0; i < j["labels"].size(); ++i) {
        h.labels.push_back(read_string(j["labels"][i], child(lp, i)));
      }
      const std::size_t distinct = hermitian_eigenprojectors(h.matrix, tol).size();
      if (h.labels.size() != distinct) {
        fail(ErrorCode::DimMismatch, lp,
             std::to_string(h.labels.size()) + " labels for " + std::to_string(distinct) +
                 " distinct eigenvalues");
      }
    }
    return h;
  }
  if (j.contains("projectors")) {
    reject_unknown(j, path, {"projectors"});
    const std::string pp = child(path, "projectors");
    const json& list = j["projectors"];
    expect_array(list, pp);
    if (list.empty()) fail(ErrorCode::InvalidValue, pp, "empty projector list");
    ProjectorObservable obs;
    ProjectorSet set;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string ip = child(pp, i);
      expect_object(list[i], ip);
      reject_unknown(list[i], ip, {"label", "matrix", "ket"});
      const std::string label = read_string(require(list[i], "label", ip), child(ip, "label"));
      const bool has_matrix = list[i].contains("matrix");
      const bool has_ket = list[i].contains("ket");
      if (has_matrix == has_ket) {
        fail(ErrorCode::SyntaxError, ip, "give exactly one of 'matrix' or 'ket'");
      }
      ComplexMatrix m = ComplexMatrix::identity(dim);
      if (has_matrix) {
        m = read_matrix(list[i]["matrix"], child(ip, "matrix"), dim);
      } else {
        const std::vector<Complex> amps = read_vector(list[i]["ket"], child(ip, "ket"));
        if (amps.size() != dim) {
          fail(ErrorCode::DimMismatch, child(ip, "ket"),
               "ket has dim " + std::to_string(amps.size()) + ", expected " +
                   std::to_string(dim));
        }
        const Ket k(amps);
        if (k.norm_squared() == 0.0) fail(ErrorCode::InvalidValue, child(ip, "ket"), "zero ket");
        m = projector_onto(k);
      }
      set.projectors.push_back(m);
      set.labels.push_back(label);
      obs.projectors.push_back({label, std::move(m)});
    }
    try {
      slot_decomposition(set, tol);
    } catch (const Error& e) {
      fail(e.code(), pp, e.what());
    }
    return obs;
  }
  fail(ErrorCode::SyntaxError, path,
       "observable must be a name, {\"hermitian\": …} or {\"projectors\": …}");
}

ordered_json write_observable(const ObservableSpec& spec) {
  if (const auto* n = std::get_if<NamedObservable>(&spec)) return n->name;
  if (const auto* h = std::get_if<HermitianObservable>(&spec)) {
    ordered_json o;
    o["hermitian"] = write_matrix(h->matrix);
    if (!h->labels.empty()) o["labels"] = h->labels;
    return o;
  }
  const auto& p = std::get<ProjectorObservable>(spec);
  ordered_json list = ordered_json::array();
  for (const auto& lp : p.projectors) {
    ordered_json item;
    item["label"] = lp.label;
    item["matrix"] = write_matrix(lp.matrix);
    list.push_back(std::move(item));
  }
  ordered_json o;
  o["projectors"] = std::move(list);
  return o;
}

Tolerance parse_tolerance(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"norm", "herm", "proj", "comm", "cons"});
  Tolerance t;
  auto field = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = read_number(j[key], child(path, key));
  };
  field("norm", t.norm);
  field("herm", t.herm);
  field("proj", t.proj);
  field("comm", t.comm);
  field("cons", t.cons);
  try {
    t.validate();
  } catch (const Error& e) {
    fail(e.code(), path, e.what());
  }
  return t;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::size_t Scenario::total_dim() const {
  std::size_t d = 1;
  for (std::size_t k : subsystem_dims) d *= k;
  return d;
}

const ObserverSpec* Scenario::find_observer(std::string_view name) const {
  for (const auto& o : observers) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

Scenario parse_scenario(std::string_view text, const ParseOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::SyntaxError,
                "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                    e.what());
  }
  const std::string root;
  expect_object(doc, root);
  reject_unknown(doc, root,
                 {"format", "name", "description", "subsystems", "initial_state", "times",
                  "evolutions", "observers", "tolerance"});

  const json& format = require(doc, "format", root);
  if (!format.is_number_integer() || format.get<int>() != kScenarioFormat) {
    fail(ErrorCode::InvalidValue, "/format",
         "unsupported format (expected " + std::to_string(kScenarioFormat) + ")");
  }

  Scenario s;
  s.name = read_string(require(doc, "name", root), "/name");
  if (doc.contains("description")) s.description = read_string(doc["description"], "/description");
  if (doc.contains("tolerance")) s.tolerance = parse_tolerance(doc["tolerance"], "/tolerance");
  const Tolerance tol = s.tolerance.value_or(Tolerance{});

  const json& subs = require(doc, "subsystems", root);
  expect_array(subs, "/subsystems");
  if (subs.empty()) fail(ErrorCode::InvalidValue, "/subsystems", "at least one subsystem");
  std::size_t total = 1;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const std::string p = child("/subsystems", i);
    if (!subs[i].is_number_unsigned() || subs[i].get<std::size_t>() == 0) {
      fail(ErrorCode::InvalidValue, p, "subsystem dimension must be a positive integer");
    }
    const std::size_t d = subs[i].get<std::size_t>();
    if (d > options.max_dim || total > options.max_dim / d) {
      fail(ErrorCode::DimMismatch, p,
           "total dimension exceeds the cap of " + std::to_string(options.max_dim));
    }
    total *= d;
    s.subsystem_dims.push_back(d);
  }

  const json& init = require(doc, "initial_state", root);
  if (init.is_string() || (init.is_array() && !init.empty() && init[0].is_string())) {
    PresetState ps;
    if (init.is_string()) {
      ps.factors.push_back(init.get<std::string>());
    } else {
      for (std::size_t i = 0; i < init.size(); ++i) {
        ps.factors.push_back(read_string(init[i], child("/initial_state", i)));
      }
    }
    if (ps.factors.size() != s.subsystem_dims.size()) {
      fail(ErrorCode::DimMismatch, "/initial_state",
           std::to_string(ps.factors.size()) + " presets for " +
               std::to_string(s.subsystem_dims.size()) + " subsystems");
    }
    for (std::size_t i = 0; i < ps.factors.size(); ++i) {
      const std::string p = init.is_string() ? "/initial_state" : child("/initial_state", i);
      if (!presets().contains(ps.factors[i])) {
        fail(ErrorCode::InvalidValue, p, "unknown state preset '" + ps.factors[i] + "'");
      }
      if (s.subsystem_dims[i] != 2) {
        fail(ErrorCode::DimMismatch, p, "presets are qubit states but subsystem " +
                                            std::to_string(i + 1) + " has dim " +
                                            std::to_string(s.subsystem_dims[i]));
      }
    }
    s.initial_state = std::move(ps);
  } else {
    expect_object(init, "/initial_state");
    reject_unknown(init, "/initial_state", {"amplitudes"});
    ExplicitState es{read_vector(require(init, "amplitudes", "/initial_state"),
                                 "/initial_state/amplitudes")};
    if (es.amplitudes.size() != total) {
      fail(ErrorCode::DimMismatch, "/initial_state/amplitudes",
           "state has " + std::to_string(es.amplitudes.size()) + " amplitudes, expected " +
               std::to_string(total));
    }
    if (!Ket(es.amplitudes).is_normalized(tol)) {
      fail(ErrorCode::InvalidValue, "/initial_state/amplitudes", "state is not normalized");
    }
    s.initial_state = std::move(es);
  }

  const json& times = require(doc, "times", root);
  expect_array(times, "/times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    s.times.push_back(read_string(times[i], child("/times", i)));
  }
  try {
    TimeGrid grid(s.times);
  } catch (const Error& e) {
    fail(e.code(), "/times", e.what());
  }

  const std::size_t intervals = s.times.size() - 1;
  if (doc.contains("evolutions")) {
    const json& evs = doc["evolutions"];
    expect_array(evs, "/evolutions");
    if (evs.size() != intervals) {
      fail(ErrorCode::DimMismatch, "/evolutions",
           std::to_string(evs.size()) + " evolutions for " + std::to_string(intervals) +
               " intervals");
    }
    for (std::size_t i = 0; i < evs.size(); ++i) {
      const std::string p = child("/evolutions", i);
      if (evs[i].is_string()) {
        if (evs[i].get<std::string>() != "identity") {
          fail(ErrorCode::UnknownOperatorName, p,
               "unknown evolution '" + evs[i].get<std::string>() + "'");
        }
        s.evolutions.emplace_back(std::nullopt);
        continue;
      }
      expect_object(evs[i], p);
      reject_unknown(evs[i], p, {"unitary"});
      ComplexMatrix u = read_matrix(require(evs[i], "unitary", p), child(p, "unitary"), total);
      if (!is_unitary(u, tol)) {
        fail(ErrorCode::NotUnitaryEvolution, child(p, "unitary"), "matrix is not unitary");
      }
      s.evolutions.emplace_back(std::move(u));
    }
  } else {
    s.evolutions.assign(intervals, std::nullopt);
  }

  const json& observers = require(doc, "observers", root);
  expect_array(observers, "/observers");
  std::set<std::string> names;
  for (std::size_t o = 0; o < observers.size(); ++o) {
    const std::string op = child("/observers", o);
    const json& oj = observers[o];
    expect_object(oj, op);
    reject_unknown(oj, op, {"name", "measurements"});
    ObserverSpec spec;
    spec.name = read_string(require(oj, "name", op), child(op, "name"));
    if (spec.name.empty() || spec.name == "combined") {
      fail(ErrorCode::InvalidValue, child(op, "name"), "reserved or empty observer name");
    }
    if (!names.insert(spec.name).second) {
      fail(ErrorCode::DuplicateLabel, child(op, "name"),
           "observer '" + spec.name + "' defined twice");
    }
    const std::string mp = child(op, "measurements");
    const json& ms = require(oj, "measurements", op);
    expect_array(ms, mp);
    std::set<std::string> seen_times;
    for (std::size_t m = 0; m < ms.size(); ++m) {
      const std::string p = child(mp, m);
      expect_object(ms[m], p);
      reject_unknown(ms[m], p, {"time", "observable"});
      Measurement meas;
      meas.time = read_string(require(ms[m], "time", p), child(p, "time"));
      const auto pos = std::find(s.times.begin(), s.times.end(), meas.time);
      if (pos == s.times.end()) {
        fail(ErrorCode::BadTimes, child(p, "time"), "time '" + meas.time + "' not in /times");
      }
      if (pos == s.times.begin()) {
        fail(ErrorCode::BadTimes, child(p, "time"),
             "no measurement at the initial time '" + meas.time + "'");
      }
      if (!seen_times.insert(meas.time).second) {
        fail(ErrorCode::BadTimes, child(p, "time"),
             "observer measures twice at '" + meas.time + "'");
      }
      meas.observable = parse_observable(require(ms[m], "observable", p), child(p, "observable"),
                                         total, s.subsystem_dims, tol);
      spec.measurements.push_back(std::move(meas));
    }
    s.observers.push_back(std::move(spec));
  }
  return s;
}

Scenario load_scenario(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error reading '" + path + "'");
  return parse_scenario(buf.str(), options);
}

std::string serialize_scenario(const Scenario& s) {
  ordered_json doc;
  doc["format"] = kScenarioFormat;
  doc["name"] = s.name;
  if (!s.description.empty()) doc["description"] = s.description;
  doc["subsystems"] = s.subsystem_dims;
  if (const auto* ps = std::get_if<PresetState>(&s.initial_state)) {
    doc["initial_state"] = ps->factors;
  } else {
    ordered_json amps = ordered_json::array();
    for (Complex c : std::get<ExplicitState>(s.initial_state).amplitudes) {
      amps.push_back(write_complex(c));
    }
    doc["initial_state"] = {{"amplitudes", std::move(amps)}};
  }
  doc["times"] = s.times;
  ordered_json evs = ordered_json::array();
  for (const auto& e : s.evolutions) {
    if (e) {
      ordered_json u;
      u["unitary"] = write_matrix(*e);
      evs.push_back(std::move(u));
    } else {
      evs.push_back("identity");
    }
  }
  doc["evolutions"] = std::move(evs);
  ordered_json observers = ordered_json::array();
  for (const auto& o : s.observers) {
    ordered_json oj;
    oj["name"] = o.name;
    ordered_json ms = ordered_json::array();
    for (const auto& m : o.measurements) {
      ordered_json mj;
      mj["time"] = m.time;
      mj["observable"] = write_observable(m.observable);
      ms.push_back(std::move(mj));
    }
    oj["measurements"] = std::move(ms);
    observers.push_back(std::move(oj));
  }
  doc["observers"] = std::move(observers);
  if (s.tolerance) {
    const Tolerance& t = *s.tolerance;
    doc["tolerance"] = {{"norm", t.norm}, {"herm", t.herm}, {"proj", t.proj},
                        {"comm", t.comm}, {"cons", t.cons}};
  }
  return doc.dump(2) + "\n";
}

Tolerance effective_tolerance(const Scenario& s, const ResolveOptions& options) {
  if (options.tolerance) return *options.tolerance;
  return s.tolerance.value_or(Tolerance{});
}

ComplexMatrix named_operator(std::string_view name, const std::vector<std::size_t>& dims) {
  const ParsedName p = parse_operator_name(name, dims);
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  if (p.base == "identity") return ComplexMatrix::identity(total);
  const ComplexMatrix local = p.base == "sigma_x"   ? pauli::x()
                              : p.base == "sigma_y" ? pauli::y()
                                                    : pauli::z();
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k < *p.subsystem) before *= dims[k];
    if (k > *p.subsystem) after *= dims[k];
  }
  return tensor_product(tensor_product(ComplexMatrix::identity(before), local),
                        ComplexMatrix::identity(after));
}

Ket initial_ket(const Scenario& s) {
  if (const auto* es = std::get_if<ExplicitState>(&s.initial_state)) return Ket(es->amplitudes);
  const auto& ps = std::get<PresetState>(s.initial_state);
  std::optional<Ket> acc;
  for (const auto& f : ps.factors) {
    const auto it = presets().find(f);
    if (it == presets().end()) throw Error(ErrorCode::InvalidValue, "unknown preset '" + f + "'");
    Ket k(it->second);
    acc = acc ? tensor_product(*acc, k) : k;
  }
  return *acc;
}

std::vector<ComplexMatrix> evolution_operators(const Scenario& s) {
  std::vector<ComplexMatrix> out;
  for (const auto& e : s.evolutions) {
    out.push_back(e ? *e : ComplexMatrix::identity(s.total_dim()));
  }
  return out;
}

std::vector<ObserverRecord> resolve(const Scenario& s, const ResolveOptions& options) {
  const Tolerance tol = effective_tolerance(s, options);
  const std::size_t dim = s.total_dim();
  const TimeGrid grid(s.times);
  const Ket psi0 = initial_ket(s);
  const std::vector<ComplexMatrix> evolutions = evolution_operators(s);

  std::vector<ObserverRecord> out;
  for (const ObserverSpec& o : s.observers) {
    std::vector<SlotSpec> slots(grid.slot_count(),
                                SlotSpec{ProjectiveDecomposition::trivial(dim)});
    for (const Measurement& m : o.measurements) {
      const std::size_t slot = grid.slot_of(m.time);
      if (const auto* n = std::get_if<NamedObservable>(&m.observable)) {
        const ParsedName p = parse_operator_name(n->name, s.subsystem_dims);
        slots[slot] = Observable{named_operator(n->name, s.subsystem_dims), named_labels(p)};
      } else if (const auto* h = std::get_if<HermitianObservable>(&m.observable)) {
        slots[slot] = Observable{h->matrix, h->labels};
      } else {
        ProjectorSet set;
        for (const auto& lp : std::get<ProjectorObservable>(m.observable).projectors) {
          set.projectors.push_back(lp.matrix);
          set.labels.push_back(lp.label);
        }
        slots[slot] = std::move(set);
      }
    }
    try {
      out.push_back({o.name, build_family(psi0, grid, evolutions, slots, tol,
                                          options.max_histories)});
    } catch (const Error& e) {
      throw Error(e.code(), "observer '" + o.name + "': " + e.what(), e.index());
    }
  }
  return out;
}

}  // namespace qhist
