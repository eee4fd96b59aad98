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

#include "qhist/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qhist/error.hpp"
#include "qhist/oracle.hpp"
#include "qhist/scenario.hpp"
#include "qhist/stablefacts.hpp"

namespace qhist::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kOracleLimit = 1e-12;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

struct CommonOptions {
  std::string path;
  std::optional<double> tolerance;
  std::size_t max_histories = kDefaultMaxHistories;
  bool json = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_json) {
  cmd->add_option("scenario", opts.path, "Scenario file (JSON)")->required();
  cmd->add_option("--tolerance", opts.tolerance,
                  "Uniform numerical tolerance (default: scenario's, else 1e-9)");
  cmd->add_option("--max-histories", opts.max_histories, "Cap on histories per family")
      ->capture_default_str();
  if (with_json) cmd->add_flag("--json", opts.json, "Machine-readable JSON report");
}

/// Loaded scenario with resolved observer families.
struct Loaded {
  Scenario scenario;
  Tolerance tol;
  std::vector<ObserverRecord> observers;
};

Loaded load(const CommonOptions& opts) {
  Loaded l{load_scenario(opts.path), {}, {}};
  ResolveOptions ro;
  if (opts.tolerance) ro.tolerance = Tolerance::uniform(*opts.tolerance);
  ro.max_histories = opts.max_histories;
  l.tol = effective_tolerance(l.scenario, ro);
  l.observers = resolve(l.scenario, ro);
  return l;
}

ordered_json tolerance_json(const Tolerance& t) {
  return {{"norm", t.norm}, {"herm", t.herm}, {"proj", t.proj},
          {"comm", t.comm}, {"cons", t.cons}};
}

ordered_json report_header(const char* command, const Loaded& l) {
  ordered_json j;
  j["format_version"] = kReportFormatVersion;
  j["command"] = command;
  j["scenario"] = l.scenario.name;
  j["tolerance"] = tolerance_json(l.tol);
  return j;
}

const ObserverRecord* find_observer(const std::vector<ObserverRecord>& obs,
                                    const std::string& name) {
  for (const auto& o : obs) {
    if (o.name == name) return &o;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const CommonOptions& opts, std::ostream& out) {
  const Loaded l = load(opts);
  out << "ok: '" << l.scenario.name << "' (dim " << l.scenario.total_dim() << ", "
      << l.scenario.times.size() - 1 << " slot(s), " << l.observers.size()
      << " observer(s))\n";
  for (const auto& o : l.observers) {
    out << "  " << o.name << ": " << o.family.histories().size() << " histories\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// analyze

int cmd_analyze(const CommonOptions& opts, const std::vector<std::string>& only,
                std::ostream& out, std::ostream& err) {
  const Loaded l = load(opts);
  std::vector<const ObserverRecord*> selected;
  if (only.empty()) {
    for (const auto& o : l.observers) selected.push_back(&o);
  } else {
    for (const auto& name : only) {
      const ObserverRecord* o = find_observer(l.observers, name);
      if (!o) {
        err << "error: no observer named '" << name << "'\n";
        return kInputError;
      }
      selected.push_back(o);
    }
  }
  if (selected.empty()) {
    err << "error: scenario '" << l.scenario.name << "' has no observers\n";
    return kInputError;
  }

  ordered_json report = report_header("analyze", l);
  ordered_json families = ordered_json::array();
  bool all_consistent = true;
  if (!opts.json) {
    out << "scenario: " << l.scenario.name << "\n";
    out << "tolerance: " << num(l.tol.cons) << " (consistency)\n";
  }
  for (const ObserverRecord* o : selected) {
    const ConsistencyReport r = consistency_check(o->family, l.tol);
    all_consistent = all_consistent && r.consistent;
    double sum = 0.0;
    for (double p : r.probabilities) sum += p;

    ordered_json fj;
    fj["observer"] = o->name;
    fj["consistent"] = r.consistent;
    fj["max_offdiag"] = r.max_offdiag;
    fj["worst_pair"] = r.labels.size() > 1
                           ? ordered_json::array({r.labels[r.worst_row], r.labels[r.worst_col]})
                           : ordered_json::array();
    fj["threshold"] = r.threshold;
    fj["probability_sum"] = sum;
    fj["probabilities_additive"] = r.consistent;
    ordered_json hs = ordered_json::array();
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
      hs.push_back({{"label", r.labels[i]}, {"probability", r.probabilities[i]}});
    }
    fj["histories"] = std::move(hs);
    families.push_back(std::move(fj));

    if (!opts.json) {
      out << "\nobserver " << o->name << ": " << (r.consistent ? "consistent" : "INCONSISTENT")
          << "\n";
      out << "  max off-diagonal: " << num(r.max_offdiag);
      if (r.labels.size() > 1) {
        out << " between " << r.labels[r.worst_row] << " and " << r.labels[r.worst_col];
      }
      out << " (threshold " << num(r.threshold) << ")\n";
      std::size_t width = 8;
      for (const auto& label : r.labels) width = std::max(width, label.size() + 2);
      out << "  " << std::left << std::setw(static_cast<int>(width)) << "history"
          << "probability\n";
      for (std::size_t i = 0; i < r.labels.size(); ++i) {
        out << "  " << std::setw(static_cast<int>(width)) << r.labels[i]
            << num(r.probabilities[i]) << "\n";
      }
      out << "  " << std::setw(static_cast<int>(width)) << "sum" << num(sum) << "\n"
          << std::right;
      if (!r.consistent) {
        out << "  note: probabilities are not additive in an inconsistent family\n";
      }
    }
  }
  report["families"] = std::move(families);
  report["all_consistent"] = all_consistent;
  if (opts.json) out << report.dump(2) << "\n";
  return all_consistent ? kOk : kInconsistent;
}

// ---------------------------------------------------------------------------
// classify

ordered_json compatibility_json(const CompatibilityReport& r) {
  ordered_json j;
  j["observers"] = r.observers;
  j["verdict"] = std::string(to_string(r.verdict));
  j["failing_condition"] = std::string(to_string(r.failing));
  ordered_json slots = ordered_json::array();
  for (const auto& s : r.per_slot) {
    slots.push_back({{"time", s.time},
                     {"max_residual", s.max_residual},
                     {"commutes", s.commutes},
                     {"worst_pair", {s.worst_first, s.worst_second}}});
  }
  j["condition1"] = std::move(slots);
  ordered_json c2;
  c2["evaluated"] = r.product_consistency.has_value();
  if (r.product_consistency) {
    c2["histories"] = r.product_history_count;
    c2["consistent"] = r.product_consistency->consistent;
    c2["max_offdiag"] = r.product_consistency->max_offdiag;
  }
  j["condition2"] = std::move(c2);
  return j;
}

void print_compatibility(const CompatibilityReport& r, std::ostream& out) {
  std::string names;
  for (const auto& n : r.observers) names += (names.empty() ? "" : " & ") + n;
  out << names << ": " << to_string(r.verdict);
  if (r.failing != FailingCondition::None) out << " (" << to_string(r.failing) << " fails)";
  out << "\n";
  for (const auto& s : r.per_slot) {
    out << "  condition 1 @ " << s.time << ": " << (s.commutes ? "commute" : "DO NOT commute")
        << ", max residual " << num(s.max_residual);
    if (!s.commutes) out << " (" << s.worst_first << " vs " << s.worst_second << ")";
    out << "\n";
  }
  if (r.product_consistency) {
    out << "  condition 2: product family of " << r.product_history_count << " histories is "
        << (r.product_consistency->consistent ? "consistent" : "INCONSISTENT")
        << ", max off-diagonal " << num(r.product_consistency->max_offdiag) << "\n";
  } else {
    out << "  condition 2: skipped (slot products are not projectors)\n";
  }
}

int cmd_classify(const CommonOptions& opts, const std::vector<std::string>& pair,
                 std::ostream& out, std::ostream& err) {
  const Loaded l = load(opts);
  if (l.observers.size() < 2 && pair.empty()) {
    err << "error: classification needs at least two observers\n";
    return kInputError;
  }
  std::vector<std::pair<const ObserverRecord*, const ObserverRecord*>> pairs;
  if (!pair.empty()) {
    const ObserverRecord* a = find_observer(l.observers, pair[0]);
    const ObserverRecord* b = find_observer(l.observers, pair[1]);
    if (!a || !b) {
      err << "error: no observer named '" << (a ? pair[1] : pair[0]) << "'\n";
      return kInputError;
    }
    pairs.emplace_back(a, b);
  } else {
    for (std::size_t i = 0; i < l.observers.size(); ++i) {
      for (std::size_t j = i + 1; j < l.observers.size(); ++j) {
        pairs.emplace_back(&l.observers[i], &l.observers[j]);
      }
    }
  }

  ordered_json report = report_header("classify", l);
  ordered_json pj = ordered_json::array();
  if (!opts.json) out << "scenario: " << l.scenario.name << "\n";
  for (const auto& [a, b] : pairs) {
    const CompatibilityReport r = check_compatibility(*a, *b, l.tol);
    pj.push_back(compatibility_json(r));
    if (!opts.json) print_compatibility(r, out);
  }
  report["pairs"] = std::move(pj);
  if (pair.empty() && l.observers.size() >= 3) {
    const CompatibilityReport all = check_compatibility_all(l.observers, l.tol);
    ordered_json aj = compatibility_json(all);
    aj["extension"] = "n-way product of all observers";
    report["all_observers"] = std::move(aj);
    if (!opts.json) {
      out << "all observers (n-way extension): ";
      print_compatibility(all, out);
    }
  }
  if (opts.json) out << report.dump(2) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// conditional

TimedEvent parse_event(const std::string& spec, const HistoryFamily& family) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
    throw Error(ErrorCode::InvalidValue, "event '" + spec + "' must look like TIME:LABEL");
  }
  TimedEvent ev{spec.substr(0, colon), spec.substr(colon + 1)};
  std::string& label = std::get<std::string>(ev.what);
  const std::size_t slot = family.grid().slot_of(ev.time);
  if (!family.slots()[slot].find(label) && label.find('&') != std::string::npos) {
    std::string alias;
    for (char c : label) alias += c == '&' ? std::string(kAndSeparator) : std::string(1, c);
    label = alias;
  }
  return ev;
}

int cmd_conditional(const CommonOptions& opts, const std::string& family_name,
                    const std::string& event, const std::string& given, std::ostream& out,
                    std::ostream& err) {
  const Loaded l = load(opts);
  if (l.observers.empty()) {
    err << "error: scenario '" << l.scenario.name << "' has no observers\n";
    return kInputError;
  }
  std::string which = family_name;
  if (which.empty()) {
    if (l.observers.size() != 1) {
      err << "error: --family is required when the scenario has several observers\n";
      return kInputError;
    }
    which = l.observers.front().name;
  }
  std::optional<HistoryFamily> family;
  if (which == "combined") {
    try {
      family = combine_all(l.observers, l.tol);
    } catch (const NotCompatibleError& e) {
      err << "refused: " << e.what()
          << "; incompatible frameworks cannot be combined into a single framework\n";
      return kSingleFrameworkRefusal;
    }
  } else {
    const ObserverRecord* o = find_observer(l.observers, which);
    if (!o) {
      err << "error: no observer named '" << which << "'\n";
      return kInputError;
    }
    family = o->family;
  }

  try {
    const FactQuery q{parse_event(event, *family), parse_event(given, *family)};
    const double p = conditional_probability(*family, q, l.tol);
    if (opts.json) {
      ordered_json report = report_header("conditional", l);
      report["family"] = which;
      report["event"] = event;
      report["given"] = given;
      report["probability"] = p;
      out << report.dump(2) << "\n";
    } else {
      out << "P(" << event << " | " << given << ") = " << num(p) << "  [family " << which
          << "]\n";
    }
    return kOk;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InconsistentFamily:
        err << "refused: " << e.what() << "\n";
        return kSingleFrameworkRefusal;
      case ErrorCode::UnknownLabel:
        err << "refused: " << e.what()
            << "; the family says nothing about that property at that time\n";
        return kSingleFrameworkRefusal;
      case ErrorCode::ZeroProbabilityCondition:
        err << "error: " << e.what() << "\n";
        return kInconsistent;
      default:
        throw;
    }
  }
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const CommonOptions& opts, std::ostream& out, std::ostream& err,
               const Hooks& hooks) {
  const Loaded l = load(opts);
  if (l.observers.empty()) {
    err << "error: scenario '" << l.scenario.name << "' has no observers to verify\n";
    return kInputError;
  }
  std::vector<std::pair<std::string, HistoryFamily>> families;
  for (const auto& o : l.observers) families.emplace_back(o.name, o.family);
  for (std::size_t i = 0; i < l.observers.size(); ++i) {
    for (std::size_t j = i + 1; j < l.observers.size(); ++j) {
      const auto r = check_compatibility(l.observers[i], l.observers[j], l.tol);
      if (r.verdict == Verdict::Stable) {
        families.emplace_back(l.observers[i].name + "+" + l.observers[j].name,
                              combine(l.observers[i], l.observers[j], l.tol));
      }
    }
  }

  ordered_json report = report_header("verify", l);
  ordered_json fj = ordered_json::array();
  bool ok = true;
  double worst = 0.0;
  std::string worst_where;
  for (const auto& [name, fam] : families) {
    double fam_worst = 0.0;
    std::string fam_worst_history;
    for (const History& h : fam.histories()) {
      const std::string label = fam.label_of(h);
      const double seq = oracle::sequential_probability(fam, oracle::sequence_of(fam, h));
      double chain = history_probability(fam, h);
      if (hooks.corrupt_probability) chain = hooks.corrupt_probability(label, chain);
      const double d = std::abs(seq - chain);
      if (d >= fam_worst) {
        fam_worst = d;
        fam_worst_history = label;
      }
    }
    const bool consistent = consistency_check(fam, l.tol).consistent;
    std::optional<std::size_t> violations;
    if (fam.histories().size() <= oracle::kDefaultScanCap) {
      violations = oracle::exhaustive_additivity_scan(fam, l.tol).size();
    }
    const bool fam_ok = fam_worst <= kOracleLimit && !(consistent && violations.value_or(0) > 0);
    ok = ok && fam_ok;
    if (fam_worst >= worst) {
      worst = fam_worst;
      worst_where = name + " " + fam_worst_history;
    }

    ordered_json j;
    j["family"] = name;
    j["histories"] = fam.histories().size();
    j["max_discrepancy"] = fam_worst;
    j["worst_history"] = fam_worst_history;
    j["consistent"] = consistent;
    j["additivity_violations"] = violations ? ordered_json(*violations) : ordered_json(nullptr);
    j["ok"] = fam_ok;
    fj.push_back(std::move(j));
    if (!opts.json) {
      out << name << ": " << fam.histories().size() << " histories, max |oracle - chain| = "
          << num(fam_worst) << ", "
          << (violations ? std::to_string(*violations) + " additivity violation(s)"
                         : std::string("additivity scan skipped (size cap)"))
          << (consistent ? " [consistent]" : " [inconsistent]") << (fam_ok ? "" : "  FAIL")
          << "\n";
    }
  }
  report["families"] = std::move(fj);
  report["ok"] = ok;
  if (opts.json) out << report.dump(2) << "\n";
  if (!ok) {
    err << "oracle discrepancy: worst history " << worst_where << " (" << num(worst) << ")\n";
    return kOracleDiscrepancy;
  }
  if (!opts.json) out << "ok: chain kets agree with the sequential oracle\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Hooks& hooks) {
  CLI::App app{"qhist: consistent-histories analysis of observer scenarios", "qhist"};
  app.require_subcommand(1);

  CommonOptions validate_opts;
  auto* validate = app.add_subcommand("validate", "Parse and resolve a scenario");
  add_common(validate, validate_opts, false);

  CommonOptions analyze_opts;
  std::vector<std::string> analyze_only;
  auto* analyze = app.add_subcommand("analyze", "Consistency and probabilities per observer");
  add_common(analyze, analyze_opts, true);
  analyze->add_option("--observer", analyze_only, "Restrict to these observers");

  CommonOptions classify_opts;
  std::vector<std::string> classify_pair;
  bool all_pairs = false;
  auto* classify = app.add_subcommand("classify", "Stable vs relative facts per observer pair");
  add_common(classify, classify_opts, true);
  auto* pair_opt = classify->add_option("--pair", classify_pair, "Two observer names")
                       ->expected(2);
  classify->add_flag("--all-pairs", all_pairs, "Every pair (default)")->excludes(pair_opt);

  CommonOptions cond_opts;
  std::string cond_family;
  std::string cond_event;
  std::string cond_given;
  auto* conditional = app.add_subcommand("conditional", "P(event | condition) in one family");
  add_common(conditional, cond_opts, true);
  conditional->add_option("--family", cond_family, "Observer name or 'combined'");
  conditional->add_option("--event", cond_event, "TIME:LABEL")->required();
  conditional->add_option("--given", cond_given, "TIME:LABEL")->required();

  CommonOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Cross-check chain kets against the oracle");
  add_common(verify, verify_opts, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }

  try {
    if (*validate) return cmd_validate(validate_opts, out);
    if (*analyze) return cmd_analyze(analyze_opts, analyze_only, out, err);
    if (*classify) return cmd_classify(classify_opts, classify_pair, out, err);
    if (*conditional) {
      return cmd_conditional(cond_opts, cond_family, cond_event, cond_given, out, err);
    }
    if (*verify) return cmd_verify(verify_opts, out, err, hooks);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace qhist::cli
