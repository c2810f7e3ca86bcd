#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "ucw/classical.hpp"
#include "ucw/error.hpp"
#include "ucw/json_io.hpp"
#include "ucw/local_search.hpp"
#include "ucw/quantum.hpp"
#include "ucw/witness_parser.hpp"

namespace ucw::cli {
namespace {

constexpr double kPi = std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidInputError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw InvalidInputError("not a number: '" + text + "'");
  return v;
}

// number | a/b | [k][*]pi[/d] | atan(...)
double parse_scalar(const std::string& raw) {
  const std::string t = trim(raw);
  if (t.empty()) throw InvalidInputError("empty number");
  if (t.rfind("atan(", 0) == 0 && t.back() == ')') return std::atan(parse_scalar(t.substr(5, t.size() - 6)));
  const auto pi = t.find("pi");
  if (pi != std::string::npos) {
    std::string head = t.substr(0, pi);
    if (!head.empty() && head.back() == '*') head.pop_back();
    const double k = head.empty() ? 1.0 : parse_plain(head);
    const std::string tail = t.substr(pi + 2);
    if (tail.empty()) return k * kPi;
    if (tail[0] != '/') throw InvalidInputError("cannot read '" + t + "'");
    return k * kPi / parse_plain(tail.substr(1));
  }
  const auto slash = t.find('/');
  if (slash != std::string::npos) return parse_plain(t.substr(0, slash)) / parse_plain(t.substr(slash + 1));
  return parse_plain(t);
}

template <class F>
void parallel_for(std::size_t n, int workers, F&& body) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(n, 1));
  if (w == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += w) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

double stored_bound(std::string_view name) { return name == "I" ? kStoredBoundI : kStoredBoundF; }

// Printed name of a term for breakdowns.
std::string term_label(const FunctionalSpec& spec, const TermContribution& t) {
  const FunctionalTerm* term = nullptr;
  std::string wrap;
  switch (t.kind) {
    case TermKind::Sqrt:
      term = &spec.sqrt_terms()[t.index];
      wrap = "sqrt";
      break;
    case TermKind::Abs:
      term = &spec.abs_terms()[t.index];
      wrap = "abs";
      break;
    case TermKind::Linear:
      term = &spec.linear_terms()[t.index];
      break;
  }
  std::string inner = term->form.to_string();
  if (!wrap.empty()) inner = wrap + "(" + inner + ")";
  return term->coefficient.to_string() + "*" + inner;
}

std::string status_text(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "FAIL";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_sig(double v, int digits) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v == 0.0 ? 0.0 : v);
  return buf;
}

Format parse_format(const std::string& name) {
  if (name == "text") return Format::Text;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw ConfigurationError("unknown format '" + name + "' (expected text, csv or json)");
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  const int a = static_cast<int>(parse_plain(trim(text.substr(0, x))));
  const int b = x == std::string::npos ? a : static_cast<int>(parse_plain(trim(text.substr(x + 1))));
  if (a < 1 || b < 1) throw ConfigurationError("grid sizes must be positive: '" + text + "'");
  return {a, b};
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_scalar(item));
  if (out.empty()) throw InvalidInputError("empty number list");
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return out;
}

FunctionalSpec resolve_witness(const std::string& arg) {
  if (arg == "I" || arg == "F") return builtin(arg);
  if (!std::filesystem::exists(arg)) {
    throw ConfigurationError("witness '" + arg + "' is neither a builtin (I, F) nor an existing file");
  }
  return load_witness_file(arg);
}

std::optional<std::filesystem::path> cache_dir() {
  const char* env = std::getenv("UCW_CACHE_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::filesystem::path(env);
}

std::optional<BoundCertificate> cached_certificate(const FunctionalSpec& spec) {
  const auto dir = cache_dir();
  if (!dir || spec.name().empty()) return std::nullopt;
  const auto path = *dir / (spec.name() + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const Json j = Json::parse(in);
    // A certificate only vouches for the exact witness it was computed for.
    if (j.value("witness_text", std::string{}) != to_text(spec)) return std::nullopt;
    BoundCertificate c = certificate_from_json(j);
    if (!c.converged) return std::nullopt;
    return c;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<std::filesystem::path> store_certificate(const FunctionalSpec& spec, const BoundCertificate& c) {
  const auto dir = cache_dir();
  if (!dir || !c.converged || spec.name().empty()) return std::nullopt;
  std::filesystem::create_directories(*dir);
  const auto path = *dir / (spec.name() + ".json");
  Json j = to_json(c);
  j["witness_text"] = to_text(spec);
  j["provenance"] = "certified";
  std::ofstream(path) << j.dump(2) << "\n";
  return path;
}

std::optional<ReferenceBound> reference_bound(const FunctionalSpec& spec) {
  if (auto c = cached_certificate(spec)) return ReferenceBound{c->upper, "certified"};
  for (const char* name : {"I", "F"}) {
    if (spec == builtin(name)) return ReferenceBound{stored_bound(name), "published"};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const EvaluateConfig& config, std::ostream& out) {
  const FunctionalSpec spec = resolve_witness(config.witness);
  const int sources = int(config.behavior_file.has_value()) + int(config.theta.has_value()) +
                      int(config.fixture.has_value()) + int(config.uniform);
  if (sources != 1) throw ConfigurationError("give exactly one of --behavior, --theta, --fixture, --uniform");

  std::optional<Behavior> p;
  std::optional<DoData> d;
  std::string source;
  if (config.behavior_file) {
    std::ifstream in(*config.behavior_file);
    if (!in) throw ConfigurationError("cannot open " + *config.behavior_file);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw InvalidInputError(*config.behavior_file + ": " + e.what());
    }
    p = behavior_from_json(j);
    if (j.contains("a_do") || j.contains("c_do")) d = do_data_from_json(j);
    source = *config.behavior_file;
  } else if (config.theta) {
    const QuantumStrategy s = swapping_strategy(*config.theta, config.visibility);
    p = born_behavior(s);
    d = born_do_data(s);
    source = "quantum family theta=" + format_sig(*config.theta) + " v=" + format_sig(config.visibility);
  } else if (config.fixture) {
    const Fixture f = fixture(*config.fixture);
    p = classical_behavior(f.model);
    d = classical_do_data(f.model);
    source = "fixture " + f.name;
  } else {
    p = Behavior::uniform();
    d = DoData::unbiased();
    source = "uniform behavior";
  }
  if (config.do_file) {
    std::ifstream in(*config.do_file);
    if (!in) throw ConfigurationError("cannot open " + *config.do_file);
    try {
      d = do_data_from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
      throw InvalidInputError(*config.do_file + ": " + e.what());
    }
  }

  const WitnessValue w = evaluate(spec, *p, d);
  std::optional<ReferenceBound> bound = reference_bound(spec);
  if (config.bound) bound = ReferenceBound{*config.bound, "override"};
  const bool violation = bound && w.value > bound->value;

  if (config.format == Format::Json) {
    Json j{{"witness", spec.name()}, {"source", source}, {"value", w.value}};
    Json terms = Json::array();
    for (const auto& t : w.terms) {
      terms.push_back({{"term", term_label(spec, t)}, {"argument", t.argument}, {"contribution", t.contribution}});
    }
    j["terms"] = terms;
    if (bound) {
      j["bound"] = {{"value", bound->value}, {"provenance", bound->provenance}};
      j["violation"] = violation;
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  if (config.format == Format::Csv) {
    out << "term,argument,contribution\n";
    for (const auto& t : w.terms) {
      out << csv_escape(term_label(spec, t)) << "," << format_sig(t.argument) << "," << format_sig(t.contribution) << "\n";
    }
    out << "total,," << format_sig(w.value) << "\n";
    return 0;
  }
  out << spec.name() << " on " << source << "\n";
  std::size_t width = 0;
  for (const auto& t : w.terms) width = std::max(width, term_label(spec, t).size());
  for (const auto& t : w.terms) {
    out << "  " << std::left << std::setw(static_cast<int>(width) + 2) << term_label(spec, t) << std::right
        << std::setw(12) << format_sig(t.contribution) << "\n";
  }
  if (!bound) {
    out << format_sig(w.value) << " (no stored bound for this witness)\n";
  } else {
    out << format_sig(w.value) << (violation ? " > " : " <= ") << format_sig(bound->value, 7)
        << (violation ? " (VIOLATION)" : " (no violation)") << " [bound: " << bound->provenance << "]\n";
  }
  return 0;
}

// ----------------------------------------------------------------- certify

int cmd_certify(const CertifyConfig& config, std::ostream& out, std::ostream& log) {
  const FunctionalSpec spec = resolve_witness(config.witness);
  BranchAndBoundOptions opt;
  opt.gap = config.gap;
  opt.seed = config.seed;
  opt.workers = config.workers;
  opt.node_cap = config.node_cap;
  opt.time_limit_seconds = config.time_limit_seconds;
  if (!config.quiet) {
    opt.progress_every = 2000;
    opt.progress = [&log](const BranchProgress& p) {
      log << "  nodes " << p.nodes << "  frontier " << p.frontier << "  [" << format_sig(p.lower) << ", "
          << format_sig(p.upper) << "]  " << format_sig(p.seconds) << " s\n";
    };
  }
  const BoundCertificate c = branch_and_bound(spec, opt);

  if (config.format == Format::Text) {
    out << spec.name() << ": [" << std::setprecision(10) << c.lower << ", " << c.upper << "] gap " << c.gap
        << " nodes " << c.nodes << " " << c.termination << "\n";
  } else if (config.format == Format::Csv) {
    out << "witness,lower,upper,gap,nodes,seconds,converged,termination\n"
        << spec.name() << "," << std::setprecision(17) << c.lower << "," << c.upper << "," << c.gap << "," << c.nodes
        << "," << c.seconds << "," << (c.converged ? "true" : "false") << "," << c.termination << "\n";
  } else {
    out << to_json(c).dump(2) << "\n";
  }
  if (auto path = store_certificate(spec, c)) log << "certified bound cached in " << path->string() << "\n";
  if (!c.converged) {
    log << spec.name() << ": not converged (" << c.termination << "), bracket [" << c.lower << ", " << c.upper
        << "]\n";
    return 2;
  }
  return 0;
}

// -------------------------------------------------------------------- scan

std::vector<ScanRow> scan(const ScanConfig& config) {
  const auto bi = reference_bound(builtin("I"));
  const auto bf = reference_bound(builtin("F"));
  const FunctionalSpec spec_i = builtin("I");
  const FunctionalSpec spec_f = builtin("F");
  std::vector<ScanRow> rows(config.thetas.size() * config.visibilities.size());
  parallel_for(rows.size(), config.workers, [&](std::size_t k) {
    ScanRow& r = rows[k];
    r.theta = config.thetas[k / config.visibilities.size()];
    r.visibility = config.visibilities[k % config.visibilities.size()];
    const Behavior p = family_behavior(r.theta, r.visibility);
    r.i_value = evaluate(spec_i, p).value;
    r.f_value = evaluate(spec_f, p, DoData::unbiased()).value;
    r.violates_i = r.i_value > bi->value;
    r.violates_f = r.f_value > bf->value;
  });
  return rows;
}

int cmd_scan(const ScanConfig& config, std::ostream& out) {
  const std::vector<ScanRow> rows = scan(config);
  if (config.format == Format::Json) {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back({{"theta", r.theta}, {"v", r.visibility}, {"I_Q", r.i_value}, {"F_Q", r.f_value},
                   {"violates_I", r.violates_i}, {"violates_F", r.violates_f}});
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "theta,v,I_Q,F_Q,violates_I,violates_F\n";
  for (const auto& r : rows) {
    out << format_sig(r.theta) << "," << format_sig(r.visibility) << "," << format_sig(r.i_value) << ","
        << format_sig(r.f_value) << "," << (r.violates_i ? "true" : "false") << ","
        << (r.violates_f ? "true" : "false") << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- critvis

int cmd_critvis(const CritvisConfig& config, std::ostream& out) {
  Json j = Json::array();
  if (config.format == Format::Csv) out << "witness,bound,provenance,v_crit\n";
  for (const auto& name : config.witnesses) {
    const WitnessKind kind = witness_kind_from_string(name);
    ReferenceBound bound = config.bound ? ReferenceBound{*config.bound, "override"} : *reference_bound(builtin(name));
    const std::optional<double> v = critical_visibility(kind, bound.value);
    if (config.format == Format::Json) {
      j.push_back({{"witness", name},
                   {"bound", bound.value},
                   {"provenance", bound.provenance},
                   {"v_crit", v ? Json(*v) : Json(nullptr)}});
    } else if (config.format == Format::Csv) {
      out << name << "," << format_sig(bound.value) << "," << bound.provenance << "," << (v ? format_sig(*v) : "")
          << "\n";
    } else if (v) {
      out << name << ": v_crit = " << format_sig(*v) << " against " << format_sig(bound.value) << " ["
          << bound.provenance << "]\n";
    } else {
      out << name << ": no violation at v=1 against " << format_sig(bound.value) << " [" << bound.provenance
          << "]\n";
    }
  }
  if (config.format == Format::Json) out << j.dump(2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- subspace

SubspaceRow classify_subspace_point(double r, double s, double bound_i, double bound_f) {
  static const FunctionalSpec spec_i = builtin("I");
  static const FunctionalSpec spec_f = builtin("F");
  const Behavior p = subspace_behavior({r, s});
  SubspaceRow row;
  row.r = r;
  row.s = s;
  row.i_value = evaluate(spec_i, p).value;
  row.f_value = evaluate(spec_f, p, DoData::unbiased()).value;
  if (row.i_value > bound_i) {
    row.classification = "I-violating";
  } else if (row.f_value > bound_f) {
    row.classification = "F-violating";
  } else {
    row.classification = "classical-satisfying";
  }
  return row;
}

std::vector<SubspaceRow> subspace(const SubspaceConfig& config) {
  const double bi = reference_bound(builtin("I"))->value;
  const double bf = reference_bound(builtin("F"))->value;
  const std::vector<double> axis = linspace(-0.25, 0.25, config.grid);
  const auto n = static_cast<std::size_t>(config.grid);
  std::vector<SubspaceRow> rows(n * n + static_cast<std::size_t>(config.curve_samples));
  parallel_for(n * n, config.workers, [&](std::size_t k) {
    rows[k] = classify_subspace_point(axis[k / n], axis[k % n], bi, bf);
    rows[k].kind = "grid";
  });
  for (int i = 0; i < config.curve_samples; ++i) {
    const double phi = 2.0 * kPi * i / config.curve_samples;
    SubspaceRow& row = rows[n * n + static_cast<std::size_t>(i)];
    row = classify_subspace_point(std::cos(phi) / 4.0, std::sin(phi) / 4.0, bi, bf);
    row.kind = "curve";
  }
  return rows;
}

int cmd_subspace(const SubspaceConfig& config, std::ostream& out) {
  const std::vector<SubspaceRow> rows = subspace(config);
  if (config.format == Format::Json) {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back({{"kind", r.kind}, {"r", r.r}, {"s", r.s}, {"I", r.i_value}, {"F", r.f_value},
                   {"class", r.classification}});
    }
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "kind,r,s,I,F,class\n";
  for (const auto& r : rows) {
    out << r.kind << "," << format_sig(r.r) << "," << format_sig(r.s) << "," << format_sig(r.i_value) << ","
        << format_sig(r.f_value) << "," << r.classification << "\n";
  }
  return 0;
}

// ----------------------------------------------------------- reproduce-all

const std::vector<std::string>& check_groups() {
  static const std::vector<std::string> groups{"born",     "evaluate",     "theta",   "critvis",
                                               "fixtures", "local-search", "certify", "subspace"};
  return groups;
}

std::vector<CheckRow> reproduce_all(const ReproduceConfig& config, std::ostream& log) {
  for (const auto& g : config.skip) {
    if (std::find(check_groups().begin(), check_groups().end(), g) == check_groups().end()) {
      throw ConfigurationError("unknown check group '" + g + "'");
    }
  }
  const FunctionalSpec spec_i = load_witness_file(config.witness_dir / "I.witness");
  const FunctionalSpec spec_f = load_witness_file(config.witness_dir / "F.witness");
  std::vector<CheckRow> rows;
  auto skipped = [&](const std::string& group) { return config.skip.count(group) > 0; };

  auto near = [&](const std::string& group, const std::string& name, double expected, double tol,
                  const std::function<double()>& compute) {
    CheckRow row{group, name, format_sig(expected), 0.0, "± " + format_sig(tol), CheckStatus::Skipped};
    if (!skipped(group)) {
      row.computed = compute();
      row.status = std::abs(row.computed - expected) <= tol ? CheckStatus::Pass : CheckStatus::Fail;
    }
    rows.push_back(row);
  };
  // sign +1: computed >= expected; -1: computed <= expected; +2: strictly above.
  auto compare = [&](const std::string& group, const std::string& name, double expected, int sign,
                     const std::function<double()>& compute) {
    const std::string rel = sign == 2 ? "> " : (sign > 0 ? ">= " : "<= ");
    CheckRow row{group, name, rel + format_sig(expected), 0.0, "", CheckStatus::Skipped};
    if (!skipped(group)) {
      row.computed = compute();
      const bool ok = sign == 2 ? row.computed > expected
                                : (sign > 0 ? row.computed >= expected : row.computed <= expected);
      row.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    }
    rows.push_back(row);
  };

  // Born rule against the closed-form family.
  near("born", "born vs closed form, 32 theta", 0.0, 1e-12, [] {
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      const double t = kPi * k / 32.0;
      worst = std::max(worst, born_behavior(swapping_strategy(t)).max_abs_diff(family_behavior(t)));
    }
    return worst;
  });
  near("born", "P(b=0) - 1/4, 32 theta", 0.0, 1e-12, [] {
    double worst = 0.0;
    for (int k = 0; k < 32; ++k) {
      worst = std::max(worst, std::abs(born_behavior(swapping_strategy(kPi * k / 32.0)).marginal_b(0) - 0.25));
    }
    return worst;
  });

  const QuantumStrategy pi8 = swapping_strategy(kPi / 8.0);
  auto i_pi8 = [&] { return evaluate(spec_i, born_behavior(pi8)).value; };
  auto f_pi8 = [&] { return evaluate(spec_f, born_behavior(pi8), born_do_data(pi8)).value; };
  near("evaluate", "I at theta=pi/8", 2.69238, 1e-4, i_pi8);
  compare("evaluate", "I at theta=pi/8 exceeds bound", kStoredBoundI, 2, i_pi8);
  near("evaluate", "F at theta=pi/8", 3.15432, 1e-4, f_pi8);
  compare("evaluate", "F at theta=pi/8 exceeds bound", kStoredBoundF, 2, f_pi8);

  near("theta", "theta_I", std::atan(0.4), 1e-4, [] { return maximize_over_theta(WitnessKind::I, 1.0).theta; });
  near("theta", "max_theta I", 2.69258, 1e-4, [] { return maximize_over_theta(WitnessKind::I, 1.0).value; });
  near("theta", "theta_F", std::atan(1.0 / 3.0), 1e-4,
       [] { return maximize_over_theta(WitnessKind::F, 1.0).theta; });
  near("theta", "max_theta F", 3.16228, 1e-4, [] { return maximize_over_theta(WitnessKind::F, 1.0).value; });

  near("critvis", "v_crit I", 0.98873, 1e-4,
       [] { return critical_visibility(WitnessKind::I, kStoredBoundI).value_or(NAN); });
  near("critvis", "v_crit F", 0.87743, 1e-4,
       [] { return critical_visibility(WitnessKind::F, kStoredBoundF).value_or(NAN); });

  auto fixture_value = [](const FunctionalSpec& spec, const char* name) {
    const ClassicalModel m = fixture(name).model;
    return evaluate(spec, classical_behavior(m), classical_do_data(m)).value;
  };
  near("fixtures", "I at I-optimal", 2.56226, 1e-4, [&] { return fixture_value(spec_i, "I-optimal"); });
  near("fixtures", "F at F-optimal", 3.00001, 1e-4, [&] { return fixture_value(spec_f, "F-optimal"); });

  auto search = [&](const FunctionalSpec& spec) {
    log << "local search on " << spec.name() << " (" << config.local_search_starts << " starts)\n";
    LocalSearchOptions o;
    o.starts = config.local_search_starts;
    o.seed = config.seed;
    return local_search(spec, o).value;
  };
  compare("local-search", "local search I", 2.5622, 1, [&] { return search(spec_i); });
  compare("local-search", "local search F", 3.0000, 1, [&] { return search(spec_f); });

  for (const auto* spec : {&spec_i, &spec_f}) {
    const double bound = stored_bound(spec->name() == "I" ? "I" : "F");
    std::optional<BoundCertificate> cert;
    auto certificate = [&]() -> const BoundCertificate& {
      if (!cert) {
        cert = cached_certificate(*spec);
        if (cert) {
          log << "using cached certificate for " << spec->name() << "\n";
        } else {
          log << "certifying " << spec->name() << "\n";
          BranchAndBoundOptions o;
          o.gap = config.gap;
          o.seed = config.seed;
          o.workers = config.workers;
          o.time_limit_seconds = config.cert_time_limit_seconds;
          cert = branch_and_bound(*spec, o);
          store_certificate(*spec, *cert);
        }
      }
      return *cert;
    };
    compare("certify", spec->name() + " certified lower", bound, -1, [&] { return certificate().lower; });
    compare("certify", spec->name() + " certified upper", bound, 1, [&] { return certificate().upper; });
    compare("certify", spec->name() + " bracket width (converged)", 1.1e-3, -1, [&] {
      const auto& c = certificate();
      return c.converged ? c.gap : kInfinity;
    });
  }

  const double bi = kStoredBoundI;
  const double bf = kStoredBoundF;
  near("subspace", "quantum curve 16(r^2+s^2) - 1", 0.0, 1e-12, [] {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
      const double phi = 2.0 * kPi * i / 64.0;
      const double r = std::cos(phi) / 4.0;
      const double s = std::sin(phi) / 4.0;
      worst = std::max(worst, std::abs(16.0 * (r * r + s * s) - 1.0));
    }
    return worst;
  });
  {
    CheckRow row{"subspace", "(sin(pi/4)/4, cos(pi/4)/4) class", "I-violating", 0.0, "", CheckStatus::Skipped};
    if (!skipped("subspace")) {
      const auto p = classify_subspace_point(std::sin(kPi / 4) / 4, std::cos(kPi / 4) / 4, bi, bf);
      row.computed = p.i_value;
      row.status = p.classification == "I-violating" ? CheckStatus::Pass : CheckStatus::Fail;
    }
    rows.push_back(row);
  }
  {
    CheckRow row{"subspace", "(0, 0) class", "classical-satisfying", 0.0, "", CheckStatus::Skipped};
    if (!skipped("subspace")) {
      const auto p = classify_subspace_point(0.0, 0.0, bi, bf);
      row.computed = p.i_value;
      row.status = p.classification == "classical-satisfying" ? CheckStatus::Pass : CheckStatus::Fail;
    }
    rows.push_back(row);
  }
  return rows;
}

int cmd_reproduce_all(const ReproduceConfig& config, std::ostream& out, std::ostream& log) {
  const std::vector<CheckRow> rows = reproduce_all(config, log);
  const bool failed = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.status == CheckStatus::Fail; });
  if (config.format == Format::Json) {
    Json j = Json::array();
    for (const auto& r : rows) {
      j.push_back({{"group", r.group},
                   {"check", r.name},
                   {"expected", r.expected},
                   {"computed", r.status == CheckStatus::Skipped ? Json(nullptr) : Json(r.computed)},
                   {"tolerance", r.tolerance},
                   {"status", status_text(r.status)}});
    }
    out << j.dump(2) << "\n";
  } else if (config.format == Format::Csv) {
    out << "group,check,expected,computed,tolerance,status\n";
    for (const auto& r : rows) {
      out << r.group << "," << csv_escape(r.name) << "," << csv_escape(r.expected) << ","
          << (r.status == CheckStatus::Skipped ? "" : format_sig(r.computed)) << "," << r.tolerance << ","
          << status_text(r.status) << "\n";
    }
  } else {
    for (const auto& r : rows) {
      out << std::left << std::setw(13) << r.group << std::setw(42) << r.name << std::setw(22) << r.expected
          << std::setw(14) << (r.status == CheckStatus::Skipped ? "-" : format_sig(r.computed)) << std::setw(12)
          << r.tolerance << status_text(r.status) << "\n";
    }
    const auto count = [&](CheckStatus s) {
      return std::count_if(rows.begin(), rows.end(), [s](const auto& r) { return r.status == s; });
    };
    out << count(CheckStatus::Pass) << " passed, " << count(CheckStatus::Fail) << " failed, "
        << count(CheckStatus::Skipped) << " skipped\n";
  }
  return failed ? 1 : 0;
}

}  // namespace ucw::cli
