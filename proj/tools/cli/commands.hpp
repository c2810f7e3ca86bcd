#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ucw/branch_and_bound.hpp"
#include "ucw/functional.hpp"

namespace ucw::cli {

enum class Format { Text, Csv, Json };

Format parse_format(const std::string& name);

// Builtin name ("I", "F") or a path to a witness file.
FunctionalSpec resolve_witness(const std::string& arg);

// Classical bound a command compares against. provenance is "published" for the
// shipped constants, "certified" for a converged certificate found in
// $UCW_CACHE_DIR, "override" when given on the command line.
struct ReferenceBound {
  double value = 0.0;
  std::string provenance;
};

std::optional<std::filesystem::path> cache_dir();
std::optional<ReferenceBound> reference_bound(const FunctionalSpec& spec);
// Writes <cache>/<name>.json when the cache is configured and c converged.
// Returns the path written, if any.
std::optional<std::filesystem::path> store_certificate(const FunctionalSpec& spec, const BoundCertificate& c);
std::optional<BoundCertificate> cached_certificate(const FunctionalSpec& spec);

struct EvaluateConfig {
  std::string witness = "I";
  std::optional<std::string> behavior_file;  // {"p": [...]} optionally with "a_do"/"c_do"
  std::optional<std::string> do_file;
  std::optional<double> theta;               // noisy quantum family
  double visibility = 1.0;
  std::optional<std::string> fixture;        // "I-optimal" or "F-optimal"
  bool uniform = false;
  std::optional<double> bound;
  Format format = Format::Text;
};

struct CertifyConfig {
  std::string witness = "I";
  double gap = 1e-3;
  std::uint64_t seed = 1;
  int workers = 1;
  std::size_t node_cap = 1'000'000;
  double time_limit_seconds = 1800.0;
  bool quiet = false;
  Format format = Format::Json;
};

struct ScanConfig {
  std::vector<double> thetas;
  std::vector<double> visibilities;
  int workers = 1;
  Format format = Format::Csv;
};

struct ScanRow {
  double theta = 0.0;
  double visibility = 0.0;
  double i_value = 0.0;
  double f_value = 0.0;
  bool violates_i = false;
  bool violates_f = false;
};

struct CritvisConfig {
  std::vector<std::string> witnesses{"I", "F"};
  std::optional<double> bound;
  Format format = Format::Text;
};

struct SubspaceConfig {
  int grid = 41;
  int curve_samples = 64;
  int workers = 1;
  Format format = Format::Csv;
};

struct SubspaceRow {
  std::string kind;  // "grid" or "curve"
  double r = 0.0;
  double s = 0.0;
  double i_value = 0.0;
  double f_value = 0.0;
  std::string classification;
};

struct ReproduceConfig {
  std::filesystem::path witness_dir;
  std::set<std::string> skip;
  std::uint64_t seed = 1;
  int workers = 1;
  double gap = 1e-3;
  double cert_time_limit_seconds = 1800.0;
  int local_search_starts = 200;
  Format format = Format::Text;
};

enum class CheckStatus { Pass, Fail, Skipped };

struct CheckRow {
  std::string group;
  std::string name;
  std::string expected;   // reference value with its relation
  double computed = 0.0;
  std::string tolerance;
  CheckStatus status = CheckStatus::Skipped;
};

// Groups accepted by --skip.
const std::vector<std::string>& check_groups();

std::vector<ScanRow> scan(const ScanConfig& config);
SubspaceRow classify_subspace_point(double r, double s, double bound_i, double bound_f);
std::vector<SubspaceRow> subspace(const SubspaceConfig& config);
std::vector<CheckRow> reproduce_all(const ReproduceConfig& config, std::ostream& log);

// Each returns the process exit code.
int cmd_evaluate(const EvaluateConfig& config, std::ostream& out);
int cmd_certify(const CertifyConfig& config, std::ostream& out, std::ostream& log);
int cmd_scan(const ScanConfig& config, std::ostream& out);
int cmd_critvis(const CritvisConfig& config, std::ostream& out);
int cmd_subspace(const SubspaceConfig& config, std::ostream& out);
int cmd_reproduce_all(const ReproduceConfig& config, std::ostream& out, std::ostream& log);

// "33x11" -> {33, 11}; a single number applies to both axes.
std::pair<int, int> parse_grid(const std::string& text);
// Comma-separated numbers; "pi", "pi/8", "3pi/8" and "atan(1/3)" forms allowed.
std::vector<double> parse_number_list(const std::string& text);
std::vector<double> linspace(double lo, double hi, int n);

// 6 significant digits, as used in tables.
std::string format_sig(double v, int digits = 6);

}  // namespace ucw::cli
