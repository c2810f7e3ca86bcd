#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ucw/error.hpp"

#ifndef UCW_WITNESS_DIR
#define UCW_WITNESS_DIR "witnesses"
#endif

namespace {

using namespace ucw::cli;

struct Common {
  std::string witness = "I";
  std::string grid;
  double gap = 1e-3;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out;
  std::string format;
};

void add_common(CLI::App* sub, Common& c, bool witness = true) {
  if (witness) sub->add_option("--witness", c.witness, "builtin witness (I, F) or witness file")->capture_default_str();
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_option("--workers", c.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "output file (default stdout)");
  sub->add_option("--format", c.format, "text, csv or json");
}

Format pick(const Common& c, Format fallback) { return c.format.empty() ? fallback : parse_format(c.format); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical bounds and quantum violations of witnesses for the UC causal network"};
  app.require_subcommand(1);
  Common common;

  EvaluateConfig ev;
  std::string theta_text;
  auto* evaluate = app.add_subcommand("evaluate", "evaluate a witness on a behavior");
  add_common(evaluate, common);
  evaluate->add_option("--behavior", ev.behavior_file, "behavior JSON, optionally with a_do/c_do");
  evaluate->add_option("--do", ev.do_file, "do-data JSON");
  evaluate->add_option("--theta", theta_text, "quantum family angle (e.g. pi/8)");
  evaluate->add_option("--visibility", ev.visibility, "quantum family visibility")->capture_default_str();
  evaluate->add_option("--fixture", ev.fixture, "I-optimal or F-optimal");
  evaluate->add_flag("--uniform", ev.uniform, "uniform behavior");
  evaluate->add_option("--bound", ev.bound, "compare against this bound");

  CertifyConfig ce;
  auto* certify = app.add_subcommand("certify", "certify the classical maximum by branch-and-bound");
  add_common(certify, common);
  certify->add_option("--gap", common.gap, "absolute gap target")->capture_default_str();
  certify->add_option("--node-cap", ce.node_cap, "node limit")->capture_default_str();
  certify->add_option("--time-limit", ce.time_limit_seconds, "seconds")->capture_default_str();
  certify->add_flag("--quiet", ce.quiet, "no progress lines");

  std::string thetas, visibilities;
  auto* scan = app.add_subcommand("scan", "quantum family witness values over (theta, v)");
  add_common(scan, common, false);
  scan->add_option("--grid", common.grid, "NTHETAxNV over [0,pi/2] x [0,1]")->default_str("33x11");
  scan->add_option("--theta", thetas, "comma-separated angles, overrides the grid axis");
  scan->add_option("--visibility", visibilities, "comma-separated visibilities, overrides the grid axis");

  CritvisConfig cv;
  std::string critvis_witness;
  auto* critvis = app.add_subcommand("critvis", "critical visibility of the quantum family");
  add_common(critvis, common, false);
  critvis->add_option("--witness", critvis_witness, "I or F (default both)");
  critvis->add_option("--bound", cv.bound, "classical bound override");

  SubspaceConfig su;
  auto* sub = app.add_subcommand("subspace", "classification of the (r, s) subspace");
  add_common(sub, common, false);
  sub->add_option("--grid", common.grid, "points per axis over [-1/4, 1/4]")->default_str("41");
  sub->add_option("--curve-samples", su.curve_samples, "samples of 16(r^2+s^2)=1")->capture_default_str();

  ReproduceConfig re;
  std::string witness_dir = UCW_WITNESS_DIR;
  std::vector<std::string> skip;
  auto* reproduce = app.add_subcommand("reproduce-all", "run every check and print a pass/fail table");
  add_common(reproduce, common, false);
  reproduce->add_option("--witness-dir", witness_dir, "directory with I.witness and F.witness")->capture_default_str();
  reproduce->add_option("--skip", skip, "check groups to skip")->check(CLI::IsMember(check_groups()));
  reproduce->add_option("--gap", common.gap, "certification gap target")->capture_default_str();
  reproduce->add_option("--time-limit", re.cert_time_limit_seconds, "certification seconds per witness")
      ->capture_default_str();
  reproduce->add_option("--starts", re.local_search_starts, "local search starts")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<std::ofstream> file;
  std::ostream* out = &std::cout;
  if (!common.out.empty()) {
    file = std::make_unique<std::ofstream>(common.out);
    if (!*file) {
      std::cerr << "error: cannot write " << common.out << "\n";
      return 1;
    }
    out = file.get();
  }

  try {
    if (*evaluate) {
      ev.witness = common.witness;
      if (!theta_text.empty()) ev.theta = parse_number_list(theta_text).at(0);
      ev.format = pick(common, Format::Text);
      return cmd_evaluate(ev, *out);
    }
    if (*certify) {
      ce.witness = common.witness;
      ce.gap = common.gap;
      ce.seed = common.seed;
      ce.workers = common.workers;
      ce.format = pick(common, Format::Json);
      return cmd_certify(ce, *out, std::cerr);
    }
    if (*scan) {
      ScanConfig sc;
      const auto [nt, nv] = parse_grid(common.grid.empty() ? "33x11" : common.grid);
      sc.thetas = thetas.empty() ? linspace(0.0, std::numbers::pi / 2.0, nt) : parse_number_list(thetas);
      sc.visibilities = visibilities.empty() ? linspace(0.0, 1.0, nv) : parse_number_list(visibilities);
      sc.workers = common.workers;
      sc.format = pick(common, Format::Csv);
      return cmd_scan(sc, *out);
    }
    if (*critvis) {
      if (!critvis_witness.empty()) cv.witnesses = {critvis_witness};
      cv.format = pick(common, Format::Text);
      return cmd_critvis(cv, *out);
    }
    if (*sub) {
      su.grid = parse_grid(common.grid.empty() ? "41" : common.grid).first;
      su.workers = common.workers;
      su.format = pick(common, Format::Csv);
      return cmd_subspace(su, *out);
    }
    if (*reproduce) {
      re.witness_dir = witness_dir;
      re.skip = {skip.begin(), skip.end()};
      re.seed = common.seed;
      re.workers = common.workers;
      re.gap = common.gap;
      re.format = pick(common, Format::Text);
      return cmd_reproduce_all(re, *out, std::cerr);
    }
  } catch (const ucw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
