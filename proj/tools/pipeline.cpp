// Command-line driver: builds the bundles for one (prime, seed), runs the
// checks and writes the JSON report.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ulrich/pipeline.hpp"

namespace {

std::pair<int, int> parse_window(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected MIN:MAX");
  try {
    std::size_t a = 0, b = 0;
    int lo = std::stoi(s.substr(0, colon), &a);
    int hi = std::stoi(s.substr(colon + 1), &b);
    if (a != colon || b != s.size() - colon - 1 || lo > hi) throw std::invalid_argument(s);
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--window", "expected MIN:MAX with MIN <= MAX, got " + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  ulrich::PipelineOptions opt;
  std::string out, dump, window = "-6:4";
  int deep_minutes = 60, stab_seconds = 60;

  CLI::App app{"Exact construction and verification of the rank-6 sheaves on a random cubic fourfold"};
  app.add_option("--prime", opt.prime, "characteristic of the base field")->capture_default_str();
  app.add_option("--seed", opt.seed, "seed of the random model")->capture_default_str();
  app.add_option("--out", out, "report file (default: standard output)");
  app.add_option("--window", window, "twist window MIN:MAX for cohomology tables")->capture_default_str();
  app.add_option("--res-length", opt.res_length, "length of the resolution of O_C")->capture_default_str();
  app.add_flag("--deep", opt.deep, "also compute Ext^1(E,E) and Ext^2(E,E)");
  app.add_option("--deep-budget", deep_minutes, "time budget of the deep check in minutes")->capture_default_str();
  app.add_option("--stabilization-budget", stab_seconds, "seconds for each next-degree Ext recomputation")
      ->capture_default_str();
  app.add_option("--dump-model", dump, "write the model (points, cubics, Y, C, D, M, F) to this file");
  app.add_option("--check", opt.checks, "run only this check (repeatable)")
      ->check([](const std::string& s) { return ulrich::is_check_name(s) ? "" : "unknown check " + s; });
  CLI11_PARSE(app, argc, argv);

  try {
    std::tie(opt.window_min, opt.window_max) = parse_window(window);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  opt.deep_budget = std::chrono::minutes(deep_minutes);
  opt.stabilization_budget = std::chrono::seconds(stab_seconds);

  try {
    if (!dump.empty()) {
      ulrich::BundleSet b = ulrich::build_bundles(opt);
      std::ofstream f(dump);
      f << ulrich::ModelDump::of(b.surface, b.fourfold).to_string();
      if (!f) {
        std::cerr << "cannot write " << dump << "\n";
        return 2;
      }
    }
    ulrich::Report rep = ulrich::run_pipeline(opt);
    std::string text = rep.to_json().dump(2) + "\n";
    if (out.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out);
      f << text;
      if (!f) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
      }
    }
    for (const auto& c : rep.checks) {
      std::cerr << c.status << "  " << c.name << "  (" << static_cast<long>(c.wall_ms) << " ms)\n";
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const ulrich::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
