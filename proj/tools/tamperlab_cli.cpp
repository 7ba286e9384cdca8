#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "tamperlab/cid.hpp"
#include "tamperlab/harness.hpp"
#include "tamperlab/worlds.hpp"

using namespace tamperlab;

namespace {

// a path to a diagram document, or the name of a built-in diagram
cid::InfluenceDiagram diagram_arg(const std::string& arg, int horizon) {
  if (std::filesystem::exists(arg)) return cid::load_diagram(harness::read_file(arg));
  return cid::canonical_diagram(arg, horizon);
}

harness::ScenarioConfig scenario_arg(const std::string& arg) {
  if (std::filesystem::exists(arg)) return harness::parse_scenario(harness::read_file(arg));
  return harness::builtin_scenario(arg);
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    harness::write_file(out, text);
}

void print_list(const char* title, const std::vector<std::string>& names) {
  std::cout << title << ":";
  for (const auto& n : names) std::cout << " " << n;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incentive analysis and tampering experiments"};
  app.require_subcommand(1);

  std::string diagram;
  int agent = 1, horizon = 3;
  bool prune = false;
  auto* analyze = app.add_subcommand("analyze", "classify every chance node of a diagram");
  analyze->add_option("diagram", diagram, "diagram JSON file or built-in diagram name")->required();
  analyze->add_option("--agent", agent, "agent index")->required();
  analyze->add_flag("--prune", prune, "remove irrelevant information links first");
  analyze->add_option("--horizon", horizon, "horizon for built-in diagrams");

  std::string scenario, run_out, csv_out;
  bool as_csv = false;
  auto* run = app.add_subcommand("run", "evaluate a scenario exactly");
  run->add_option("scenario", scenario, "scenario JSON file or built-in scenario name")->required();
  run->add_flag("--csv", as_csv, "print CSV instead of a table");
  run->add_option("--csv-out", csv_out, "also write CSV here");
  run->add_option("-o,--output", run_out, "write output to a file");

  auto* verify = app.add_subcommand("verify-claims", "run every graphical and behavioral check");

  std::string kind, name, export_out;
  std::optional<int> export_horizon;
  auto* exp = app.add_subcommand("export", "dot, csv or map text");
  exp->add_option("kind", kind, "dot | csv | map")->required()->check(CLI::IsMember({"dot", "csv", "map"}));
  exp->add_option("name", name, "diagram, scenario or layout")->required();
  exp->add_option("horizon", export_horizon, "horizon");
  exp->add_option("-o,--output", export_out, "write to a file");

  auto* list = app.add_subcommand("list", "built-in diagrams, environments, scenarios and claims");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      auto a = harness::analyze(diagram_arg(diagram, horizon), agent, prune);
      std::cout << harness::format_analysis(a);
    } else if (*run) {
      auto cfg = scenario_arg(scenario);
      if (!csv_out.empty()) cfg.csv_path = csv_out;
      auto r = harness::run_scenario(cfg);
      emit(as_csv ? harness::to_csv(r) : harness::format_result(r), run_out);
    } else if (*verify) {
      auto checks = harness::verify_claims();
      std::cout << harness::format_claims(checks);
      for (const auto& c : checks)
        if (!c.pass()) return 1;
    } else if (*exp) {
      emit(harness::export_text(kind, name, export_horizon), export_out);
    } else if (*list) {
      print_list("diagrams", cid::canonical_names());
      print_list("environments", worlds::environment_names());
      print_list("scenarios", harness::scenario_names());
      print_list("claims", harness::claim_ids());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
