// Runs a network simulation scenario and prints the report as JSON.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cogledger/sim/simulator.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Deterministic multi-node ledger simulation"};
  std::string scenario_path;
  std::string out_path;
  app.add_option("scenario", scenario_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("-o,--out", out_path, "Write the report here instead of stdout");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(scenario_path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  try {
    auto [config, script] = cogledger::sim::parse_scenario(text.str());
    std::string report = cogledger::sim::run(config, script).to_json();
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream(out_path, std::ios::binary) << report;
    }
  } catch (const cogledger::sim::SimError& e) {
    std::cerr << "InvalidScript: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
