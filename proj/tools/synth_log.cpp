// Writes the synthetic 40-player telemetry log used to exercise `critters analyze`.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "critters/levels.hpp"
#include "critters/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic study telemetry log", "critters-synth"};
  critters::SyntheticConfig config;
  std::string level_dir = CRITTERS_DEFAULT_LEVEL_DIR;
  std::string out_path;
  app.add_option("--seed", config.seed, "generator seed");
  app.add_option("--levels", level_dir, "level directory");
  app.add_option("--out", out_path, "output file (default stdout)");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto log = critters::generate_synthetic_log(critters::load_level_directory(level_dir), config);
    const std::string text = critters::to_jsonl(log.events);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(out_path, std::ios::binary) << text;
    }
    for (const auto& p : log.players) {
      std::cerr << p.name << " " << critters::to_string(p.profile) << " target=" << p.target << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
