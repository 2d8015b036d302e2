// herdfield: solve, simulate and sweep the social-herding mean field game.
//
//   herdfield solve --alpha 0.1 --out run/
//   herdfield simulate --alpha 0.1 --z0 0.5 --population 10000 --seed 7 --out run/
//   herdfield sweep --sweep_step 0.02 --out run/
//   herdfield threshold --predicate herd-never --threshold_lo 0.4 --threshold_hi 1 --out run/
//   herdfield figures --equilibrium run/equilibrium.json --out run/figures
//
// Every flag mirrors a key of the JSON config accepted by --config.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "herdfield/cli.hpp"
#include "herdfield/io.hpp"

int main(int argc, char** argv) {
  using namespace herdfield;

  CLI::App app{"Mean field equilibria and herding in a social-choice game"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat JSON config file");
    for (const std::string& key : config_keys())
      options[sub->get_name() + "/" + key] = sub->add_option("--" + key, raw[key]);
  };
  for (const char* name : {"solve", "simulate", "sweep", "threshold", "figures"})
    add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  CLI::App* chosen = app.get_subcommands().front();
  std::map<std::string, std::string> flags;
  for (const std::string& key : config_keys())
    if (options[chosen->get_name() + "/" + key]->count() > 0) flags[key] = raw[key];

  try {
    const Command command = parse_command(chosen->get_name());
    std::optional<std::string> file_text;
    if (!config_path.empty()) {
      try {
        file_text = read_text(config_path);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
      }
    }
    const RunConfig config = parse_config(file_text, flags, command);
    return run(command, config, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}
