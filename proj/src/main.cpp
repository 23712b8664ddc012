#include <cstdint>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rgdc/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Constraint management for discrete-time LTI systems: maximal "
      "admissible sets and the reference governor with dynamic constraint"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"mas", "Construct the static and dynamic maximal admissible sets"},
      {"simulate", "Governed and ungoverned closed-loop step response"},
      {"multistep", "Multi-step reference scenario with feasibility tracking"},
      {"bode", "Nonlinear closed-loop frequency sweep"},
      {"robust", "Robust MAS under polytopic uncertainty plus vertex runs"},
      {"converge", "Random-initial-condition convergence study"},
      {"validate", "Check stability, DC gain and epsilon of a scenario"},
  };
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config, "Scenario configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory override");
    sub->add_option("--epsilon", epsilon, "Tightening parameter override");
    sub->add_option("--seed", seed, "Random seed override");
  }

  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  rgdc::cli::RunOverrides overrides;
  if (sub->count("--out")) overrides.output_dir = out;
  if (sub->count("--epsilon")) overrides.epsilon = epsilon;
  if (sub->count("--seed")) overrides.seed = seed;

  if (sub->get_name() == "validate") {
    std::optional<double> eps;
    if (sub->count("--epsilon")) eps = epsilon;
    return rgdc::cli::validate(config, eps);
  }
  return rgdc::cli::run(config, sub->get_name(), overrides);
}
