// Command-line front end: riemann, simulate, verify-identities, sweep, testfn.
#include <CLI11.hpp>

#include <iostream>

#include "isoshock/errors.hpp"
#include "isoshock/experiment.hpp"

using namespace isoshock;

namespace {

GasState parse_state(const std::vector<double>& v) {
  if (v.size() != 2 && v.size() != 3) throw ConfigError("a state is 'rho,u' or 'rho,u,v'", "", 0);
  return GasState{v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plane-shock perturbation laboratory for 2-D isothermal Euler flow"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  double epsilon = -1.0;
  int refine = 0;
  std::vector<double> left{1.0, 1.0}, right{1.0, -1.0};

  auto* riemann = app.add_subcommand("riemann", "Solve a 1-D Riemann problem and print the fan");
  riemann->add_option("--left", left, "left state rho,u[,v]")->delimiter(',');
  riemann->add_option("--right", right, "right state rho,u[,v]")->delimiter(',');

  std::vector<std::pair<CLI::App*, Mode>> modes;
  auto add_mode = [&](const char* name, const char* help, Mode m) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "config file (key = value)");
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--epsilon", epsilon, "perturbation amplitude override");
    modes.emplace_back(sub, m);
    return sub;
  };
  add_mode("simulate", "Single run with functional diagnostics", Mode::simulate);
  add_mode("verify-identities", "Refinement ladder for the functional identities", Mode::verify_identities)
      ->add_option("--refine", refine, "ladder depth (overrides ladder.levels)");
  add_mode("sweep", "Lifespan-proxy sweep over epsilon", Mode::sweep);
  add_mode("testfn", "Test-function checks", Mode::testfn);

  CLI11_PARSE(app, argc, argv);

  try {
    if (riemann->parsed()) {
      std::cout << riemann_report(parse_state(left), parse_state(right));
      return kExitOk;
    }
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!out_dir.empty()) c.output_dir = out_dir;
    if (epsilon >= 0.0) c.epsilon = epsilon;
    else if (epsilon != -1.0) throw ConfigError("epsilon: must be non-negative", "perturbation.epsilon", 0);
    if (refine > 0) c.levels = refine;
    for (const auto& [sub, mode] : modes)
      if (sub->parsed()) return run_experiment(c, mode, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (e.line > 0) std::cerr << " (line " << e.line << ")";
    std::cerr << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BlowUpSuspected& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const FrontDetectionError& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
