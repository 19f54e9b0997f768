// bnls: command-line front end for the Backlund-extension NLS toolkit.
//
//   bnls --config run.json [--out DIR] [--threads N]
//
// The config selects one of: extend, scatter, evolve, reconstruct, solve,
// asymptote, simulate, compare. Exit codes: 0 success, 2 configuration or
// input error, 3 numerical guard tripped (guard name on stderr).
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bnls/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Backlund-extension solver for NLS with a delta potential"};
  std::string config_path;
  std::string out_dir = ".";
  int threads = 0;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker thread count (0 = hardware)");
  CLI11_PARSE(app, argc, argv);

  try {
    const bnls::RunConfig cfg = bnls::parse_run_config(config_path, out_dir, threads);
    return bnls::run(cfg);
  } catch (const bnls::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const bnls::FormatError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const bnls::IoError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const bnls::Error& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 3;
  }
}
