#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "curvespace/errors.hpp"
#include "curvespace/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Shape-space toolkit for closed plane curves and their homotopies"};
  app.set_config("--config", "", "key=value file; [subcommand] sections or subcommand.key names");
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker cap, 0 for all cores")->check(CLI::NonNegativeNumber);
  app.parse_complete_callback([&] { curvespace::set_max_threads(threads); });

  cli::add_energy(app);
  cli::add_inner(app);
  cli::add_reparam(app);
  cli::add_flow(app);
  cli::add_geodesic(app);
  cli::add_counterexample(app);
  cli::add_dirshape(app);
  cli::add_hausdorff(app);
  cli::add_selfcheck(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const curvespace::InputError& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 3;
  } catch (const curvespace::NumericalError& e) {
    std::cerr << e.kind() << ": " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "Error: " << e.what() << '\n';
    return 1;
  }
  return cli::g_selfcheck_failed ? 4 : 0;
}
