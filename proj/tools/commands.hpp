#pragma once

#include <CLI11.hpp>

namespace cli {

// Each adds its subcommand to `app` and sets its callback.
void add_energy(CLI::App& app);
void add_inner(CLI::App& app);
void add_reparam(CLI::App& app);
void add_flow(CLI::App& app);
void add_geodesic(CLI::App& app);
void add_counterexample(CLI::App& app);
void add_dirshape(CLI::App& app);
void add_hausdorff(CLI::App& app);
void add_selfcheck(CLI::App& app);

// Set by selfcheck when any check fails.
inline bool g_selfcheck_failed = false;

}  // namespace cli
