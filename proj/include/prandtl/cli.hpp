#pragma once

#include "prandtl/config.hpp"

namespace prandtl {

/// Executes the configured subcommand; returns the process exit code.
/// Worker count for the per-wavenumber sweep is capped by PRANDTL_THREADS.
int dispatch(const RunConfig& cfg);

/// argv-level entry used by the binary (parses, dispatches, maps errors to
/// the documented exit codes).
int cli_main(int argc, char** argv);

} // namespace prandtl
