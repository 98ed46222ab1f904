#pragma once

#include <gapfield/runconfig.hpp>

#include <iosfwd>

namespace gapfield {

// Exit codes: 0 success / all checks pass, 1 check failures, 2 config errors.
int run_solve(const RunConfig& cfg, std::ostream& out);
int run_fieldmap(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg);
int run_verify_cmd(const RunConfig& cfg, std::ostream& out);

/// Effective parallelism: min(requested or hardware, GAPFIELD_THREADS).
int effective_threads(int requested, int cells);

} // namespace gapfield
