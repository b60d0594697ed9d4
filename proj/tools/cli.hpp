#pragma once

#include "orderscope/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace orderscope::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kIndeterminate = 2,
    kUsage = 64,
};

struct SweepOptions {
    bool verify = false;
    std::uint64_t norm_bound = 400;
    ResourceCaps caps;
};

/// One sweep row for (d, f). Errors are captured in the row's "error" field
/// so a failing cell never aborts a sweep. The row depends only on (d, f)
/// and the options, never on neighbouring cells or worker count.
Json sweep_row(std::int64_t d, std::int64_t f, const SweepOptions& opts);

/// Runs the command line `args` (without the program name). `env_caps` is
/// the value of ORDERSCOPE_CAPS, empty when unset.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::string& env_caps = {});

}  // namespace orderscope::cli
