// cli.hpp — subcommand dispatch shared by the binary and the test suite.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "zeno/config.hpp"

namespace zeno {

struct CliOverrides {
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;  // 0 = hardware
};

// Subcommands: spectrum, evolve, montecarlo, sweep-decay, sweep-survival,
// regions, validate, kraus-check. Writes to the configured output path, or to
// fallback_out when none is set. Returns 0 on success, 1 on validation
// errors, 2 on internal errors; diagnostics go to err.
int dispatch(const std::string& subcommand, const std::string& config_text,
             const CliOverrides& overrides, std::ostream& fallback_out, std::ostream& err);

}  // namespace zeno
