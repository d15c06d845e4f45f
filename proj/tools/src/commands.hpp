#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "fracwdw/bessel.hpp"

namespace fracwdw::cli {

struct CliOptions {
    std::string out = "fracwdw_out";
    std::optional<int> k_max;
    std::optional<std::string> zeros;
    bool strict_uniqueness = false;
    std::optional<std::uint64_t> seed;
    bool dump_effective_config = false;
    int verify_times = 10;  // interior times per region for the region-equation checks
    bool skip_verify = false;
};

void apply_overrides(RunConfig& c, const CliOptions& o);
RadialFunction load_radial(const RunConfig& c, const std::string& text);
// psi as configured, with seeded Gaussian noise when psi_noise > 0
RadialFunction load_psi(const RunConfig& c);

// Exit codes: 0 success, 2 validation or I/O error, 3 numerical failure.
int cmd_forward(const std::string& config_path, const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_inverse(const std::string& config_path, const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& config_path, const CliOptions& o, std::ostream& out, std::ostream& err);
int cmd_specfun(const std::string& name, const std::vector<double>& args, int digits, std::ostream& out,
                std::ostream& err);

}  // namespace fracwdw::cli
