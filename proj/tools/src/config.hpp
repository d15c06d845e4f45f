#pragma once

#include <string>

#include "fracwdw/modal.hpp"

namespace fracwdw::cli {

struct RunConfig {
    ProblemConfig problem;
    std::string phi = "catalog:zero";
    std::string f;    // source, forward runs
    std::string psi;  // interior-time data, inverse runs
    double psi_noise = 0.0;  // relative std of Gaussian noise added to psi samples
    std::string base_dir = ".";  // csv: paths resolve against this

    bool inverse() const { return !psi.empty() && f.empty(); }
};

// Flat `key = value` text with # comments. Unknown keys and bad values throw ConfigError.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

// Every effective key in a fixed order; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const RunConfig& c);

}  // namespace fracwdw::cli
