#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace fracwdw::cli;
    CLI::App app{"Forward and inverse solver for a mixed fractional wave-diffusion-wave equation on a cylinder"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string config;
    auto add_run = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", config, "flat key = value config file")->required();
        sub->add_option("--out", opt.out, "output directory");
        sub->add_option("--k-max", opt.k_max, "number of Fourier-Bessel modes (overrides K)")->check(CLI::PositiveNumber);
        sub->add_option("--zeros", opt.zeros, "Bessel zeros: asymptotic or exact")->check(CLI::IsMember({"asymptotic", "exact"}));
        sub->add_flag("--strict-uniqueness", opt.strict_uniqueness, "reject configs outside alpha2 = 1, gamma2 = beta2");
        sub->add_option("--seed", opt.seed, "seed for psi noise");
        sub->add_flag("--dump-effective-config", opt.dump_effective_config, "print the effective config and exit");
        sub->add_option("--verify-times", opt.verify_times, "interior times per region in the region-equation checks")
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--no-verify", opt.skip_verify, "skip the verification battery");
        return sub;
    };
    auto* fwd = add_run("forward", "solve for u given phi and f");
    auto* inv = add_run("inverse", "recover f given phi and psi = u(xi, .)");
    auto* ver = add_run("verify", "run the verification battery");

    auto* sf = app.add_subcommand("specfun", "evaluate a special function");
    std::string fname;
    std::vector<double> args;
    int digits = 11;
    sf->add_option("name", fname, "prabhakar, biml_e2, gamma, j0, j1, bessel_zero, bessel_zero_asymptotic")->required();
    sf->add_option("args", args, "parameters then arguments")->allow_extra_args();
    sf->add_option("--digits", digits, "significant digits")->check(CLI::Range(1, 17));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (*fwd) return cmd_forward(config, opt, std::cout, std::cerr);
    if (*inv) return cmd_inverse(config, opt, std::cout, std::cerr);
    if (*ver) return cmd_verify(config, opt, std::cout, std::cerr);
    return cmd_specfun(fname, args, digits, std::cout, std::cerr);
}
