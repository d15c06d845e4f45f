#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"
#include "fracwdw/solver.hpp"
#include "fracwdw/specfun.hpp"
#include "fracwdw/verify.hpp"

namespace fracwdw::cli {

namespace fs = std::filesystem;

void apply_overrides(RunConfig& c, const CliOptions& o) {
    if (o.k_max) c.problem.K = *o.k_max;
    if (o.zeros) c.problem.zeros = parse_zero_mode(*o.zeros);
    if (o.strict_uniqueness) c.problem.strict_uniqueness = true;
    if (o.seed) c.problem.seed = *o.seed;
}

RadialFunction load_radial(const RunConfig& c, const std::string& text) {
    std::string t = text;
    auto b = t.find_first_not_of(" \t");
    if (b != std::string::npos && t.compare(b, 4, "csv:") == 0) {
        fs::path p(t.substr(b + 4));
        if (p.is_relative()) p = fs::path(c.base_dir) / p;
        return RadialFunction::from_csv(p.string());
    }
    return RadialFunction::parse(t);
}

RadialFunction load_psi(const RunConfig& c) {
    RadialFunction psi = load_radial(c, c.psi);
    if (c.psi_noise == 0.0) return psi;
    const int n = 1025;
    std::vector<double> r(n), v(n);
    double peak = 0.0;
    for (int i = 0; i < n; ++i) {
        r[i] = static_cast<double>(i) / (n - 1);
        v[i] = psi(r[i]);
        peak = std::max(peak, std::abs(v[i]));
    }
    std::mt19937_64 rng(c.problem.seed);
    std::normal_distribution<double> noise(0.0, c.psi_noise * peak);
    for (double& x : v) x += noise(rng);
    return RadialFunction::samples(std::move(r), std::move(v), c.psi + " with noise");
}

namespace {

class CsvFile {
public:
    CsvFile(const fs::path& p, const std::string& header) : path_(p), os_(p, std::ios::binary) {
        if (!os_) throw IoError("cannot write '" + p.string() + "'");
        os_ << header << '\n';
    }
    template <typename... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
        os_ << '\n';
    }
    void raw(const std::string& line) { os_ << line << '\n'; }

private:
    static std::string cell(double x) { return format_number(x); }
    static std::string cell(int x) { return std::to_string(x); }
    static std::string cell(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    fs::path path_;
    std::ofstream os_;
};

void write_text(const fs::path& p, const std::string& s) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write '" + p.string() + "'");
    os << s;
}

void write_grid(const fs::path& dir, const SolutionGrid& g) {
    CsvFile csv(dir / "u_grid.csv", "t,r,u");
    for (std::size_t i = 0; i < g.t_nodes.size(); ++i)
        for (std::size_t j = 0; j < g.r_nodes.size(); ++j) csv.row(g.t_nodes[i], g.r_nodes[j], g.at(i, j));
}

void write_modes(const fs::path& dir, const SolutionGrid& g) {
    CsvFile csv(dir / "modes.csv",
                "k,mu_k,lambda_k,retained,phi_k,f_k,psi_k,A2,A3,A4,A5,M1,M2,M3,M4,W,Delta_k,TildeDelta_k,noise_gain,reason");
    for (const auto& o : g.ledger) {
        const ModeData& d = o.data;
        csv.row(o.k, o.eigen.mu_k, o.eigen.lambda_k, o.retained ? 1 : 0, d.phi_k, d.f_k, d.psi_k, d.A2, d.A3, d.A4,
                d.A5, d.M1, d.M2, d.M3, d.M4, d.W, d.Delta_k, d.TildeDelta_k, o.noise_gain, o.reason);
    }
}

void write_convergence(const fs::path& dir, const ProblemConfig& cfg, const SolutionGrid& g) {
    ConvergenceReport c = convergence_report(cfg, g);
    std::string header = "k,mu_k,retained,phi_k,psi_k,f_k";
    for (const char* v : {"phi", "psi", "f"})
        for (int m = 0; m <= 8; m += 2) header += std::string(",") + v + "_sum_m" + std::to_string(m);
    CsvFile csv(dir / "convergence.csv", header);
    for (std::size_t i = 0; i < c.k.size(); ++i) {
        std::string line = std::to_string(c.k[i]) + "," + format_number(c.mu[i]) + "," + (c.retained[i] ? "1" : "0");
        for (double x : {c.phi[i], c.psi[i], c.f[i]}) line += "," + format_number(x);
        for (const auto* sums : {&c.phi_sums, &c.psi_sums, &c.f_sums})
            for (int m = 0; m < 5; ++m) line += "," + format_number((*sums)[m][i]);
        csv.raw(line);
    }
    std::ostringstream os;
    os << "K: " << cfg.K << "\n";
    os << "K_effective: " << g.K_effective << "\n";
    os << "tail_bound: " << format_number(g.tail_bound) << "\n";
    os << "skipped_mass: " << format_number(g.skipped_mass) << "\n";
    os << "initial_residual: " << format_number(g.initial_residual) << "\n";
    os << "boundary_residual: " << format_number(g.boundary_residual) << "\n";
    os << "interface_T1: " << format_number(g.interface_T1) << "\n";
    os << "interface_T2: " << format_number(g.interface_T2) << "\n";
    os << "phi_slope: " << format_number(c.phi_slope) << "\n";
    os << "psi_slope: " << format_number(c.psi_slope) << "\n";
    os << "f_slope: " << format_number(c.f_slope) << "\n";
    const char* keys[6] = {"E2_region1_d_beta1", "E2_region1_d_beta1+1", "E2_region1_d_beta1+2",
                           "E2_region2_d_beta2+1", "E2_region3_d_beta3+1", "E2_region3_d_beta3+2"};
    for (int i = 0; i < 6; ++i) os << "bound_constant " << keys[i] << ": " << format_number(c.bound_constants[i]) << "\n";
    for (const auto& w : g.warnings) os << "warning: " << w << "\n";
    write_text(dir / "summary.txt", os.str());
}

void write_report(const fs::path& dir, const VerificationReport& r) {
    write_text(dir / "verify_report.txt", r.to_text());
    write_text(dir / "verify_report.csv", r.to_csv());
}

void print_warnings(const SolutionGrid& g, std::ostream& err) {
    for (const auto& w : g.warnings) err << "warning: " << w << "\n";
}

int guarded(std::ostream& err, const std::function<int()>& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

struct Prepared {
    RunConfig cfg;
    fs::path dir;
};

// Loads, overrides and validates; returns false when only the config dump was requested.
bool prepare(const std::string& path, const CliOptions& o, std::ostream& out, Prepared& p) {
    p.cfg = load_config(path);
    apply_overrides(p.cfg, o);
    p.cfg.problem.validate();
    if (o.dump_effective_config) {
        out << dump_config(p.cfg);
        return false;
    }
    p.dir = o.out;
    std::error_code ec;
    fs::create_directories(p.dir, ec);
    if (ec) throw IoError("cannot create output directory '" + o.out + "': " + ec.message());
    write_text(p.dir / "effective_config.txt", dump_config(p.cfg));
    return true;
}

BatteryOptions battery_options(const CliOptions& o) {
    BatteryOptions b;
    b.times_per_region = o.verify_times;
    return b;
}

}  // namespace

int cmd_forward(const std::string& config_path, const CliOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Prepared p;
        if (!prepare(config_path, o, out, p)) return 0;
        const ProblemConfig& cfg = p.cfg.problem;
        if (p.cfg.f.empty()) throw ConfigError("forward run needs key 'f'");
        RadialFunction phi = load_radial(p.cfg, p.cfg.phi);
        RadialFunction f = load_radial(p.cfg, p.cfg.f);
        SolutionGrid g = forward_solve(cfg, phi, f);
        print_warnings(g, err);
        write_grid(p.dir, g);
        {
            CsvFile csv(p.dir / "f_coeffs.csv", "k,mu_k,f_k");
            for (const auto& m : g.ledger) csv.row(m.k, m.eigen.mu_k, m.data.f_k);
        }
        {
            CsvFile csv(p.dir / "f_radial.csv", "r,f");
            for (double r : g.r_nodes) csv.row(r, f(r));
        }
        {
            CsvFile csv(p.dir / "psi.csv", "r,psi");
            for (std::size_t j = 0; j < g.r_nodes.size(); ++j) csv.row(g.r_nodes[j], g.u_xi[j]);
        }
        std::string cat = "catalog:bessel_series(";
        for (const auto& m : g.ledger)
            if (m.retained) cat += "a" + std::to_string(m.k) + "=" + format_number(m.data.psi_k) + ",";
        cat += std::string("exact=") + (cfg.zeros == ZeroMode::ExactRoot ? "1" : "0") + ")";
        write_text(p.dir / "psi_catalog.txt", cat + "\n");
        write_modes(p.dir, g);
        write_convergence(p.dir, cfg, g);
        if (!o.skip_verify) write_report(p.dir, run_battery(cfg, phi, f, RunMode::Forward, battery_options(o)));
        out << "forward: K_effective = " << g.K_effective << " of " << cfg.K << ", outputs in " << p.dir.string()
            << "\n";
        return 0;
    });
}

int cmd_inverse(const std::string& config_path, const CliOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Prepared p;
        if (!prepare(config_path, o, out, p)) return 0;
        const ProblemConfig& cfg = p.cfg.problem;
        if (p.cfg.psi.empty()) throw ConfigError("inverse run needs key 'psi'");
        RadialFunction phi = load_radial(p.cfg, p.cfg.phi);
        RadialFunction psi = load_psi(p.cfg);
        InverseResult res = inverse_solve(cfg, phi, psi);
        const SolutionGrid& g = res.grid;
        print_warnings(g, err);
        write_grid(p.dir, g);
        {
            CsvFile csv(p.dir / "f_coeffs.csv", "k,mu_k,f_k");
            for (const auto& [e, fk] : res.f_coeffs) csv.row(e.k, e.mu_k, fk);
        }
        {
            CsvFile csv(p.dir / "f_radial.csv", "r,f");
            for (std::size_t j = 0; j < g.r_nodes.size(); ++j) csv.row(g.r_nodes[j], res.f_radial[j]);
        }
        {
            CsvFile csv(p.dir / "psi_fit.csv", "r,psi,u_xi");
            for (std::size_t j = 0; j < g.r_nodes.size(); ++j) csv.row(g.r_nodes[j], psi(g.r_nodes[j]), g.u_xi[j]);
        }
        write_modes(p.dir, g);
        write_convergence(p.dir, cfg, g);
        if (!o.skip_verify) write_report(p.dir, run_battery(cfg, phi, psi, RunMode::Inverse, battery_options(o)));
        out << "inverse: K_effective = " << g.K_effective << " of " << cfg.K;
        if (res.truncated_at) out << ", truncated at mode " << res.truncated_at;
        out << ", psi residual " << format_sig(res.psi_residual, 3) << ", outputs in " << p.dir.string() << "\n";
        return 0;
    });
}

int cmd_verify(const std::string& config_path, const CliOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Prepared p;
        if (!prepare(config_path, o, out, p)) return 0;
        const ProblemConfig& cfg = p.cfg.problem;
        RadialFunction phi = load_radial(p.cfg, p.cfg.phi);
        bool inverse = p.cfg.inverse();
        if (!inverse && p.cfg.f.empty()) throw ConfigError("verify needs key 'f' (forward) or 'psi' (inverse)");
        RadialFunction data = inverse ? load_psi(p.cfg) : load_radial(p.cfg, p.cfg.f);
        VerificationReport r =
            run_battery(cfg, phi, data, inverse ? RunMode::Inverse : RunMode::Forward, battery_options(o));
        write_report(p.dir, r);
        out << r.to_text();
        return 0;
    });
}

int cmd_specfun(const std::string& name, const std::vector<double>& a, int digits, std::ostream& out,
                std::ostream& err) {
    return guarded(err, [&] {
        auto need = [&](std::size_t n, const char* usage) {
            if (a.size() != n) throw ConfigError(std::string("usage: specfun ") + usage);
        };
        double v = 0.0;
        if (name == "prabhakar") {
            need(4, "prabhakar alpha beta gamma z");
            v = prabhakar_e(a[0], a[1], a[2], a[3]).value;
        } else if (name == "biml_e2") {
            need(14, "biml_e2 g1 a1 b1 g2 a2 d1 a3 b2 d2 a4 d3 b3 x y");
            BivMLSignature s{a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8], a[9], a[10], a[11]};
            v = biml_e2(s, a[12], a[13]).value;
        } else if (name == "gamma") {
            need(1, "gamma x");
            v = gamma_fn(a[0]);
        } else if (name == "j0") {
            need(1, "j0 x");
            v = bessel_j0(a[0]);
        } else if (name == "j1") {
            need(1, "j1 x");
            v = bessel_j1(a[0]);
        } else if (name == "bessel_zero" || name == "bessel_zero_asymptotic") {
            need(1, "bessel_zero k");
            if (a[0] < 1.0 || a[0] != std::floor(a[0])) throw ConfigError("bessel_zero: k must be a positive integer");
            v = eigen(static_cast<int>(a[0]), name == "bessel_zero" ? ZeroMode::ExactRoot : ZeroMode::Asymptotic)
                    .mu_k;
        } else {
            throw ConfigError("unknown function '" + name +
                              "'; expected prabhakar, biml_e2, gamma, j0, j1, bessel_zero, bessel_zero_asymptotic");
        }
        out << format_sig(v, digits) << "\n";
        return 0;
    });
}

}  // namespace fracwdw::cli
