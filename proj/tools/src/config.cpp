#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"

namespace fracwdw::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("key '" + key + "': '" + v + "' is not a number");
    return x;
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': '" + v + "' is not true or false");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> m = [] {
        std::map<std::string, Setter> s;
        auto real = [&](const char* k, double ProblemConfig::* f) {
            s[k] = [f](RunConfig& c, const std::string& key, const std::string& v) { c.problem.*f = to_double(key, v); };
        };
        real("alpha1", &ProblemConfig::alpha1);
        real("alpha2", &ProblemConfig::alpha2);
        real("alpha3", &ProblemConfig::alpha3);
        real("beta1", &ProblemConfig::beta1);
        real("beta2", &ProblemConfig::beta2);
        real("beta3", &ProblemConfig::beta3);
        real("gamma1", &ProblemConfig::gamma1);
        real("gamma2", &ProblemConfig::gamma2);
        real("gamma3", &ProblemConfig::gamma3);
        real("delta", &ProblemConfig::delta);
        real("T1", &ProblemConfig::T1);
        real("T2", &ProblemConfig::T2);
        real("T", &ProblemConfig::T);
        real("abs_tol", &ProblemConfig::abs_tol);
        real("resid_tol", &ProblemConfig::resid_tol);
        real("noise_ceiling", &ProblemConfig::noise_ceiling);
        s["xi"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.problem.xi = to_double(k, v); };
        s["det_tol"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.problem.det_tol = to_double(k, v);
        };
        s["K"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.problem.K = static_cast<int>(to_int(k, v));
        };
        s["n_r"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.problem.n_r = static_cast<int>(to_int(k, v));
        };
        s["n_t"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.problem.n_t = static_cast<int>(to_int(k, v));
        };
        s["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            long long x = to_int(k, v);
            if (x < 0) throw ConfigError("key 'seed' must be non-negative");
            c.problem.seed = static_cast<std::uint64_t>(x);
        };
        s["zeros"] = [](RunConfig& c, const std::string&, const std::string& v) { c.problem.zeros = parse_zero_mode(v); };
        s["rule"] = [](RunConfig& c, const std::string&, const std::string& v) {
            c.problem.rule = parse_transmission_rule(v);
        };
        s["strict_uniqueness"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.problem.strict_uniqueness = to_bool(k, v);
        };
        s["phi"] = [](RunConfig& c, const std::string&, const std::string& v) { c.phi = v; };
        s["f"] = [](RunConfig& c, const std::string&, const std::string& v) { c.f = v; };
        s["psi"] = [](RunConfig& c, const std::string&, const std::string& v) { c.psi = v; };
        s["psi_noise"] = [](RunConfig& c, const std::string& k, const std::string& v) {
            c.psi_noise = to_double(k, v);
            if (c.psi_noise < 0.0) throw ConfigError("key 'psi_noise' must be non-negative");
        };
        return s;
    }();
    return m;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    RunConfig c;
    c.base_dir = base_dir;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second(c, key, val);
    }
    if (!c.f.empty() && !c.psi.empty()) throw ConfigError("give either f (forward) or psi (inverse), not both");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config(ss.str(), dir.empty() ? "." : dir);
}

std::string dump_config(const RunConfig& c) {
    const ProblemConfig& p = c.problem;
    std::ostringstream os;
    auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << "\n"; };
    auto num = [&](const char* k, double v) { kv(k, format_number(v)); };
    num("alpha1", p.alpha1);
    num("beta1", p.beta1);
    num("gamma1", p.gamma1);
    num("alpha2", p.alpha2);
    num("beta2", p.beta2);
    num("gamma2", p.gamma2);
    num("alpha3", p.alpha3);
    num("beta3", p.beta3);
    num("gamma3", p.gamma3);
    num("delta", p.delta);
    num("T1", p.T1);
    num("T2", p.T2);
    num("T", p.T);
    if (p.xi)
        num("xi", *p.xi);
    else
        os << "# xi = " << format_number(p.xi_value()) << " (default, midpoint of T1 and T2)\n";
    kv("K", std::to_string(p.K));
    kv("zeros", to_string(p.zeros));
    kv("rule", to_string(p.rule));
    kv("strict_uniqueness", p.strict_uniqueness ? "true" : "false");
    num("abs_tol", p.abs_tol);
    num("resid_tol", p.resid_tol);
    if (p.det_tol)
        num("det_tol", *p.det_tol);
    else
        os << "# det_tol = " << format_number(p.det_tol_value()) << " (default, 1e-10 (1 + T1))\n";
    kv("n_r", std::to_string(p.n_r));
    kv("n_t", std::to_string(p.n_t));
    num("noise_ceiling", p.noise_ceiling);
    kv("seed", std::to_string(p.seed));
    kv("phi", c.phi);
    if (!c.f.empty()) kv("f", c.f);
    if (!c.psi.empty()) kv("psi", c.psi);
    num("psi_noise", c.psi_noise);
    return os.str();
}

}  // namespace fracwdw::cli
