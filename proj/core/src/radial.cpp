#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "fracwdw/bessel.hpp"
#include "fracwdw/errors.hpp"
#include "fracwdw/format.hpp"

namespace fracwdw {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double param(const std::map<std::string, double>& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

// Fritsch-Carlson monotone cubic through (r_i, v_i); constant outside the data range.
struct MonotoneCubic {
    std::vector<double> r, v, d;

    MonotoneCubic(std::vector<double> rr, std::vector<double> vv) : r(std::move(rr)), v(std::move(vv)) {
        std::size_t n = r.size();
        d.assign(n, 0.0);
        if (n < 2) return;
        std::vector<double> s(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) s[i] = (v[i + 1] - v[i]) / (r[i + 1] - r[i]);
        d[0] = s[0];
        d[n - 1] = s[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (s[i - 1] * s[i] <= 0.0) ? 0.0 : 0.5 * (s[i - 1] + s[i]);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (s[i] == 0.0) {
                d[i] = d[i + 1] = 0.0;
                continue;
            }
            double a = d[i] / s[i], b = d[i + 1] / s[i];
            double h = a * a + b * b;
            if (h > 9.0) {
                double t = 3.0 / std::sqrt(h);
                d[i] = t * a * s[i];
                d[i + 1] = t * b * s[i];
            }
        }
    }

    double operator()(double x) const {
        std::size_t n = r.size();
        if (n == 1) return v[0];
        if (x <= r.front()) return v.front();
        if (x >= r.back()) return v.back();
        std::size_t i = std::upper_bound(r.begin(), r.end(), x) - r.begin() - 1;
        double h = r[i + 1] - r[i];
        double t = (x - r[i]) / h;
        double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * h * d[i] + (-2 * t3 + 3 * t2) * v[i + 1] +
               (t3 - t2) * h * d[i + 1];
    }
};

std::optional<double> to_number(const std::string& s) {
    std::string t = trim(s);
    double x = 0.0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) return std::nullopt;
    return x;
}

}  // namespace

RadialFunction::RadialFunction() : fn_([](double) { return 0.0; }) {}

RadialFunction RadialFunction::catalog(const std::string& name, std::map<std::string, double> params) {
    RadialFunction f;
    f.kind_ = Kind::Catalog;
    f.name_ = name;
    f.params_ = params;
    f.zero_ = false;
    if (name == "zero") {
        f.zero_ = true;
        f.fn_ = [](double) { return 0.0; };
    } else if (name == "one_minus_r2") {
        double amp = param(params, "amp", 1.0);
        f.fn_ = [amp](double r) { return amp * (1.0 - r * r); };
    } else if (name == "poly_smooth") {
        double s = param(params, "s", 5.0);
        if (s < 1.0 || s != std::floor(s)) throw ConfigError("poly_smooth: s must be a positive integer");
        double amp = param(params, "amp", 1.0);
        double a = 2.0 * s, b = 2.0 * s - 1.0;
        double rpk = a / (a + b);
        double peak = std::pow(rpk, a) * std::pow(1.0 - rpk, b);
        f.smoothness_ = static_cast<int>(s);
        f.params_["s"] = s;
        f.fn_ = [a, b, amp, peak](double r) { return amp * std::pow(r, a) * std::pow(1.0 - r, b) / peak; };
    } else if (name == "bessel_mode") {
        double kk = param(params, "k", 1.0);
        double amp = param(params, "amp", 1.0);
        if (kk < 1.0 || kk != std::floor(kk)) throw ConfigError("bessel_mode: k must be a positive integer");
        double mu = eigen(static_cast<int>(kk), ZeroMode::ExactRoot).mu_k;
        f.params_["k"] = kk;
        f.fn_ = [mu, amp](double r) { return amp * bessel_j0(mu * r); };
    } else if (name == "bessel_series") {
        // sum of a<k> J0(mu_k r); exact=0 selects the asymptotic zeros
        ZeroMode zm = param(params, "exact", 1.0) != 0.0 ? ZeroMode::ExactRoot : ZeroMode::Asymptotic;
        std::vector<std::pair<double, double>> terms;
        bool any = false;
        for (const auto& [key, v] : params) {
            if (key == "exact") continue;
            int k = 0;
            auto [p, ec] = std::from_chars(key.data() + 1, key.data() + key.size(), k);
            if (key.size() < 2 || key[0] != 'a' || ec != std::errc() || p != key.data() + key.size() || k < 1)
                throw ConfigError("bessel_series: coefficient keys must be a1, a2, ...; got '" + key + "'");
            terms.emplace_back(eigen(k, zm).mu_k, v);
            any = any || v != 0.0;
        }
        f.zero_ = !any;
        f.fn_ = [terms](double r) {
            double s = 0.0;
            for (const auto& [mu, a] : terms) s += a * bessel_j0(mu * r);
            return s;
        };
    } else if (name == "cos_half_pi") {
        double amp = param(params, "amp", 1.0);
        f.fn_ = [amp](double r) { return amp * std::cos(0.5 * 3.14159265358979323846 * r); };
    } else if (name == "constant") {
        double c = param(params, "c", 1.0);
        f.zero_ = (c == 0.0);
        f.fn_ = [c](double) { return c; };
    } else {
        throw ConfigError("unknown catalog function '" + name + "'");
    }
    return f;
}

RadialFunction RadialFunction::samples(std::vector<double> r, std::vector<double> v, std::string source) {
    if (r.empty() || r.size() != v.size()) throw ConfigError("samples: need equal, non-empty r and value arrays");
    for (std::size_t i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) throw ConfigError("samples: r grid must be strictly increasing");
    if (r.front() < 0.0 || r.back() > 1.0) throw ConfigError("samples: r grid must lie in [0, 1]");
    RadialFunction f;
    f.kind_ = Kind::Samples;
    f.name_ = "samples";
    f.source_ = std::move(source);
    f.zero_ = std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
    auto spline = std::make_shared<MonotoneCubic>(std::move(r), std::move(v));
    f.fn_ = [spline](double x) { return (*spline)(x); };
    return f;
}

RadialFunction RadialFunction::callable(std::function<double(double)> fn, std::string label) {
    RadialFunction f;
    f.kind_ = Kind::Callable;
    f.name_ = std::move(label);
    f.zero_ = false;
    f.fn_ = std::move(fn);
    return f;
}

RadialFunction RadialFunction::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw ConfigError("'" + path + "': expected two columns 'r,value'");
        auto a = to_number(line.substr(0, comma));
        auto b = to_number(line.substr(comma + 1));
        if (!a || !b) {
            if (first) {
                first = false;
                continue;
            }
            throw ConfigError("'" + path + "': non-numeric row '" + line + "'");
        }
        first = false;
        r.push_back(*a);
        v.push_back(*b);
    }
    return samples(std::move(r), std::move(v), path);
}

RadialFunction RadialFunction::parse(const std::string& text) {
    std::string t = trim(text);
    if (t.rfind("csv:", 0) == 0) return from_csv(trim(t.substr(4)));
    if (t.rfind("catalog:", 0) != 0) throw ConfigError("radial function must be 'catalog:...' or 'csv:...', got '" + t + "'");
    std::string body = trim(t.substr(8));
    std::string name = body;
    std::map<std::string, double> params;
    auto open = body.find('(');
    if (open != std::string::npos) {
        if (body.back() != ')') throw ConfigError("catalog entry '" + body + "' is missing ')'");
        name = trim(body.substr(0, open));
        std::string args = body.substr(open + 1, body.size() - open - 2);
        std::stringstream ss(args);
        std::string item;
        int pos = 0;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            std::string key;
            std::string val = item;
            auto eq = item.find('=');
            if (eq != std::string::npos) {
                key = trim(item.substr(0, eq));
                val = item.substr(eq + 1);
            } else {
                key = (name == "bessel_mode") ? "k" : (name == "constant" ? "c" : "s");
                if (pos > 0) throw ConfigError("catalog entry '" + body + "': only the first argument may be positional");
            }
            auto num = to_number(val);
            if (!num) throw ConfigError("catalog entry '" + body + "': bad number '" + val + "'");
            params[key] = *num;
            ++pos;
        }
    }
    return catalog(name, params);
}

std::string RadialFunction::describe() const {
    switch (kind_) {
        case Kind::Samples:
            return "csv:" + source_;
        case Kind::Callable:
            return "callable:" + name_;
        case Kind::Catalog:
            break;
    }
    std::string s = "catalog:" + name_;
    if (!params_.empty()) {
        s += "(";
        bool first = true;
        for (const auto& [k, v] : params_) {
            if (!first) s += ",";
            s += k + "=" + format_number(v);
            first = false;
        }
        s += ")";
    }
    return s;
}

}  // namespace fracwdw
