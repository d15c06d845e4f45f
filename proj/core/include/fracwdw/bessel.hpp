#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracwdw {

double bessel_j0(double x);
double bessel_j1(double x);

enum class ZeroMode { Asymptotic, ExactRoot };

const char* to_string(ZeroMode m);
ZeroMode parse_zero_mode(const std::string& s);

struct EigenSpec {
    int k = 1;
    double mu_k = 0.0;
    double lambda_k = 0.0;
    ZeroMode zero_mode = ZeroMode::Asymptotic;
};

EigenSpec eigen(int k, ZeroMode mode);

class RadialFunction {
public:
    enum class Kind { Catalog, Samples, Callable };

    RadialFunction();  // identically zero

    static RadialFunction catalog(const std::string& name, std::map<std::string, double> params = {});
    static RadialFunction samples(std::vector<double> r, std::vector<double> v, std::string source = {});
    static RadialFunction callable(std::function<double(double)> fn, std::string label);
    // "catalog:name(k=v,...)" or "csv:path"
    static RadialFunction parse(const std::string& text);
    static RadialFunction from_csv(const std::string& path);

    double operator()(double r) const { return fn_(r); }
    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::map<std::string, double>& params() const { return params_; }
    std::optional<int> smoothness_class() const { return smoothness_; }
    bool is_zero() const { return zero_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::Catalog;
    std::string name_ = "zero";
    std::map<std::string, double> params_;
    std::string source_;
    std::optional<int> smoothness_;
    bool zero_ = true;
    std::function<double(double)> fn_;
};

struct QuadratureSpec {
    int panels = 8;  // starting panel count, doubled until converged
    double tol = 1e-11;
    int max_panels = 8192;
};

// 2 / J1(mu)^2 * int_0^1 f(r) J0(mu r) r dr
double fourier_bessel_coeff(const RadialFunction& f, const EigenSpec& e, const QuadratureSpec& quad = {});

double synthesize(const std::vector<std::pair<EigenSpec, double>>& coeffs, double r);

// Largest off-diagonal entry of the normalised Gram matrix of J0(mu_k r), k <= K.
double orthogonality_defect(int K, ZeroMode mode, const QuadratureSpec& quad = {});

}  // namespace fracwdw
