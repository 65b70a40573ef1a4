#include "skl/presets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace skl {

const std::vector<PresetInfo>& coefficient_presets() {
    static const std::vector<PresetInfo> table = {
        {"unit_diffusion", "sigma = I, b = 0, g = 1", 0},
        {"log_lipschitz_1d", "sigma = 1, b(x) = x log(1/(|x| v 1e-12)), g = 4 (Osgood slog class)", 1},
        {"sqrt_sigma_1d", "sigma(x) = sqrt(|x| ^ 1), b = 0, g = 1 (violates identity-Lambda regularity)", 1},
        {"linear_growth", "sigma = I, b(x) = x, g = d (gamma = s+1 class)", 0},
        {"lipschitz_contraction_1d", "sigma = 1, b(x) = -x, g = 4", 1},
        {"quadratic_drift_1d", "sigma = 0, b(x) = x^2 (explosive; violates gamma = s+1 growth)", 1},
        {"ex21_growth", "sigma = I/sqrt(d), b(x) = x sqrt(log(|x|+1)) (|b| <= |x| sqrt(log(|x|+1)) + 1)", 0},
        {"ex22_bounded", "sigma = I, b(x) = x clamp(x1 - 1, 0, 1): bounded near the boundary, d = 2", 2},
        {"ex22_sublinear", "sigma = I/sqrt(2), b(x) = x (|x|+1)^(-3/4): growth order 1/4, d = 2", 2},
    };
    return table;
}

namespace {

[[noreturn]] void unknown_preset(const std::string& id) {
    std::ostringstream os;
    os << "unknown coefficient preset '" << id << "'; available:";
    for (const auto& p : coefficient_presets()) os << " " << p.id;
    throw std::invalid_argument(os.str());
}

int resolve_dim(const PresetInfo& info, std::optional<int> dim, const std::string& id) {
    if (info.dim > 0) {
        if (dim && *dim != info.dim)
            throw std::invalid_argument("preset '" + id + "' is fixed to dimension " +
                                        std::to_string(info.dim));
        return info.dim;
    }
    if (!dim) throw std::invalid_argument("preset '" + id + "' needs a dimension");
    return *dim;
}

}  // namespace

CoefficientField make_coefficient_preset(const std::string& id, std::optional<int> dim) {
    const PresetInfo* info = nullptr;
    for (const auto& p : coefficient_presets())
        if (p.id == id) info = &p;
    if (!info) unknown_preset(id);
    const int d = resolve_dim(*info, dim, id);
    CoefficientField cf;
    cf.dim = d;
    cf.preset_id = id;
    if (id == "unit_diffusion") {
        cf.sigma = [d](double, const Vec&) { return Mat::identity(d, 1.0); };
        cf.b = [d](double, const Vec&) { return zeros(d); };
        cf.g = [](double) { return 1.0; };
    } else if (id == "log_lipschitz_1d") {
        cf.sigma = [](double, const Vec&) { return Mat::identity(1, 1.0); };
        cf.b = [](double, const Vec& x) {
            const double a = std::max(std::fabs(x[0]), 1e-12);
            return Vec{x[0] * std::log(1.0 / a)};
        };
        cf.g = [](double) { return 4.0; };  // measured modulus ratio is 1.0
    } else if (id == "sqrt_sigma_1d") {
        cf.sigma = [](double, const Vec& x) {
            return Mat::identity(1, std::sqrt(std::min(std::fabs(x[0]), 1.0)));
        };
        cf.b = [](double, const Vec&) { return zeros(1); };
        cf.g = [](double) { return 1.0; };
    } else if (id == "linear_growth") {
        cf.sigma = [d](double, const Vec&) { return Mat::identity(d, 1.0); };
        cf.b = [](double, const Vec& x) { return x; };
        cf.g = [d](double) { return static_cast<double>(d); };
        cf.gamma_id = "linear";
    } else if (id == "lipschitz_contraction_1d") {
        cf.sigma = [](double, const Vec&) { return Mat::identity(1, 1.0); };
        cf.b = [](double, const Vec& x) { return Vec{-x[0]}; };
        cf.g = [](double) { return 4.0; };
    } else if (id == "quadratic_drift_1d") {
        cf.sigma = [](double, const Vec&) { return Mat::identity(1, 0.0); };
        cf.b = [](double, const Vec& x) { return Vec{x[0] * x[0]}; };
        cf.g = [](double) { return 1.0; };
    } else if (id == "ex21_growth") {
        cf.sigma = [d](double, const Vec&) {
            return Mat::identity(d, 1.0 / std::sqrt(static_cast<double>(d)));
        };
        cf.b = [](double, const Vec& x) {
            return std::sqrt(std::log(norm(x) + 1.0)) * x;
        };
        cf.g = [](double) { return 10.0; };
        cf.gamma_id = "loglinear";
    } else if (id == "ex22_bounded") {
        cf.sigma = [](double, const Vec&) { return Mat::identity(2, 1.0); };
        cf.b = [](double, const Vec& x) {
            const double f = std::clamp(x[0] - 1.0, 0.0, 1.0);
            return f * x;
        };
        cf.g = [](double) { return 2.0; };
        cf.gamma_id = "linear";
    } else if (id == "ex22_sublinear") {
        cf.sigma = [](double, const Vec&) {
            return Mat::identity(2, 1.0 / std::sqrt(2.0));
        };
        cf.b = [](double, const Vec& x) {
            return std::pow(norm(x) + 1.0, -0.75) * x;
        };
        cf.g = [](double) { return 1.0; };
        cf.gamma_id = "linear";
    } else {
        unknown_preset(id);
    }
    return cf;
}

ModulusLambda make_modulus(const std::string& id) {
    if (id == "identity") return ModulusLambda::identity();
    if (id == "slog") return ModulusLambda::s_log_inv();
    if (id == "sloglog") return ModulusLambda::s_log_inv_loglog_inv();
    if (id == "sqrt")
        return ModulusLambda::custom([](double s) { return std::sqrt(s); }, 0.99, "sqrt");
    std::ostringstream os;
    os << "unknown modulus '" << id << "'; available:";
    for (const auto& m : modulus_ids()) os << " " << m;
    throw std::invalid_argument(os.str());
}

GrowthGamma make_gamma(const std::string& id) {
    if (id == "linear") return GrowthGamma::linear();
    if (id == "loglinear") return GrowthGamma::loglinear();
    std::ostringstream os;
    os << "unknown gamma '" << id << "'; available:";
    for (const auto& g : gamma_ids()) os << " " << g;
    throw std::invalid_argument(os.str());
}

std::vector<std::string> modulus_ids() { return {"identity", "slog", "sloglog", "sqrt"}; }
std::vector<std::string> gamma_ids() { return {"linear", "loglinear"}; }

}  // namespace skl
