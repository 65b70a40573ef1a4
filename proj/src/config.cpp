#include "skl/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "skl/expr.hpp"
#include "skl/presets.hpp"

namespace skl {

namespace {

using Json = nlohmann::ordered_json;

struct Validator {
    std::vector<std::string>& errors;

    void fail(const std::string& path, const std::string& msg) {
        errors.push_back(path + ": " + msg);
    }

    bool require_object(const Json& j, const std::string& path) {
        if (!j.is_object()) {
            fail(path, "must be an object");
            return false;
        }
        return true;
    }

    void reject_unknown(const Json& j, const std::string& path,
                        const std::set<std::string>& allowed) {
        if (!j.is_object()) return;
        for (const auto& [key, _] : j.items())
            if (!allowed.count(key)) fail(path + "." + key, "unknown field");
    }

    std::optional<double> number(const Json& j, const std::string& path, const std::string& key,
                                 bool required, std::optional<double> def = {}) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required field missing");
            return def;
        }
        if (!j.at(key).is_number()) {
            fail(path + "." + key, "must be a number");
            return {};
        }
        return j.at(key).get<double>();
    }

    std::optional<long> integer(const Json& j, const std::string& path, const std::string& key,
                                bool required, std::optional<long> def = {}) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required field missing");
            return def;
        }
        if (!j.at(key).is_number_integer()) {
            fail(path + "." + key, "must be an integer");
            return {};
        }
        return j.at(key).get<long>();
    }

    std::optional<bool> boolean(const Json& j, const std::string& path, const std::string& key,
                                bool def) {
        if (!j.contains(key)) return def;
        if (!j.at(key).is_boolean()) {
            fail(path + "." + key, "must be a boolean");
            return {};
        }
        return j.at(key).get<bool>();
    }

    std::optional<std::string> string(const Json& j, const std::string& path,
                                      const std::string& key, bool required) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required field missing");
            return {};
        }
        if (!j.at(key).is_string()) {
            fail(path + "." + key, "must be a string");
            return {};
        }
        return j.at(key).get<std::string>();
    }

    std::optional<Vec> vector(const Json& j, const std::string& path, const std::string& key,
                              bool required) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "required field missing");
            return {};
        }
        const Json& a = j.at(key);
        if (!a.is_array() || a.empty()) {
            fail(path + "." + key, "must be a non-empty array of numbers");
            return {};
        }
        Vec v;
        for (const auto& e : a) {
            if (!e.is_number()) {
                fail(path + "." + key, "must contain only numbers");
                return {};
            }
            v.push_back(e.get<double>());
        }
        return v;
    }

    void positive(std::optional<double> v, const std::string& path, const std::string& key) {
        if (v && !(*v > 0.0)) fail(path + "." + key, "must be > 0");
    }
};

std::vector<std::string> var_names(int d) {
    std::vector<std::string> names = {"t"};
    for (int i = 1; i <= d; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

CoefficientField coefficients_from_json(const Json& spec, Validator& val,
                                        const std::string& path, std::optional<int> domain_dim) {
    CoefficientField cf;
    if (!val.require_object(spec, path)) return cf;
    val.reject_unknown(spec, path, {"preset", "d", "sigma", "b", "g"});
    if (spec.contains("preset")) {
        const auto id = val.string(spec, path, "preset", true);
        std::optional<int> d = domain_dim;
        if (const auto di = val.integer(spec, path, "d", false)) d = static_cast<int>(*di);
        if (!id) return cf;
        try {
            return make_coefficient_preset(*id, d);
        } catch (const std::exception& e) {
            val.fail(path + ".preset", e.what());
            return cf;
        }
    }
    const auto di = val.integer(spec, path, "d", !domain_dim.has_value());
    const int d = di ? static_cast<int>(*di) : domain_dim.value_or(1);
    if (d < 1) {
        val.fail(path + ".d", "must be >= 1");
        return cf;
    }
    cf.dim = d;
    const auto names = var_names(d);
    // drift: array of d expressions or {"type": "zero"}
    if (!spec.contains("b")) {
        cf.b = [d](double, const Vec&) { return zeros(d); };
    } else if (spec.at("b").is_array()) {
        const Json& arr = spec.at("b");
        if (static_cast<int>(arr.size()) != d) {
            val.fail(path + ".b", "needs exactly d expressions");
            return cf;
        }
        std::vector<Expr> exprs;
        for (const auto& e : arr) {
            if (!e.is_string()) {
                val.fail(path + ".b", "entries must be expression strings");
                return cf;
            }
            try {
                exprs.push_back(Expr::compile(e.get<std::string>(), names));
            } catch (const std::exception& ex) {
                val.fail(path + ".b", ex.what());
                return cf;
            }
        }
        cf.b = [exprs, d](double t, const Vec& x) {
            std::vector<double> slots(static_cast<std::size_t>(d) + 1);
            slots[0] = t;
            for (int i = 0; i < d; ++i) slots[static_cast<std::size_t>(i) + 1] = x[static_cast<std::size_t>(i)];
            Vec out(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = exprs[static_cast<std::size_t>(i)].eval(slots);
            return out;
        };
    } else {
        val.fail(path + ".b", "must be an array of expression strings");
    }
    // sigma: identity / diagonal exprs / constant matrix
    if (!spec.contains("sigma")) {
        cf.sigma = [d](double, const Vec&) { return Mat::identity(d, 1.0); };
    } else {
        const Json& s = spec.at("sigma");
        if (!val.require_object(s, path + ".sigma")) return cf;
        val.reject_unknown(s, path + ".sigma", {"type", "scale", "entries"});
        const auto type = val.string(s, path + ".sigma", "type", true);
        if (!type) return cf;
        if (*type == "identity") {
            const double scale = val.number(s, path + ".sigma", "scale", false, 1.0).value_or(1.0);
            cf.sigma = [d, scale](double, const Vec&) { return Mat::identity(d, scale); };
        } else if (*type == "diagonal") {
            if (!s.contains("entries") || !s.at("entries").is_array() ||
                static_cast<int>(s.at("entries").size()) != d) {
                val.fail(path + ".sigma.entries", "needs exactly d expressions");
                return cf;
            }
            std::vector<Expr> exprs;
            for (const auto& e : s.at("entries")) {
                if (!e.is_string()) {
                    val.fail(path + ".sigma.entries", "entries must be expression strings");
                    return cf;
                }
                try {
                    exprs.push_back(Expr::compile(e.get<std::string>(), names));
                } catch (const std::exception& ex) {
                    val.fail(path + ".sigma.entries", ex.what());
                    return cf;
                }
            }
            cf.sigma = [exprs, d](double t, const Vec& x) {
                std::vector<double> slots(static_cast<std::size_t>(d) + 1);
                slots[0] = t;
                for (int i = 0; i < d; ++i)
                    slots[static_cast<std::size_t>(i) + 1] = x[static_cast<std::size_t>(i)];
                Mat m(d, d);
                for (int i = 0; i < d; ++i) m(i, i) = exprs[static_cast<std::size_t>(i)].eval(slots);
                return m;
            };
        } else if (*type == "constant") {
            if (!s.contains("entries") || !s.at("entries").is_array() ||
                static_cast<int>(s.at("entries").size()) != d) {
                val.fail(path + ".sigma.entries", "needs a d x d numeric matrix");
                return cf;
            }
            Mat m(d, d);
            bool ok = true;
            for (int i = 0; i < d && ok; ++i) {
                const Json& row = s.at("entries")[static_cast<std::size_t>(i)];
                if (!row.is_array() || static_cast<int>(row.size()) != d) {
                    val.fail(path + ".sigma.entries", "needs a d x d numeric matrix");
                    ok = false;
                    break;
                }
                for (int jj = 0; jj < d; ++jj) {
                    if (!row[static_cast<std::size_t>(jj)].is_number()) {
                        val.fail(path + ".sigma.entries", "matrix entries must be numbers");
                        ok = false;
                        break;
                    }
                    m(i, jj) = row[static_cast<std::size_t>(jj)].get<double>();
                }
            }
            if (ok) cf.sigma = [m](double, const Vec&) { return m; };
        } else {
            val.fail(path + ".sigma.type", "must be identity | diagonal | constant");
        }
    }
    // g: constant or expression in t
    if (!spec.contains("g")) {
        cf.g = [](double) { return 1.0; };
    } else if (spec.at("g").is_number()) {
        const double g = spec.at("g").get<double>();
        cf.g = [g](double) { return g; };
    } else if (spec.at("g").is_string()) {
        try {
            Expr e = Expr::compile(spec.at("g").get<std::string>(), {"t"});
            cf.g = [e](double t) { return e.eval(std::vector<double>{t}); };
        } catch (const std::exception& ex) {
            val.fail(path + ".g", ex.what());
        }
    } else {
        val.fail(path + ".g", "must be a number or an expression in t");
    }
    return cf;
}

ModulusLambda modulus_from_json(const Json& spec, Validator& val, const std::string& path) {
    if (spec.is_string()) {
        try {
            return make_modulus(spec.get<std::string>());
        } catch (const std::exception& e) {
            val.fail(path, e.what());
            return ModulusLambda::identity();
        }
    }
    if (!spec.is_object()) {
        val.fail(path, "must be a builtin name or an object {expr, eps0}");
        return ModulusLambda::identity();
    }
    Validator& v = val;
    v.reject_unknown(spec, path, {"builtin", "expr", "eps0"});
    if (spec.contains("builtin")) {
        const auto id = v.string(spec, path, "builtin", true);
        if (id) {
            try {
                return make_modulus(*id);
            } catch (const std::exception& e) {
                v.fail(path + ".builtin", e.what());
            }
        }
        return ModulusLambda::identity();
    }
    const auto expr_text = v.string(spec, path, "expr", true);
    const auto eps0 = v.number(spec, path, "eps0", true);
    if (!expr_text || !eps0) return ModulusLambda::identity();
    if (!(*eps0 > 0.0 && *eps0 < 1.0)) {
        v.fail(path + ".eps0", "must be in (0,1)");
        return ModulusLambda::identity();
    }
    try {
        Expr e = Expr::compile(*expr_text, {"s"});
        return ModulusLambda::custom(
            [e](double s) { return e.eval(std::vector<double>{s}); }, *eps0, *expr_text);
    } catch (const std::exception& ex) {
        v.fail(path + ".expr", ex.what());
        return ModulusLambda::identity();
    }
}

GrowthGamma gamma_from_json(const Json& spec, Validator& val, const std::string& path) {
    if (spec.is_string()) {
        try {
            return make_gamma(spec.get<std::string>());
        } catch (const std::exception& e) {
            val.fail(path, e.what());
            return GrowthGamma::linear();
        }
    }
    if (!spec.is_object()) {
        val.fail(path, "must be a builtin name or an object {expr}");
        return GrowthGamma::linear();
    }
    val.reject_unknown(spec, path, {"builtin", "expr"});
    if (spec.contains("builtin")) {
        const auto id = val.string(spec, path, "builtin", true);
        if (id) {
            try {
                return make_gamma(*id);
            } catch (const std::exception& e) {
                val.fail(path + ".builtin", e.what());
            }
        }
        return GrowthGamma::linear();
    }
    const auto expr_text = val.string(spec, path, "expr", true);
    if (!expr_text) return GrowthGamma::linear();
    try {
        Expr e = Expr::compile(*expr_text, {"s"});
        return GrowthGamma::custom([e](double s) { return e.eval(std::vector<double>{s}); },
                                   *expr_text);
    } catch (const std::exception& ex) {
        val.fail(path + ".expr", ex.what());
        return GrowthGamma::linear();
    }
}

CoveringSpec covering_from_json(const Json& spec, Validator& val, const std::string& path,
                                const DomainPtr& domain, const Json& params,
                                std::uint64_t seed) {
    CoveringSpec cs;
    if (!val.require_object(spec, path)) return cs;
    val.reject_unknown(spec, path,
                       {"generator", "centers", "radii", "delta_hat", "beta_hat", "nu", "C",
                        "T", "window"});
    cs.delta_hat = val.number(spec, path, "delta_hat", false, 1.0).value_or(1.0);
    cs.beta_hat = val.number(spec, path, "beta_hat", false, 0.5).value_or(0.5);
    cs.nu = val.number(spec, path, "nu", false, 0.0).value_or(0.0);
    cs.C = val.number(spec, path, "C", false, 1.0).value_or(1.0);
    cs.T = val.number(spec, path, "T", false,
                      params.contains("T") ? params.at("T").get<double>() : 1.0)
               .value_or(1.0);
    cs.window = val.number(spec, path, "window", false, 16.0).value_or(16.0);
    if (spec.contains("generator")) {
        const auto gen = val.string(spec, path, "generator", true);
        if (gen && domain) {
            const bool growing = *gen == "growing";
            if (*gen != "net" && *gen != "growing") {
                val.fail(path + ".generator", "must be net | growing");
                return cs;
            }
            cs = make_halfspace_covering(*domain, cs.delta_hat, cs.beta_hat, cs.nu, cs.C, cs.T,
                                         cs.window, growing, seed);
        }
        return cs;
    }
    if (!spec.contains("centers") || !spec.at("centers").is_array()) {
        val.fail(path + ".centers", "required (or use a generator)");
        return cs;
    }
    for (const auto& c : spec.at("centers")) {
        Vec v;
        for (const auto& e : c) v.push_back(e.get<double>());
        cs.centers.push_back(std::move(v));
    }
    if (spec.contains("radii")) {
        for (const auto& r : spec.at("radii")) cs.radii.push_back(r.get<double>());
    } else {
        cs.radii.assign(cs.centers.size(), cs.delta_hat);
    }
    if (cs.radii.size() != cs.centers.size())
        val.fail(path + ".radii", "must match centers in length");
    return cs;
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {
        "solve1d",        "simulate",       "uniqueness",     "explosion",
        "check-domain",   "check-coefficients", "check-lyapunov", "check-covering",
        "variation-bound", "excursions"};
    return kinds;
}

DomainPtr make_domain_from_json(const nlohmann::ordered_json& spec) {
    std::vector<std::string> errors;
    Validator val{errors};
    if (!spec.is_object()) throw std::invalid_argument("domain: must be an object");
    val.reject_unknown(spec, "$.domain",
                       {"type", "lo", "hi", "a", "c", "center", "radius", "normals", "offsets",
                        "anchor", "d", "H", "Hprime", "r0", "delta", "beta", "window"});
    const auto type = val.string(spec, "$.domain", "type", true);
    if (!errors.empty() || !type) throw std::invalid_argument(errors.empty() ? "domain: bad type" : errors.front());
    std::shared_ptr<Domain> dom;
    if (*type == "half_line") {
        const double lo = val.number(spec, "$.domain", "lo", false, 0.0).value_or(0.0);
        dom = std::make_shared<HalfLineDomain>(lo);
    } else if (*type == "half_space") {
        const auto a = val.vector(spec, "$.domain", "a", true);
        const auto c = val.number(spec, "$.domain", "c", false, 0.0);
        if (!a) throw std::invalid_argument(errors.front());
        dom = std::make_shared<HalfSpaceDomain>(*a, c.value_or(0.0));
    } else if (*type == "box") {
        const auto lo = val.vector(spec, "$.domain", "lo", true);
        const auto hi = val.vector(spec, "$.domain", "hi", true);
        if (!lo || !hi) throw std::invalid_argument(errors.front());
        dom = std::make_shared<BoxDomain>(*lo, *hi);
    } else if (*type == "ball") {
        const auto center = val.vector(spec, "$.domain", "center", true);
        const auto radius = val.number(spec, "$.domain", "radius", true);
        if (!center || !radius) throw std::invalid_argument(errors.front());
        dom = std::make_shared<BallDomain>(*center, *radius);
    } else if (*type == "unit_square") {
        dom = PolytopeDomain::unit_square();
    } else if (*type == "polytope") {
        if (!spec.contains("normals") || !spec.contains("offsets") || !spec.contains("anchor"))
            throw std::invalid_argument("$.domain: polytope needs normals, offsets, anchor");
        std::vector<Vec> normals;
        for (const auto& row : spec.at("normals")) {
            Vec v;
            for (const auto& e : row) v.push_back(e.get<double>());
            normals.push_back(std::move(v));
        }
        Vec offsets, anchor;
        for (const auto& e : spec.at("offsets")) offsets.push_back(e.get<double>());
        for (const auto& e : spec.at("anchor")) anchor.push_back(e.get<double>());
        dom = std::make_shared<PolytopeDomain>(std::move(normals), std::move(offsets),
                                               std::move(anchor));
    } else if (*type == "tube") {
        const auto di = val.integer(spec, "$.domain", "d", false, 2);
        const int d = static_cast<int>(di.value_or(2));
        std::string h_text = val.string(spec, "$.domain", "H", false).value_or("s+1");
        Expr He = Expr::compile(h_text, {"s"});
        std::function<double(double)> H = [He](double s) {
            return He.eval(std::vector<double>{s});
        };
        std::function<double(double)> Hp;
        if (const auto hp_text = val.string(spec, "$.domain", "Hprime", false)) {
            Expr Hpe = Expr::compile(*hp_text, {"s"});
            Hp = [Hpe](double s) { return Hpe.eval(std::vector<double>{s}); };
        } else {
            Hp = [H](double s) {  // central difference fallback
                const double h = 1e-6 * (1.0 + std::fabs(s));
                return (H(s + h) - H(s - h)) / (2.0 * h);
            };
        }
        dom = std::make_shared<TubeDomain>(std::move(H), std::move(Hp), d);
    } else {
        throw std::invalid_argument("$.domain.type: unknown type '" + *type + "'");
    }
    if (spec.contains("r0")) dom->meta_r0 = spec.at("r0").get<double>();
    if (spec.contains("delta")) dom->meta_delta = spec.at("delta").get<double>();
    if (spec.contains("beta")) dom->meta_beta = spec.at("beta").get<double>();
    if (spec.contains("window")) dom->sampling_window = spec.at("window").get<double>();
    if (!errors.empty()) throw std::invalid_argument(errors.front());
    return dom;
}

ConfigResult parse_config(const std::string& text) {
    ConfigResult out;
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const std::exception& e) {
        out.errors.push_back(std::string("$: malformed JSON: ") + e.what());
        return out;
    }
    Validator val{out.errors};
    if (!val.require_object(doc, "$")) return out;
    val.reject_unknown(doc, "$",
                       {"schema_version", "experiment", "seed", "workers", "domain",
                        "coefficients", "modulus", "gamma", "covering", "params", "emit_csv"});
    const auto version = val.integer(doc, "$", "schema_version", false, kSchemaVersion);
    if (version && *version != kSchemaVersion)
        val.fail("$.schema_version", "unsupported version (expected " +
                                         std::to_string(kSchemaVersion) + ")");
    ExperimentConfig cfg;
    const auto kind = val.string(doc, "$", "experiment", true);
    if (kind) {
        bool known = false;
        for (const auto& k : experiment_kinds()) known = known || k == *kind;
        if (!known)
            val.fail("$.experiment", "unknown experiment kind '" + *kind + "'");
        else
            cfg.experiment = *kind;
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
            val.fail("$.seed", "must be a non-negative integer");
        else
            cfg.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("workers")) {
        const Json& w = doc.at("workers");
        if (w.is_string() && w.get<std::string>() == "auto")
            cfg.workers = 0;
        else if (w.is_number_integer() && w.get<int>() >= 1)
            cfg.workers = w.get<int>();
        else
            val.fail("$.workers", "must be a positive integer or \"auto\"");
    }
    cfg.emit_csv = val.boolean(doc, "$", "emit_csv", false).value_or(false);
    if (doc.contains("domain")) {
        try {
            cfg.domain = make_domain_from_json(doc.at("domain"));
        } catch (const std::exception& e) {
            val.fail("$.domain", e.what());
        }
    }
    std::optional<int> domain_dim;
    if (cfg.domain) domain_dim = cfg.domain->dimension();
    if (doc.contains("coefficients"))
        cfg.coefficients = coefficients_from_json(doc.at("coefficients"), val, "$.coefficients",
                                                  domain_dim);
    if (doc.contains("modulus")) cfg.modulus = modulus_from_json(doc.at("modulus"), val, "$.modulus");
    if (doc.contains("gamma")) cfg.gamma = gamma_from_json(doc.at("gamma"), val, "$.gamma");

    const Json params = doc.contains("params") ? doc.at("params") : Json::object();
    if (!params.is_object()) {
        val.fail("$.params", "must be an object");
        return out;
    }
    const std::string p = "$.params";
    const std::string& kindname = cfg.experiment;

    auto need_domain = [&]() {
        if (!cfg.domain) val.fail("$.domain", "required for " + kindname);
    };
    auto need_coeffs = [&]() {
        if (!cfg.coefficients) val.fail("$.coefficients", "required for " + kindname);
    };

    if (kindname == "solve1d") {
        val.reject_unknown(params, p, {"dt", "w", "T", "x0"});
        const auto dt = val.number(params, p, "dt", true);
        val.positive(dt, p, "dt");
        const bool has_w = params.contains("w");
        const bool has_T = params.contains("T");
        if (has_w == has_T) val.fail(p, "exactly one of w (values) or T (Brownian driver) required");
        if (has_w) {
            const auto w = val.vector(params, p, "w", true);
            if (w && w->front() < 0.0) val.fail(p + ".w", "w(0) must be >= 0");
        }
        if (has_T) {
            const auto T = val.number(params, p, "T", true);
            val.positive(T, p, "T");
            const auto x0 = val.number(params, p, "x0", false, 0.0);
            if (x0 && *x0 < 0.0) val.fail(p + ".x0", "must be >= 0");
        }
    } else if (kindname == "simulate") {
        need_domain();
        need_coeffs();
        val.reject_unknown(params, p, {"T", "dt", "x0", "R_ladder", "verify", "theta"});
        val.positive(val.number(params, p, "T", true), p, "T");
        val.positive(val.number(params, p, "dt", true), p, "dt");
        val.vector(params, p, "x0", true);
    } else if (kindname == "uniqueness") {
        need_domain();
        need_coeffs();
        if (!cfg.modulus) val.fail("$.modulus", "required for uniqueness");
        val.reject_unknown(params, p, {"T", "dt_ladder", "delta_ladder", "seeds", "x0"});
        val.positive(val.number(params, p, "T", true), p, "T");
        val.vector(params, p, "dt_ladder", true);
        val.vector(params, p, "delta_ladder", true);
        const auto seeds = val.integer(params, p, "seeds", true);
        if (seeds && *seeds < 1) val.fail(p + ".seeds", "must be >= 1");
        val.vector(params, p, "x0", true);
    } else if (kindname == "explosion") {
        need_domain();
        need_coeffs();
        val.reject_unknown(params, p, {"T", "dt", "x0", "R_ladder", "path_count"});
        val.positive(val.number(params, p, "T", true), p, "T");
        val.positive(val.number(params, p, "dt", true), p, "dt");
        val.vector(params, p, "x0", true);
        val.vector(params, p, "R_ladder", true);
        const auto n = val.integer(params, p, "path_count", true);
        if (n && *n < 1) val.fail(p + ".path_count", "must be >= 1");
    } else if (kindname == "check-domain") {
        need_domain();
        val.reject_unknown(params, p, {"r0", "delta", "beta", "boundary_samples", "probe_samples"});
        if (cfg.domain && !params.contains("r0") && !cfg.domain->meta_r0)
            val.fail(p + ".r0", "required (no r0 metadata on the domain)");
    } else if (kindname == "check-coefficients") {
        need_domain();
        need_coeffs();
        val.reject_unknown(params, p, {"R", "T", "samples", "radius", "osgood"});
        if (!cfg.modulus && !cfg.gamma)
            val.fail("$", "check-coefficients needs a modulus and/or a gamma");
    } else if (kindname == "check-lyapunov") {
        val.reject_unknown(params, p,
                           {"preset", "T", "R_ladder", "shell_samples", "boundary_samples",
                            "v3_samples", "escape_threshold", "window"});
        const auto preset = val.string(params, p, "preset", true);
        if (preset && *preset != "convex" && *preset != "tube")
            val.fail(p + ".preset", "must be convex | tube");
    } else if (kindname == "check-covering") {
        need_domain();
        need_coeffs();
        val.reject_unknown(params, p, {"samples_per_center", "boundary_samples", "T"});
        if (!doc.contains("covering")) val.fail("$.covering", "required for check-covering");
    } else if (kindname == "variation-bound") {
        need_domain();
        need_coeffs();
        val.reject_unknown(params, p,
                           {"T", "dt", "x0", "theta", "r0", "beta", "delta", "C1", "C2",
                            "path_count", "max_window_points"});
        val.positive(val.number(params, p, "T", true), p, "T");
        val.positive(val.number(params, p, "dt", true), p, "dt");
        val.vector(params, p, "x0", true);
        const bool saisho = params.contains("r0") || params.contains("beta") || params.contains("delta");
        const bool direct = params.contains("C1") || params.contains("C2");
        if (saisho == direct)
            val.fail(p, "give either (r0, beta, delta) for derived constants or (C1, C2)");
    } else if (kindname == "excursions") {
        need_domain();
        need_coeffs();
        val.reject_unknown(params, p, {"T", "dt", "x0", "path_count", "compare_refined"});
        val.positive(val.number(params, p, "T", true), p, "T");
        val.positive(val.number(params, p, "dt", true), p, "dt");
        val.vector(params, p, "x0", true);
        if (!doc.contains("covering")) val.fail("$.covering", "required for excursions");
    } else if (!kindname.empty()) {
        val.fail("$.experiment", "unhandled kind");
    }

    if (doc.contains("covering"))
        cfg.covering = covering_from_json(doc.at("covering"), val, "$.covering", cfg.domain,
                                          params, cfg.seed);

    if (!out.errors.empty()) return out;
    cfg.params = params;
    cfg.raw = doc;
    cfg.raw["schema_version"] = kSchemaVersion;  // resolved echo always carries it
    out.config = std::move(cfg);
    return out;
}

}  // namespace skl
