#include "skl/harness.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "skl/brownian.hpp"
#include "skl/parallel.hpp"
#include "skl/presets.hpp"
#include "skl/report.hpp"
#include "skl/sde.hpp"

namespace skl {

namespace {

using Json = nlohmann::ordered_json;

double num(const Json& params, const char* key, double def = 0.0) {
    return params.contains(key) ? params.at(key).get<double>() : def;
}

long inum(const Json& params, const char* key, long def = 0) {
    return params.contains(key) ? params.at(key).get<long>() : def;
}

bool flag(const Json& params, const char* key, bool def = false) {
    return params.contains(key) ? params.at(key).get<bool>() : def;
}

Vec vec_of(const Json& params, const char* key) {
    Vec v;
    for (const auto& e : params.at(key)) v.push_back(e.get<double>());
    return v;
}

std::vector<double> ladder_of(const Json& params, const char* key) { return vec_of(params, key); }

SampledPath path_from_values(const std::vector<double>& w, double dt) {
    SampledPath p = SampledPath::uniform(dt, w.size() - 1, 1);
    for (std::size_t i = 0; i < w.size(); ++i) p.values[i] = w[i];
    return p;
}

Json path_tail_json(const SampledPath& p) {
    Json j;
    j["points"] = p.points();
    j["final_t"] = p.t.back();
    j["final_value"] = Json(p.point(p.points() - 1));
    return j;
}

struct ExperimentOutput {
    Json payload;
    Outcome outcome = Outcome::pass;
    std::vector<std::pair<std::string, SampledPath>> csv_paths;
};

ExperimentOutput run_solve1d(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const double dt = num(cfg.params, "dt");
    SampledPath w;
    if (cfg.params.contains("w")) {
        w = path_from_values(vec_of(cfg.params, "w"), dt);
    } else {
        const double T = num(cfg.params, "T");
        const double x0 = num(cfg.params, "x0", 0.0);
        const auto driver = BrownianDriver::make(cfg.seed, 0, 1, T, dt);
        w = driver.cumulative({x0});
    }
    auto [xi, phi] = solve_1d(w);
    out.payload["xi"] = Json(xi.values);
    out.payload["phi"] = Json(phi.values);
    out.payload["grid"] = Json(w.t);
    if (cfg.emit_csv) {
        out.csv_paths.emplace_back("path_0.csv", xi);
        out.csv_paths.emplace_back("path_1.csv", phi);
    }
    return out;
}

ExperimentOutput run_simulate(const ExperimentConfig& cfg, const WorkerPool&) {
    ExperimentOutput out;
    const double T = num(cfg.params, "T");
    const double dt = num(cfg.params, "dt");
    const Vec x0 = vec_of(cfg.params, "x0");
    std::vector<double> ladder;
    if (cfg.params.contains("R_ladder")) ladder = ladder_of(cfg.params, "R_ladder");
    const auto driver =
        BrownianDriver::make(cfg.seed, 0, cfg.coefficients->dim, T, dt);
    const SimResult res = simulate(*cfg.domain, *cfg.coefficients, x0, driver, ladder);
    out.payload["X"] = path_tail_json(res.sol.X);
    out.payload["total_variation"] = res.sol.total_variation.back();
    out.payload["stopped"] = res.explosion.stopped;
    out.payload["max_abs"] = res.explosion.max_abs;
    Json hits = Json::array();
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        Json h;
        h["R"] = ladder[i];
        if (res.explosion.hit_times[i]) h["hit_time"] = *res.explosion.hit_times[i];
        hits.push_back(std::move(h));
    }
    out.payload["radius_hits"] = std::move(hits);
    if (flag(cfg.params, "verify", true)) {
        SolutionCheckOptions opts;
        opts.seed = cfg.seed;
        const auto check = verify_solution(res.sol, *cfg.domain, opts);
        out.payload["verify"] = to_json(check);
        if (!check.pass) out.outcome = Outcome::violations;
    }
    if (cfg.emit_csv) {
        out.csv_paths.emplace_back("path_0.csv", res.sol.X);
        out.csv_paths.emplace_back("path_1.csv", res.sol.Phi);
    }
    return out;
}

ExperimentOutput run_uniqueness(const ExperimentConfig& cfg, const WorkerPool& pool) {
    ExperimentOutput out;
    const auto rep = uniqueness_experiment(
        *cfg.domain, *cfg.coefficients, *cfg.modulus, vec_of(cfg.params, "x0"),
        num(cfg.params, "T"), ladder_of(cfg.params, "dt_ladder"),
        ladder_of(cfg.params, "delta_ladder"), static_cast<int>(inum(cfg.params, "seeds")),
        cfg.seed, pool);
    out.payload = to_json(rep);
    return out;
}

ExperimentOutput run_explosion(const ExperimentConfig& cfg, const WorkerPool& pool) {
    ExperimentOutput out;
    const auto rep = explosion_experiment(
        *cfg.domain, *cfg.coefficients, vec_of(cfg.params, "x0"), num(cfg.params, "T"),
        num(cfg.params, "dt"), ladder_of(cfg.params, "R_ladder"),
        inum(cfg.params, "path_count"), cfg.seed, pool);
    out.payload = to_json(rep);
    return out;
}

ExperimentOutput run_check_domain(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const double r0 = cfg.params.contains("r0") ? num(cfg.params, "r0")
                                                : cfg.domain->meta_r0.value();
    const int bsamples = static_cast<int>(inum(cfg.params, "boundary_samples", 128));
    const int psamples = static_cast<int>(inum(cfg.params, "probe_samples", 2048));
    const auto repA = verify_condition_A(*cfg.domain, r0, bsamples, psamples, cfg.seed);
    out.payload["condition_A"] = to_json(repA);
    bool ok = repA.pass;
    const auto delta = cfg.params.contains("delta") ? std::optional<double>(num(cfg.params, "delta"))
                                                    : cfg.domain->meta_delta;
    const auto beta = cfg.params.contains("beta") ? std::optional<double>(num(cfg.params, "beta"))
                                                  : cfg.domain->meta_beta;
    if (delta && beta) {
        const auto repB = verify_condition_B(*cfg.domain, *delta, *beta, bsamples, cfg.seed);
        out.payload["condition_B"] = to_json(repB);
        ok = ok && repB.pass;
    }
    out.outcome = ok ? Outcome::pass : Outcome::violations;
    return out;
}

ExperimentOutput run_check_coefficients(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    bool ok = true;
    const double R = num(cfg.params, "R", 8.0);
    const double T = num(cfg.params, "T", 1.0);
    const long samples = inum(cfg.params, "samples", 20000);
    if (cfg.modulus) {
        const auto rep = check_regularity(*cfg.coefficients, *cfg.modulus, *cfg.domain, R, T,
                                          samples, cfg.seed);
        out.payload["regularity"] = to_json(rep);
        ok = ok && rep.pass;
        if (flag(cfg.params, "osgood", true)) {
            const auto diag =
                osgood_diagnose(*cfg.modulus, std::min(0.1, cfg.modulus->eps0 * 0.5));
            out.payload["osgood"] = to_json(diag);
        }
    }
    if (cfg.gamma) {
        const auto rep = check_growth(*cfg.coefficients, *cfg.gamma, *cfg.domain,
                                      num(cfg.params, "radius", 8.0), T, samples, cfg.seed);
        out.payload["growth"] = to_json(rep);
        ok = ok && rep.pass;
    }
    out.outcome = ok ? Outcome::pass : Outcome::violations;
    return out;
}

ExperimentOutput run_check_lyapunov(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const std::string preset = cfg.params.at("preset").get<std::string>();
    const PresetBundle bundle =
        preset_example_2_1(preset == "convex" ? ExamplePreset::convex : ExamplePreset::tube);
    const double T = num(cfg.params, "T", 1.0);
    std::vector<double> ladder = {1, 2, 4, 8, 16};
    if (cfg.params.contains("R_ladder")) ladder = ladder_of(cfg.params, "R_ladder");
    const auto v1 = check_V1(bundle.cert, *bundle.domain, T, ladder,
                             inum(cfg.params, "shell_samples", 2048), cfg.seed,
                             num(cfg.params, "escape_threshold", 50.0));
    const auto v2 = check_V2(bundle.cert, *bundle.domain,
                             inum(cfg.params, "boundary_samples", 10000), cfg.seed);
    const auto v3 = check_V3(bundle.cert, bundle.cf, bundle.gamma, *bundle.domain, T,
                             inum(cfg.params, "v3_samples", 100000), cfg.seed,
                             num(cfg.params, "window", 64.0));
    out.payload["preset"] = preset;
    out.payload["notes"] = bundle.notes;
    out.payload["g"] = bundle.g;
    out.payload["V1"] = to_json(v1);
    out.payload["V2"] = to_json(v2);
    out.payload["V3"] = to_json(v3);
    out.outcome = (v1.pass && v2.pass && v3.pass) ? Outcome::pass : Outcome::violations;
    return out;
}

ExperimentOutput run_check_covering(const ExperimentConfig& cfg) {
    ExperimentOutput out;
    const auto rep = check_covering(*cfg.covering, *cfg.coefficients, *cfg.domain,
                                    inum(cfg.params, "samples_per_center", 2000),
                                    inum(cfg.params, "boundary_samples", 512), cfg.seed);
    out.payload = to_json(rep);
    Json spec;
    spec["centers"] = cfg.covering->centers.size();
    spec["beta_hat"] = cfg.covering->beta_hat;
    spec["nu"] = cfg.covering->nu;
    spec["C"] = cfg.covering->C;
    spec["window"] = cfg.covering->window;
    spec["windowed_note"] = "infinite covering families are instantiated inside the window only";
    out.payload["spec"] = std::move(spec);
    out.outcome = rep.pass ? Outcome::pass : Outcome::violations;
    return out;
}

ExperimentOutput run_variation_bound(const ExperimentConfig& cfg, const WorkerPool& pool) {
    ExperimentOutput out;
    const double T = num(cfg.params, "T");
    const double dt = num(cfg.params, "dt");
    const Vec x0 = vec_of(cfg.params, "x0");
    const double theta = num(cfg.params, "theta", 0.5);
    double C1, C2;
    if (cfg.params.contains("C1")) {
        C1 = num(cfg.params, "C1");
        C2 = num(cfg.params, "C2");
    } else {
        const auto sc = saisho_constants(theta, num(cfg.params, "r0", 1.0),
                                         num(cfg.params, "beta", 1.0),
                                         num(cfg.params, "delta", 1.0));
        C1 = sc.C1;
        C2 = sc.C2;
    }
    const long paths = inum(cfg.params, "path_count", 1);
    const auto max_window =
        static_cast<std::size_t>(inum(cfg.params, "max_window_points", 4096));
    struct PathResult {
        Json json;
        bool pass = true;
    };
    auto results = pool.map<PathResult>(static_cast<std::size_t>(paths), [&](std::size_t i) {
        const auto driver = BrownianDriver::make(cfg.seed, static_cast<std::uint32_t>(i),
                                                 cfg.coefficients->dim, T, dt);
        const SimResult res = simulate(*cfg.domain, *cfg.coefficients, x0, driver);
        const auto windows = dyadic_windows(res.sol.X.points(), max_window);
        const auto rep = check_variation_bound(res.sol, res.W, theta, C1, C2, windows);
        PathResult pr;
        pr.json = to_json(rep);
        pr.pass = rep.pass;
        return pr;
    });
    Json arr = Json::array();
    bool all = true;
    for (auto& r : results) {
        all = all && r.pass;
        arr.push_back(std::move(r.json));
    }
    out.payload["C1"] = C1;
    out.payload["C2"] = C2;
    out.payload["theta"] = theta;
    out.payload["paths"] = std::move(arr);
    out.payload["pass"] = all;
    out.outcome = all ? Outcome::pass : Outcome::violations;
    return out;
}

ExperimentOutput run_excursions(const ExperimentConfig& cfg, const WorkerPool& pool) {
    ExperimentOutput out;
    const double T = num(cfg.params, "T");
    const double dt = num(cfg.params, "dt");
    const Vec x0 = vec_of(cfg.params, "x0");
    const long paths = inum(cfg.params, "path_count", 1);
    const bool compare = flag(cfg.params, "compare_refined", false);
    struct R {
        long sigma = 0;
        long sigma_refined = 0;
    };
    auto results = pool.map<R>(static_cast<std::size_t>(paths), [&](std::size_t i) {
        const auto driver = BrownianDriver::make(cfg.seed, static_cast<std::uint32_t>(i),
                                                 cfg.coefficients->dim, T, dt);
        const SimResult res = simulate(*cfg.domain, *cfg.coefficients, x0, driver);
        R r;
        r.sigma = excursion_diagnostic(res.sol, *cfg.covering, *cfg.domain).sigma_count;
        if (compare) {
            const SimResult fine = simulate(*cfg.domain, *cfg.coefficients, x0, driver.refined());
            r.sigma_refined =
                excursion_diagnostic(fine.sol, *cfg.covering, *cfg.domain).sigma_count;
        }
        return r;
    });
    Json arr = Json::array();
    std::vector<double> deltas;
    for (const auto& r : results) {
        Json e;
        e["sigma_count"] = r.sigma;
        if (compare) {
            e["sigma_count_refined"] = r.sigma_refined;
            deltas.push_back(std::fabs(static_cast<double>(r.sigma - r.sigma_refined)));
        }
        arr.push_back(std::move(e));
    }
    out.payload["per_path"] = std::move(arr);
    if (compare) {
        std::sort(deltas.begin(), deltas.end());
        out.payload["median_abs_delta_under_refinement"] =
            deltas.empty() ? 0.0 : deltas[deltas.size() / 2];
    }
    return out;
}

}  // namespace

std::string RunReport::payload_bytes() const {
    Json subset;
    subset["config"] = document.at("config");
    subset["payload"] = document.at("payload");
    return subset.dump();
}

RunReport run(const ExperimentConfig& config, const std::optional<std::string>& out_dir,
              std::optional<int> workers_override) {
    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    int workers = workers_override.value_or(config.workers);
    if (workers <= 0) workers = WorkerPool::resolve_auto();
    const WorkerPool pool(workers);

    Json doc;
    doc["format_version"] = kSchemaVersion;
    doc["tool_version"] = kVersion;
    doc["experiment"] = config.experiment;
    doc["config"] = config.raw;

    ExperimentOutput out;
    try {
        const std::string& k = config.experiment;
        if (k == "solve1d")
            out = run_solve1d(config);
        else if (k == "simulate")
            out = run_simulate(config, pool);
        else if (k == "uniqueness")
            out = run_uniqueness(config, pool);
        else if (k == "explosion")
            out = run_explosion(config, pool);
        else if (k == "check-domain")
            out = run_check_domain(config);
        else if (k == "check-coefficients")
            out = run_check_coefficients(config);
        else if (k == "check-lyapunov")
            out = run_check_lyapunov(config);
        else if (k == "check-covering")
            out = run_check_covering(config);
        else if (k == "variation-bound")
            out = run_variation_bound(config, pool);
        else if (k == "excursions")
            out = run_excursions(config, pool);
        else
            throw std::invalid_argument("unknown experiment kind: " + k);
    } catch (const std::exception& e) {
        out.payload = Json::object();
        out.payload["error"] = e.what();
        out.outcome = Outcome::error;
    }

    doc["payload"] = std::move(out.payload);
    const auto t1 = std::chrono::steady_clock::now();
    Json prov;
    prov["seed"] = config.seed;
    prov["workers"] = workers;
    prov["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    doc["provenance"] = std::move(prov);
    report.document = std::move(doc);
    report.outcome = out.outcome;

    if (out_dir) {
        std::filesystem::create_directories(*out_dir);
        {
            std::ofstream f(*out_dir + "/report.json", std::ios::binary);
            f << report.document.dump(2) << "\n";
        }
        for (const auto& [name, path] : out.csv_paths)
            write_csv_file(*out_dir + "/" + name, path);
    }
    return report;
}

bool self_test_workers(const ExperimentConfig& config, int workers) {
    const RunReport one = run(config, std::nullopt, 1);
    const RunReport many = run(config, std::nullopt, workers);
    return one.payload_bytes() == many.payload_bytes();
}

}  // namespace skl
