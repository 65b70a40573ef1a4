// skorohod-lab: reflected-SDE simulation and certificate-checking CLI.
//
// Usage:
//   skorohod-lab <experiment-kind> --config <file> [--out <dir>] [--seed <u64>]
//                [--workers <n|auto>]
//   skorohod-lab selftest --config <file> [--workers <n>]
//   skorohod-lab --list-presets
//   skorohod-lab --version

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "skl/config.hpp"
#include "skl/harness.hpp"
#include "skl/presets.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void list_presets() {
    std::cout << "coefficient presets:\n";
    for (const auto& p : skl::coefficient_presets()) {
        std::cout << "  " << p.id;
        if (p.dim > 0) std::cout << " (d=" << p.dim << ")";
        std::cout << " - " << p.description << "\n";
    }
    std::cout << "moduli:";
    for (const auto& m : skl::modulus_ids()) std::cout << " " << m;
    std::cout << "\ngrowth functions:";
    for (const auto& g : skl::gamma_ids()) std::cout << " " << g;
    std::cout << "\nexperiments:";
    for (const auto& k : skl::experiment_kinds()) std::cout << " " << k;
    std::cout << "\n";
}

int parse_workers(const std::string& text) {
    if (text == "auto") return 0;
    try {
        const int n = std::stoi(text);
        if (n >= 1) return n;
    } catch (...) {
    }
    throw CLI::ValidationError("--workers", "must be a positive integer or 'auto'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skorohod-lab: reflected SDE simulation and hypothesis checking"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    bool show_presets = false;
    app.add_flag("--version", show_version, "print version and exit");
    app.add_flag("--list-presets", show_presets, "list presets and exit");

    std::string config_path, out_dir, workers_text = "auto";
    std::uint64_t seed_override = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file")->required();
        cmd->add_option("--out", out_dir, "output directory (report.json, path_<i>.csv)");
        cmd->add_option("--seed", seed_override, "seed override")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--workers", workers_text, "worker count or 'auto'")
            ->envname("SKOROHOD_LAB_WORKERS");
    };

    std::vector<CLI::App*> experiment_cmds;
    for (const auto& kind : skl::experiment_kinds()) {
        CLI::App* cmd = app.add_subcommand(kind, "run the " + kind + " experiment");
        add_common(cmd);
        experiment_cmds.push_back(cmd);
    }
    CLI::App* selftest = app.add_subcommand(
        "selftest", "worker-independence self-test (runs a config with 1 and N workers)");
    add_common(selftest);

    CLI11_PARSE(app, argc, argv);

    if (show_version) {
        std::cout << "skorohod-lab " << skl::kVersion << "\n";
        return 0;
    }
    if (show_presets) {
        list_presets();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 1;
    }

    try {
        const CLI::App* active = app.get_subcommands().front();
        const std::string kind = active->get_name();
        auto parsed = skl::parse_config(read_file(config_path));
        if (!parsed.ok()) {
            std::cerr << "config errors:\n";
            for (const auto& e : parsed.errors) std::cerr << "  " << e << "\n";
            return 1;
        }
        skl::ExperimentConfig cfg = std::move(*parsed.config);
        if (kind != "selftest" && cfg.experiment != kind) {
            std::cerr << "config experiment '" << cfg.experiment
                      << "' does not match subcommand '" << kind << "'\n";
            return 1;
        }
        if (seed_given) {
            cfg.seed = seed_override;
            cfg.raw["seed"] = seed_override;
        }
        const int workers = parse_workers(workers_text);
        if (workers > 0) cfg.workers = workers;

        if (kind == "selftest") {
            const bool ok = skl::self_test_workers(cfg, workers > 0 ? workers : 8);
            std::cout << (ok ? "selftest: PASS (worker-count independent)\n"
                             : "selftest: FAIL (payload differs across worker counts)\n");
            return ok ? 0 : 2;
        }

        const skl::RunReport report = skl::run(
            cfg, out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir),
            workers > 0 ? std::optional<int>(workers) : std::nullopt);
        if (out_dir.empty()) std::cout << report.document.dump(2) << "\n";
        if (report.outcome == skl::Outcome::error)
            std::cerr << "execution error: " << report.document["payload"].dump() << "\n";
        return static_cast<int>(report.outcome);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
