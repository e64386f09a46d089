// spherecol: run, sweep and compare collision scenes, writing CSV metrics.
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spherecol/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInstability = 3;

struct Common {
    std::string scene;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> frames;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--scene", c.scene, "Scene file or builtin:<name>")->required();
    cmd->add_option("--out", c.out, "Output CSV")->required();
    cmd->add_option("--seed", c.seed, "RNG seed override");
    cmd->add_option("--frames", c.frames, "Frame count override")->check(CLI::PositiveNumber);
}

spherecol::SceneConfig load(const Common& c) {
    auto cfg = spherecol::load_scene(c.scene);
    if (c.seed) cfg.seed = *c.seed;
    if (c.frames) cfg.frames = *c.frames;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curvature-adaptive circumsphere collision detection harness"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts, cmp_opts;
    auto* run = app.add_subcommand("run", "Simulate one scene and write per-frame metrics");
    add_common(run, run_opts);

    std::vector<double> d_values(std::begin(spherecol::kDefaultSweep), std::end(spherecol::kDefaultSweep));
    auto* sweep = app.add_subcommand("sweep", "Sweep the rebuild threshold d");
    add_common(sweep, sweep_opts);
    sweep->add_option("--d", d_values, "Comma-separated d values")->delimiter(',');

    std::vector<std::string> method_names{"circumsphere", "bounding-ball", "polygon-exact"};
    auto* cmp = app.add_subcommand("compare", "Compare detection methods on one scene");
    add_common(cmp, cmp_opts);
    cmp->add_option("--methods", method_names, "Comma-separated methods")->delimiter(',');

    std::string print_name;
    auto* list = app.add_subcommand("scenes", "List builtin scenes");
    list->add_option("--print", print_name, "Print one builtin scene in file form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*list) {
            if (!print_name.empty()) {
                std::cout << spherecol::format_scene(spherecol::builtin_scene(print_name));
            } else {
                for (const auto& n : spherecol::builtin_scene_names()) std::cout << n << '\n';
            }
        } else if (*run) {
            const auto frames = spherecol::run_scene(load(run_opts), run_opts.out);
            const auto s = spherecol::summarize(frames);
            std::cout << frames.size() << " frames, mean detect " << s.mean_detect_time_s << " s, final tunneled "
                      << s.final_tunneled_vertices << '\n';
        } else if (*sweep) {
            const auto rows = spherecol::sweep_d(load(sweep_opts), d_values, sweep_opts.out);
            for (const auto& r : rows) {
                std::cout << "d=" << r.d << " rebuilds " << r.summary.mean_rebuild_count << " stability "
                          << r.summary.mean_stability_m << '\n';
            }
        } else if (*cmp) {
            std::vector<spherecol::Method> methods;
            for (const auto& n : method_names) methods.push_back(spherecol::parse_method(n));
            const auto rows = spherecol::compare_methods(load(cmp_opts), methods, cmp_opts.out);
            for (const auto& r : rows) {
                std::cout << spherecol::to_string(r.method) << " detect " << r.summary.mean_detect_time_s << " s\n";
            }
        }
    } catch (const spherecol::SolverInstability& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInstability;
    } catch (const spherecol::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const spherecol::MeshError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
