// Command-line front end: precompute, plan, validate, bench, render.
//
// Exit codes: 0 success, 1 validation violation, 2 usage/IO error,
// 3 planner timeout, 4 provably infeasible input.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rearr/log.hpp"
#include "rearr/scenegen.hpp"
#include "rearr/solver.hpp"
#include "rearr/svg.hpp"

namespace fs = std::filesystem;
using namespace rearr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInfeasible = 4;

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        return false;
    }
    out << content;
    return bool(out);
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return std::nullopt;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RoadmapParams {
    int samples = 300;
    int neighbors = 10;
    std::uint64_t seed = 1;
};

Roadmap make_roadmap(const SceneSpec& scene, const RoadmapParams& params) {
    return build_roadmap(scene, params.samples, params.neighbors, params.seed);
}

int cmd_precompute(const std::string& scene_path, const RoadmapParams& params,
                   const std::string& out_path) {
    SceneSpec scene;
    try {
        scene = load_scene_file(scene_path);
    } catch (const SceneError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const Roadmap roadmap = make_roadmap(scene, params);
    if (!write_file(out_path, save_roadmap(roadmap))) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitUsage;
    }
    std::cout << "roadmap: " << roadmap.nodes.size() << " vertices, "
              << roadmap.edges.size() << " edges, "
              << roadmap.transitions.size() << "/"
              << scene.pose_library.size() << " poses reachable\n";
    return kExitOk;
}

int load_or_build_roadmap(const SceneSpec& scene,
                          const std::string& cache_path,
                          const RoadmapParams& params, Roadmap& out) {
    if (cache_path.empty()) {
        out = make_roadmap(scene, params);
        return kExitOk;
    }
    const auto content = read_file(cache_path);
    if (!content) {
        std::cerr << "error: cannot read roadmap cache " << cache_path << "\n";
        return kExitUsage;
    }
    try {
        out = load_roadmap(*content, scene);
    } catch (const RoadmapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

void print_stats(const SolveStats& stats) {
    std::cout << std::fixed << std::setprecision(3)
              << "wall_time: " << stats.wall_time << " s\n"
              << "hypernodes: " << stats.hypernodes << "\n"
              << "hyperedges: " << stats.hyperedges << "\n";
}

int cmd_plan(const std::string& scene_path, const std::string& cache_path,
             int b, double time_limit, std::uint64_t seed,
             const std::string& out_path, const std::string& svg_path,
             const RoadmapParams& rparams) {
    SceneSpec scene;
    try {
        scene = load_scene_file(scene_path);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const SceneError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    Roadmap roadmap;
    if (int code = load_or_build_roadmap(scene, cache_path, rparams, roadmap);
        code != kExitOk) {
        return code;
    }

    const SolveResult result =
        solve(scene, roadmap, b, std::chrono::duration<double>(time_limit),
              seed);
    if (result.status == SolveStatus::Timeout) {
        std::cout << "timeout\n";
        print_stats(result.stats);
        return kExitTimeout;
    }

    if (!out_path.empty() &&
        !write_file(out_path, save_plan(result.smoothed))) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitUsage;
    }
    if (!svg_path.empty() &&
        !write_file(svg_path, render_storyboard(scene, result.smoothed))) {
        std::cerr << "error: cannot write " << svg_path << "\n";
        return kExitUsage;
    }

    print_stats(result.stats);
    std::cout << "raw_length: " << result.stats.raw_length << "\n"
              << "smoothed_length: " << result.stats.smoothed_length << "\n";
    for (const auto& [label, count] : grasp_counts(scene, result.smoothed)) {
        std::cout << "grasps[object@" << label << "]: " << count << "\n";
    }
    return kExitOk;
}

int cmd_validate(const std::string& scene_path, const std::string& plan_path) {
    SceneSpec scene;
    ManipulationPlan plan;
    try {
        scene = load_scene_file(scene_path);
        const auto content = read_file(plan_path);
        if (!content) {
            std::cerr << "error: cannot read plan " << plan_path << "\n";
            return kExitUsage;
        }
        plan = load_plan(*content);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const ValidationResult v = validate_plan(scene, plan);
    if (!v.ok) {
        std::cout << "invalid at segment " << v.segment << ": " << v.message
                  << "\n";
        return kExitViolation;
    }
    std::cout << "valid\n";
    return kExitOk;
}

int cmd_bench(const std::string& scene_dir, const std::vector<int>& ks,
              const std::vector<int>& bs, int trials, double time_limit,
              std::uint64_t seed, const std::string& out_csv) {
    std::error_code ec;
    fs::create_directories(scene_dir, ec);
    if (ec) {
        std::cerr << "error: cannot create " << scene_dir << "\n";
        return kExitUsage;
    }

    std::vector<int> sorted_ks = ks, sorted_bs = bs;
    std::sort(sorted_ks.begin(), sorted_ks.end());
    std::sort(sorted_bs.begin(), sorted_bs.end());

    std::ostringstream csv;
    csv << "k,b,trial,seed,success,wall_time,raw_length,smoothed_length,"
           "hypernodes,hyperedges,max_grasps_per_object\n";
    for (int k : sorted_ks) {
        for (int trial = 0; trial < trials; ++trial) {
            const std::uint64_t scene_seed =
                seed * 1000003ULL + std::uint64_t(k) * 1009ULL +
                std::uint64_t(trial);
            const std::string scene_path =
                (fs::path(scene_dir) /
                 ("scene_k" + std::to_string(k) + "_t" +
                  std::to_string(trial) + ".json"))
                    .string();
            SceneSpec scene;
            try {
                if (fs::exists(scene_path)) {
                    scene = load_scene_file(scene_path);
                } else {
                    SceneGenParams params;
                    params.k = k;
                    scene = generate_scene(params, scene_seed);
                    if (!write_file(scene_path, scene.serialize())) {
                        std::cerr << "error: cannot write " << scene_path
                                  << "\n";
                        return kExitUsage;
                    }
                }
            } catch (const SceneError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            RoadmapParams rparams;
            rparams.seed = scene_seed;
            const Roadmap roadmap = make_roadmap(scene, rparams);
            for (int b : sorted_bs) {
                const std::uint64_t trial_seed = scene_seed * 31ULL +
                                                 std::uint64_t(b);
                const SolveResult r =
                    solve(scene, roadmap, b,
                          std::chrono::duration<double>(time_limit),
                          trial_seed);
                const bool ok = r.status == SolveStatus::Solved;
                csv << k << "," << b << "," << trial << "," << trial_seed
                    << "," << (ok ? 1 : 0) << "," << std::fixed
                    << std::setprecision(4) << r.stats.wall_time << ","
                    << r.stats.raw_length << "," << r.stats.smoothed_length
                    << "," << r.stats.hypernodes << "," << r.stats.hyperedges
                    << "," << r.stats.max_grasps << "\n";
                log_info("bench k=" + std::to_string(k) +
                         " b=" + std::to_string(b) +
                         " trial=" + std::to_string(trial) +
                         (ok ? " solved" : " timeout"));
            }
        }
    }
    if (!write_file(out_csv, csv.str())) {
        std::cerr << "error: cannot write " << out_csv << "\n";
        return kExitUsage;
    }
    std::cout << "wrote " << out_csv << "\n";
    return kExitOk;
}

int cmd_render(const std::string& scene_path, const std::string& plan_path,
               const std::string& out_path) {
    SceneSpec scene;
    ManipulationPlan plan;
    try {
        scene = load_scene_file(scene_path);
        const auto content = read_file(plan_path);
        if (!content) {
            std::cerr << "error: cannot read plan " << plan_path << "\n";
            return kExitUsage;
        }
        plan = load_plan(*content);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (!write_file(out_path, render_storyboard(scene, plan))) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar disc rearrangement planner"};
    app.require_subcommand(1);

    std::string scene_path, plan_path, cache_path, out_path, svg_path;
    std::string scene_dir = "bench_scenes";
    RoadmapParams rparams;
    int b = 2;
    double time_limit = 60.0;
    std::uint64_t seed = 1;
    std::vector<int> ks{2, 3, 4};
    std::vector<int> bs{1, 2, 3};
    int trials = 10;

    auto* pre = app.add_subcommand("precompute", "Build a roadmap cache");
    pre->add_option("scene", scene_path, "scene file")->required();
    pre->add_option("--samples", rparams.samples, "samples per mode");
    pre->add_option("--neighbors", rparams.neighbors, "kNN connections");
    pre->add_option("--seed", rparams.seed, "sampling seed");
    pre->add_option("--out", out_path, "cache output path")->required();

    auto* plan = app.add_subcommand("plan", "Plan a rearrangement");
    plan->add_option("scene", scene_path, "scene file")->required();
    plan->add_option("--roadmap", cache_path, "roadmap cache (else built)");
    plan->add_option("--b", b, "blank poses per RPG");
    plan->add_option("--time-limit", time_limit, "seconds");
    plan->add_option("--seed", seed, "planner seed");
    plan->add_option("--out", out_path, "plan output path");
    plan->add_option("--svg", svg_path, "storyboard output path");
    plan->add_option("--samples", rparams.samples, "samples per mode");
    plan->add_option("--neighbors", rparams.neighbors, "kNN connections");

    auto* val = app.add_subcommand("validate", "Replay-check a plan");
    val->add_option("scene", scene_path, "scene file")->required();
    val->add_option("plan", plan_path, "plan file")->required();

    auto* bench = app.add_subcommand("bench", "Seeded benchmark grid");
    bench->add_option("--scenes", scene_dir, "scene directory");
    bench->add_option("--k", ks, "object counts")->delimiter(',');
    bench->add_option("--b", bs, "blank counts")->delimiter(',');
    bench->add_option("--trials", trials, "trials per cell");
    bench->add_option("--time-limit", time_limit, "seconds per trial");
    bench->add_option("--seed", seed, "base seed");
    bench->add_option("--out", out_path, "CSV output path")->required();

    auto* render = app.add_subcommand("render", "Render a plan storyboard");
    render->add_option("scene", scene_path, "scene file")->required();
    render->add_option("plan", plan_path, "plan file")->required();
    render->add_option("--out", out_path, "SVG output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (pre->parsed()) {
            return cmd_precompute(scene_path, rparams, out_path);
        }
        if (plan->parsed()) {
            return cmd_plan(scene_path, cache_path, b, time_limit, seed,
                            out_path, svg_path, rparams);
        }
        if (val->parsed()) {
            return cmd_validate(scene_path, plan_path);
        }
        if (bench->parsed()) {
            return cmd_bench(scene_dir, ks, bs, trials, time_limit, seed,
                             out_path);
        }
        if (render->parsed()) {
            return cmd_render(scene_path, plan_path, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
