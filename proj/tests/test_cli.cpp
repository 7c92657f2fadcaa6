#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <sys/wait.h>

#include "rearr/plan.hpp"

namespace fs = std::filesystem;
using namespace rearr;
using json = nlohmann::json;

namespace {

const std::string kBin = REARRANGE_BIN;
const fs::path kWork = fs::temp_directory_path() / "rearrange_cli_test";

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

int run(const std::string& args) {
    const std::string cmd = kBin + " " + args + " >" +
                            (kWork / "stdout.txt").string() + " 2>" +
                            (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string last_stdout() {
    std::ifstream in(kWork / "stdout.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

struct Workspace {
    Workspace() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        n += (c == '\n');
    }
    return n;
}

}  // namespace

TEST_CASE("precompute writes a loadable cache") {
    Workspace ws;
    const fs::path cache = kWork / "shelf.roadmap.json";
    CHECK(run("precompute " + fixture("shelf.json") + " --out " +
              cache.string()) == 0);
    CHECK(fs::exists(cache));
    CHECK(last_stdout().find("roadmap:") != std::string::npos);

    // The cache feeds plan directly.
    CHECK(run("plan " + fixture("shelf.json") + " --roadmap " +
              cache.string() + " --out " + (kWork / "p.json").string()) == 0);
    CHECK(fs::exists(kWork / "p.json"));
}

TEST_CASE("usage and IO failures exit 2") {
    Workspace ws;
    CHECK(run("precompute /nonexistent/scene.json --out " +
              (kWork / "c.json").string()) == 2);
    CHECK(run("precompute " + fixture("shelf.json") +
              " --out /nonexistent/dir/c.json") == 2);
    CHECK(run("plan /nonexistent/scene.json") == 2);
    CHECK(run("validate " + fixture("shelf.json") + " /nonexistent/plan.json") ==
          2);
    CHECK(run("validate " + fixture("shelf.json")) == 2);  // missing argument
    CHECK(run("bogus-subcommand") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("planning the corridor needs a double grasp") {
    Workspace ws;
    const fs::path plan = kWork / "plan.json";
    CHECK(run("plan " + fixture("nonmonotone.json") + " --out " +
              plan.string()) == 0);
    const std::string out = last_stdout();
    CHECK(out.find("smoothed_length:") != std::string::npos);
    CHECK(out.find("grasps[object@") != std::string::npos);

    CHECK(run("validate " + fixture("nonmonotone.json") + " " +
              plan.string()) == 0);
    CHECK(last_stdout().find("valid") != std::string::npos);

    // Some object must be grasped at least twice: the problem is
    // non-monotone by construction.
    const SceneSpec scene = load_scene_file(fixture("nonmonotone.json"));
    const ManipulationPlan p = load_plan(slurp(plan));
    CHECK(max_grasps_per_object(scene, p) >= 2);
}

TEST_CASE("trivial query produces an empty valid plan") {
    Workspace ws;
    json j = json::parse(slurp(fixture("nonmonotone.json")));
    j["goal"] = j["start"];
    const fs::path scene = kWork / "trivial.json";
    write(scene, j.dump());
    const fs::path plan = kWork / "plan.json";
    CHECK(run("plan " + scene.string() + " --out " + plan.string()) == 0);
    const ManipulationPlan p = load_plan(slurp(plan));
    CHECK(p.empty());
    CHECK(run("validate " + scene.string() + " " + plan.string()) == 0);
}

TEST_CASE("overlapping start arrangement exits 4") {
    Workspace ws;
    json j = json::parse(slurp(fixture("nonmonotone.json")));
    // A pose overlapping slot 0; both occupied makes the start infeasible.
    j["poses"].push_back({{"id", 5}, {"x", 0.54}, {"y", 0.88}, {"theta", 0.0}});
    j["start"] = {0, 5};
    const fs::path scene = kWork / "infeasible.json";
    write(scene, j.dump());
    CHECK(run("plan " + scene.string()) == 4);
}

TEST_CASE("sealed goal pose exits 3 before the deadline") {
    Workspace ws;
    json j = json::parse(slurp(fixture("nonmonotone.json")));
    // Box in slot 2's grasp footprint; its placement stays legal.
    const double x = 0.51, y = 0.62, d = 0.052, t = 0.004;
    for (auto [dx, dy] : {std::pair{d, 0.0}, {-d, 0.0}, {0.0, d}, {0.0, -d}}) {
        j["obstacles"].push_back({{x + dx - t, y + dy - t},
                                  {x + dx + t, y + dy - t},
                                  {x + dx + t, y + dy + t},
                                  {x + dx - t, y + dy + t}});
    }
    const fs::path scene = kWork / "sealed.json";
    write(scene, j.dump());
    CHECK(run("plan " + scene.string() + " --time-limit 5") == 3);
    CHECK(last_stdout().find("timeout") != std::string::npos);
}

TEST_CASE("validate flags a corrupted plan") {
    Workspace ws;
    const fs::path plan = kWork / "plan.json";
    REQUIRE(run("plan " + fixture("nonmonotone.json") + " --out " +
                plan.string()) == 0);
    const SceneSpec scene = load_scene_file(fixture("nonmonotone.json"));
    ManipulationPlan p = load_plan(slurp(plan));
    REQUIRE_FALSE(p.empty());

    SUBCASE("teleporting waypoint") {
        p.segments[1].waypoints.back().x += 0.2;
        write(plan, save_plan(p));
        CHECK(run("validate " + fixture("nonmonotone.json") + " " +
                  plan.string()) == 1);
        CHECK(last_stdout().find("invalid at segment") != std::string::npos);
    }
    SUBCASE("plan stops short of the goal") {
        p.segments.resize(p.segments.size() - 3);
        write(plan, save_plan(p));
        CHECK(run("validate " + fixture("nonmonotone.json") + " " +
                  plan.string()) == 1);
    }
    SUBCASE("unparseable plan file") {
        write(plan, slurp(plan).substr(0, 40));
        CHECK(run("validate " + fixture("nonmonotone.json") + " " +
                  plan.string()) == 2);
    }
}

TEST_CASE("planning is deterministic for a fixed seed") {
    Workspace ws;
    const fs::path a = kWork / "a.json", b = kWork / "b.json";
    REQUIRE(run("plan " + fixture("shelf.json") + " --seed 9 --out " +
                a.string()) == 0);
    REQUIRE(run("plan " + fixture("shelf.json") + " --seed 9 --out " +
                b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("bench emits the sorted CSV grid and reuses scene files") {
    Workspace ws;
    const fs::path scenes = kWork / "scenes";
    const fs::path csv = kWork / "bench.csv";
    CHECK(run("bench --scenes " + scenes.string() +
              " --k 3,2 --b 2,1 --trials 2 --time-limit 30 --out " +
              csv.string()) == 0);
    const std::string content = slurp(csv);
    CHECK(count_lines(content) == 1 + 2 * 2 * 2);
    std::istringstream in(content);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "k,b,trial,seed,success,wall_time,raw_length,smoothed_length,"
          "hypernodes,hyperedges,max_grasps_per_object");
    // Rows arrive sorted by (k, trial nested, b) despite the unsorted flags.
    std::vector<std::pair<int, int>> kb;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string kf, bf;
        std::getline(row, kf, ',');
        std::getline(row, bf, ',');
        kb.push_back({std::stoi(kf), std::stoi(bf)});
    }
    for (std::size_t i = 1; i < kb.size(); ++i) {
        CHECK(kb[i - 1].first <= kb[i].first);
    }
    CHECK(fs::exists(scenes / "scene_k2_t0.json"));
    CHECK(fs::exists(scenes / "scene_k3_t1.json"));

    // A second run reuses the stored scenes and reproduces the data rows.
    const fs::path csv2 = kWork / "bench2.csv";
    CHECK(run("bench --scenes " + scenes.string() +
              " --k 3,2 --b 2,1 --trials 2 --time-limit 30 --out " +
              csv2.string()) == 0);
    auto strip_times = [](const std::string& text) {
        // wall_time varies run to run; blank out column six.
        std::istringstream ss(text);
        std::string out, ln;
        while (std::getline(ss, ln)) {
            std::vector<std::string> cols;
            std::istringstream row(ln);
            std::string c;
            while (std::getline(row, c, ',')) {
                cols.push_back(c);
            }
            if (cols.size() > 5) {
                cols[5] = "-";
            }
            for (std::size_t i = 0; i < cols.size(); ++i) {
                out += (i ? "," : "") + cols[i];
            }
            out += "\n";
        }
        return out;
    };
    CHECK(strip_times(slurp(csv)) == strip_times(slurp(csv2)));
}

TEST_CASE("render writes an SVG storyboard") {
    Workspace ws;
    const fs::path plan = kWork / "plan.json";
    const fs::path svg = kWork / "plan.svg";
    REQUIRE(run("plan " + fixture("shelf.json") + " --out " + plan.string() +
                " --svg " + svg.string()) == 0);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);

    const fs::path svg2 = kWork / "plan2.svg";
    CHECK(run("render " + fixture("shelf.json") + " " + plan.string() +
              " --out " + svg2.string()) == 0);
    CHECK(slurp(svg2).rfind("<svg", 0) == 0);
}
