#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "topotrack/io.hpp"
#include "topotrack/rng.hpp"

using namespace topo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("topotrack_test_" + std::to_string(Rng(std::random_device{}()).next()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

StatesDocument make_document(uint64_t seed) {
    Rng rng(seed);
    StatesDocument doc;
    doc.params.tracker.alpha = rng.uniform01();
    doc.params.tracker.beta = rng.uniform01();
    doc.params.tracker.epsilon = 0.4 * doc.params.tracker.alpha;
    if (rng.uniform01() < 0.5) doc.params.tracker.r_max = 1.0 + rng.uniform01();
    doc.params.tracker.max_points = 500 + static_cast<int>(rng.below(500));
    doc.params.tracker.subsample_seed = rng.next();
    doc.warnings = {"synthetic warning"};

    for (int t = 0; t < 3; ++t) {
        TopologicalState state;
        state.frame_index = t;
        std::vector<LoopMixture> frame_mixtures;
        const int loops = static_cast<int>(rng.below(3));
        for (int l = 0; l < loops; ++l) {
            LoopDescriptor d;
            d.id = t * 10 + l;
            d.birth = rng.uniform01();
            d.death = d.birth + rng.uniform01();
            d.lifetime = d.death - d.birth;
            d.killer_edge.vertices = {l, l + 3};
            d.killer_edge.points = {rng.normal_vec3(), rng.normal_vec3()};
            d.killer_edge.value = d.death;
            TriangleInfo tri;
            tri.vertices = {l, l + 3, l + 5};
            tri.points = {rng.normal_vec3(), rng.normal_vec3(), rng.normal_vec3()};
            tri.value = d.death;
            tri.paired = true;
            d.killer_triangles.push_back(tri);
            if (rng.uniform01() < 0.5) {
                tri.vertices = {l, l + 3, l + 7};
                tri.value = 0.9 * d.death;
                tri.paired = false;
                d.neighbor_triangles.push_back(tri);
            }
            if (t > 0) d.hausdorff_prev = rng.uniform01();
            state.loops.push_back(d);
            frame_mixtures.push_back(loop_mixture(state.loops.back()));
        }
        doc.states.push_back(std::move(state));
        doc.mixtures.push_back(std::move(frame_mixtures));
    }
    return doc;
}

}  // namespace

TEST_CASE("xyz frames load from a directory") {
    TempDir dir;
    write_file(dir.file("frame_00000.xyz"), "0 0 0\n1 0 0\n");
    const auto frames = load_sequence(dir.path.string());
    REQUIRE(frames.size() == 1);
    REQUIRE(frames[0].size() == 2);
    CHECK(frames[0].points[1] == Vec3{1, 0, 0});
}

TEST_CASE("xyz parser accepts commas and comments") {
    TempDir dir;
    write_file(dir.file("a.xyz"), "# header\n0, 0, 0\n\n1.5, 2.5, -3\n  # trailing comment\n");
    const PointCloud cloud = load_xyz(dir.file("a.xyz"));
    REQUIRE(cloud.size() == 2);
    CHECK(cloud.points[1] == Vec3{1.5, 2.5, -3});
}

TEST_CASE("xyz parse errors name the line") {
    TempDir dir;
    write_file(dir.file("bad.xyz"), "0 0\n");
    try {
        load_xyz(dir.file("bad.xyz"));
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find(":1:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_xyz(dir.file("missing.xyz")), InputError);
}

TEST_CASE("manifest order wins over lexicographic order") {
    TempDir dir;
    write_file(dir.file("a.xyz"), "0 0 0\n");
    write_file(dir.file("b.xyz"), "1 1 1\n");
    write_file(dir.file("seq.json"), R"({"frames": ["b.xyz", "a.xyz"]})");
    const auto frames = load_sequence(dir.file("seq.json"));
    REQUIRE(frames.size() == 2);
    CHECK(frames[0].points[0] == Vec3{1, 1, 1});
    CHECK(frames[1].points[0] == Vec3{0, 0, 0});
}

TEST_CASE("manifest round trip keeps declared parameters") {
    TempDir dir;
    write_file(dir.file("a.xyz"), "0 0 0\n");
    SequenceManifest m;
    m.frame_files = {dir.file("a.xyz")};
    m.alpha = 0.25;
    m.epsilon = 0.1;
    m.units = "meters";
    write_manifest(m, dir.file("seq.json"));
    const SequenceManifest back = load_manifest(dir.file("seq.json"));
    CHECK(back.alpha == 0.25);
    CHECK_FALSE(back.beta.has_value());
    CHECK(back.epsilon == 0.1);
    CHECK(back.units == "meters");
    REQUIRE(back.frame_files.size() == 1);
    CHECK(fs::equivalent(back.frame_files[0], dir.file("a.xyz")));
}

TEST_CASE("empty sequences are rejected") {
    TempDir dir;
    CHECK_THROWS_AS(load_sequence(dir.path.string()), InputError);
    write_file(dir.file("seq.json"), R"({"frames": []})");
    CHECK_THROWS_AS(load_sequence(dir.file("seq.json")), InputError);
}

TEST_CASE("states documents round-trip exactly") {
    TempDir dir;
    for (uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        const StatesDocument doc = make_document(seed);
        const std::string path = dir.file("states.json");
        write_states(doc, path);
        const StatesDocument back = read_states(path);
        CHECK(back == doc);
    }
}

TEST_CASE("frames without loops still serialize a loops field") {
    StatesDocument doc;
    doc.params.tracker.alpha = 0.1;
    doc.states.push_back(TopologicalState{0, {}});
    doc.mixtures.push_back({});
    const std::string text = states_to_string(doc);
    CHECK(text.find("\"loops\": []") != std::string::npos);
}

TEST_CASE("serialization is deterministic") {
    const StatesDocument doc = make_document(77);
    CHECK(states_to_string(doc) == states_to_string(doc));
}

TEST_CASE("tracked square sequence serializes its exact birth and death") {
    std::vector<PointCloud> frames;
    for (int t = 0; t < 3; ++t) {
        frames.push_back({{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, t});
    }
    TrackerParams params;
    params.alpha = 0.1;
    params.beta = 0.1;
    params.epsilon = 0.04;
    const TrackResult result = track_sequence(frames, params);

    StatesDocument doc;
    doc.params.tracker = params;
    doc.states = result.states;
    for (const TopologicalState& state : result.states) {
        std::vector<LoopMixture> mixes;
        for (const LoopDescriptor& loop : state.loops) mixes.push_back(loop_mixture(loop));
        doc.mixtures.push_back(std::move(mixes));
    }
    const std::string text = states_to_string(doc);
    CHECK(text.find("\"birth\": 0.5") != std::string::npos);
    CHECK(text.find("\"death\": 0.7071067811865476") != std::string::npos);
}

TEST_CASE("scene export produces loadable frames and manifest") {
    TempDir dir;
    SceneSpec spec;
    spec.points_per_frame = 32;
    spec.frames = 3;
    spec.seed = 4;
    const Scene scene = gen_scene(spec);
    const std::string out = (dir.path / "scene").string();
    write_scene(scene, out);

    const auto via_dir = load_sequence(out);
    REQUIRE(via_dir.size() == 3);
    CHECK(via_dir[0].points.size() == 32);
    // frames written with full precision reload exactly
    for (int t = 0; t < 3; ++t) CHECK(via_dir[t].points == scene.frames[t].points);

    const auto via_manifest = load_sequence((fs::path(out) / "manifest.json").string());
    REQUIRE(via_manifest.size() == 3);
    CHECK(via_manifest[1].points == scene.frames[1].points);
}
