#include "topotrack/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace topo {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open for writing: " + path);
    out << content;
    if (!out.good()) throw InputError("write failed: " + path);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json parse_json_file(const std::string& path) {
    ordered_json j = ordered_json::parse(read_text(path), nullptr, false);
    if (j.is_discarded()) throw InputError("malformed JSON: " + path);
    return j;
}

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }
Vec3 vec3_from(const ordered_json& j) {
    if (!j.is_array() || j.size() != 3) throw InputError("expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json triangle_json(const TriangleInfo& t) {
    ordered_json j;
    j["vertices"] = t.vertices;
    j["points"] = ordered_json::array({vec3_json(t.points[0]), vec3_json(t.points[1]), vec3_json(t.points[2])});
    j["value"] = t.value;
    j["paired"] = t.paired;
    return j;
}
TriangleInfo triangle_from(const ordered_json& j) {
    TriangleInfo t;
    t.vertices = j.at("vertices").get<std::array<int, 3>>();
    for (int i = 0; i < 3; ++i) t.points[i] = vec3_from(j.at("points").at(i));
    t.value = j.at("value").get<double>();
    t.paired = j.at("paired").get<bool>();
    return t;
}

ordered_json loop_json(const LoopDescriptor& d, const LoopMixture& mix) {
    ordered_json j;
    j["id"] = d.id;
    j["birth"] = d.birth;
    j["death"] = d.death;
    j["lifetime"] = d.lifetime;
    ordered_json edge;
    edge["vertices"] = d.killer_edge.vertices;
    edge["points"] = ordered_json::array({vec3_json(d.killer_edge.points[0]), vec3_json(d.killer_edge.points[1])});
    edge["value"] = d.killer_edge.value;
    j["killer_edge"] = std::move(edge);
    j["killer_triangles"] = ordered_json::array();
    for (const TriangleInfo& t : d.killer_triangles) j["killer_triangles"].push_back(triangle_json(t));
    j["neighbor_triangles"] = ordered_json::array();
    for (const TriangleInfo& t : d.neighbor_triangles) j["neighbor_triangles"].push_back(triangle_json(t));
    if (d.hausdorff_prev) {
        j["hausdorff_prev"] = *d.hausdorff_prev;
    } else {
        j["hausdorff_prev"] = nullptr;
    }
    ordered_json m;
    m["weights"] = mix.weights;
    m["raw_weights"] = mix.raw_weights;
    m["means"] = ordered_json::array();
    for (const Vec3& mu : mix.means) m["means"].push_back(vec3_json(mu));
    m["covariances"] = ordered_json::array();
    for (const Mat3& cov : mix.covariances) m["covariances"].push_back(cov.m);
    m["component_source"] = ordered_json::array();
    for (auto s : mix.component_source) {
        m["component_source"].push_back(s == LoopMixture::Source::killer ? "killer" : "neighbor");
    }
    j["mixture"] = std::move(m);
    return j;
}

std::pair<LoopDescriptor, LoopMixture> loop_from(const ordered_json& j) {
    LoopDescriptor d;
    d.id = j.at("id").get<int64_t>();
    d.birth = j.at("birth").get<double>();
    d.death = j.at("death").get<double>();
    d.lifetime = j.at("lifetime").get<double>();
    const auto& edge = j.at("killer_edge");
    d.killer_edge.vertices = edge.at("vertices").get<std::array<int, 2>>();
    d.killer_edge.points = {vec3_from(edge.at("points").at(0)), vec3_from(edge.at("points").at(1))};
    d.killer_edge.value = edge.at("value").get<double>();
    for (const auto& t : j.at("killer_triangles")) d.killer_triangles.push_back(triangle_from(t));
    for (const auto& t : j.at("neighbor_triangles")) d.neighbor_triangles.push_back(triangle_from(t));
    if (!j.at("hausdorff_prev").is_null()) d.hausdorff_prev = j.at("hausdorff_prev").get<double>();

    LoopMixture mix;
    mix.loop_id = d.id;
    const auto& m = j.at("mixture");
    mix.weights = m.at("weights").get<std::vector<double>>();
    mix.raw_weights = m.at("raw_weights").get<std::vector<double>>();
    for (const auto& mu : m.at("means")) mix.means.push_back(vec3_from(mu));
    for (const auto& cov : m.at("covariances")) {
        Mat3 c;
        c.m = cov.get<std::array<double, 9>>();
        mix.covariances.push_back(c);
    }
    for (const auto& s : m.at("component_source")) {
        mix.component_source.push_back(s.get<std::string>() == "killer" ? LoopMixture::Source::killer
                                                                        : LoopMixture::Source::neighbor);
    }
    return {std::move(d), std::move(mix)};
}

}  // namespace

PointCloud load_xyz(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open: " + path);
    PointCloud cloud;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, y, z;
        if (!(ss >> x)) continue;  // blank or comment-only line
        if (!(ss >> y >> z)) {
            throw InputError(path + ":" + std::to_string(line_no) + ": expected three coordinates");
        }
        double extra;
        if (ss >> extra) {
            throw InputError(path + ":" + std::to_string(line_no) + ": expected exactly three coordinates");
        }
        cloud.points.push_back({x, y, z});
    }
    if (cloud.empty()) throw InputError(path + ": no points");
    validate_cloud(cloud);
    return cloud;
}

void write_xyz(const std::vector<Vec3>& points, const std::string& path) {
    std::string out;
    out.reserve(points.size() * 64);
    for (const Vec3& p : points) {
        out += format_double(p.x);
        out += ' ';
        out += format_double(p.y);
        out += ' ';
        out += format_double(p.z);
        out += '\n';
    }
    write_text(path, out);
}

SequenceManifest load_manifest(const std::string& path) {
    const ordered_json j = parse_json_file(path);
    if (!j.contains("frames") || !j.at("frames").is_array()) {
        throw InputError(path + ": manifest must list \"frames\"");
    }
    SequenceManifest m;
    const fs::path base = fs::path(path).parent_path();
    for (const auto& f : j.at("frames")) {
        fs::path frame = f.get<std::string>();
        if (frame.is_relative()) frame = base / frame;
        m.frame_files.push_back(frame.string());
    }
    if (j.contains("alpha")) m.alpha = j.at("alpha").get<double>();
    if (j.contains("beta")) m.beta = j.at("beta").get<double>();
    if (j.contains("epsilon")) m.epsilon = j.at("epsilon").get<double>();
    if (j.contains("units")) m.units = j.at("units").get<std::string>();
    if (m.frame_files.empty()) throw InputError(path + ": manifest lists no frames");
    return m;
}

void write_manifest(const SequenceManifest& manifest, const std::string& path) {
    ordered_json j;
    j["frames"] = ordered_json::array();
    const fs::path base = fs::path(path).parent_path();
    for (const std::string& f : manifest.frame_files) {
        j["frames"].push_back(fs::path(f).lexically_proximate(base).string());
    }
    if (manifest.alpha) j["alpha"] = *manifest.alpha;
    if (manifest.beta) j["beta"] = *manifest.beta;
    if (manifest.epsilon) j["epsilon"] = *manifest.epsilon;
    if (!manifest.units.empty()) j["units"] = manifest.units;
    write_text(path, j.dump(2) + "\n");
}

std::vector<PointCloud> load_sequence(const std::string& path) {
    std::vector<std::string> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            const std::string ext = entry.path().extension().string();
            if (ext == ".xyz" || ext == ".txt") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw InputError(path + ": no frame files (*.xyz, *.txt)");
    } else if (fs::is_regular_file(path)) {
        files = load_manifest(path).frame_files;
    } else {
        throw InputError(path + ": not a file or directory");
    }

    std::vector<PointCloud> frames;
    frames.reserve(files.size());
    for (size_t i = 0; i < files.size(); ++i) {
        PointCloud cloud = load_xyz(files[i]);
        cloud.frame_index = static_cast<int>(i);
        frames.push_back(std::move(cloud));
    }
    return frames;
}

std::string states_to_string(const StatesDocument& doc) {
    ordered_json j;
    j["format"] = "topotrack-states";
    j["version"] = 1;
    ordered_json params;
    params["alpha"] = doc.params.tracker.alpha;
    params["beta"] = doc.params.tracker.beta;
    params["epsilon"] = doc.params.tracker.epsilon;
    if (doc.params.tracker.r_max) {
        params["r_max"] = *doc.params.tracker.r_max;
    } else {
        params["r_max"] = nullptr;
    }
    params["max_points"] = doc.params.tracker.max_points;
    params["subsample_seed"] = doc.params.tracker.subsample_seed;
    params["eps_reg"] = doc.params.eps_reg;
    j["parameters"] = std::move(params);
    j["warnings"] = doc.warnings;
    j["frames"] = ordered_json::array();
    for (size_t t = 0; t < doc.states.size(); ++t) {
        const TopologicalState& state = doc.states[t];
        ordered_json frame;
        frame["frame_index"] = state.frame_index;
        frame["loops"] = ordered_json::array();
        for (size_t l = 0; l < state.loops.size(); ++l) {
            frame["loops"].push_back(loop_json(state.loops[l], doc.mixtures.at(t).at(l)));
        }
        j["frames"].push_back(std::move(frame));
    }
    return j.dump(2) + "\n";
}

void write_states(const StatesDocument& doc, const std::string& path) {
    write_text(path, states_to_string(doc));
}

StatesDocument read_states(const std::string& path) {
    const ordered_json j = parse_json_file(path);
    if (!j.contains("format") || j.at("format") != "topotrack-states") {
        throw InputError(path + ": not a topotrack states document");
    }
    StatesDocument doc;
    const auto& params = j.at("parameters");
    doc.params.tracker.alpha = params.at("alpha").get<double>();
    doc.params.tracker.beta = params.at("beta").get<double>();
    doc.params.tracker.epsilon = params.at("epsilon").get<double>();
    if (!params.at("r_max").is_null()) doc.params.tracker.r_max = params.at("r_max").get<double>();
    doc.params.tracker.max_points = params.at("max_points").get<int>();
    doc.params.tracker.subsample_seed = params.at("subsample_seed").get<uint64_t>();
    doc.params.eps_reg = params.at("eps_reg").get<double>();
    doc.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& frame : j.at("frames")) {
        TopologicalState state;
        state.frame_index = frame.at("frame_index").get<int>();
        std::vector<LoopMixture> frame_mixtures;
        for (const auto& loop : frame.at("loops")) {
            auto [d, mix] = loop_from(loop);
            state.loops.push_back(std::move(d));
            frame_mixtures.push_back(std::move(mix));
        }
        doc.states.push_back(std::move(state));
        doc.mixtures.push_back(std::move(frame_mixtures));
    }
    return doc;
}

void write_scene(const Scene& scene, const std::string& directory) {
    fs::create_directories(directory);
    SequenceManifest manifest;
    for (size_t t = 0; t < scene.frames.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05zu.xyz", t);
        const std::string path = (fs::path(directory) / name).string();
        write_xyz(scene.frames[t].points, path);
        manifest.frame_files.push_back(path);
    }
    const TrackerParams suggested = suggested_params(scene.report);
    manifest.alpha = suggested.alpha;
    manifest.beta = suggested.beta;
    manifest.epsilon = suggested.epsilon;
    manifest.units = "same units as the generator radius";
    write_manifest(manifest, (fs::path(directory) / "manifest.json").string());

    ordered_json truth;
    truth["kind"] = scene.spec.kind == SceneKind::annulus          ? "annulus"
                    : scene.spec.kind == SceneKind::two_annulus    ? "two-annulus"
                                                                   : "breathing-annulus";
    truth["seed"] = scene.spec.seed;
    truth["covering_radius"] = scene.report.covering_radius;
    truth["max_covering_radius"] = scene.report.max_covering_radius;
    truth["max_step_displacement"] = scene.report.max_step_displacement;
    truth["killer_spread"] = scene.report.killer_spread;
    truth["frames"] = ordered_json::array();
    for (const auto& frame : scene.truth.frames) {
        ordered_json loops = ordered_json::array();
        for (const LoopTruth& lt : frame) {
            ordered_json l;
            l["center"] = vec3_json(lt.center);
            l["normal"] = vec3_json(lt.normal);
            l["radius"] = lt.radius;
            l["thickness"] = lt.thickness;
            loops.push_back(std::move(l));
        }
        truth["frames"].push_back(std::move(loops));
    }
    write_text((fs::path(directory) / "truth.json").string(), truth.dump(2) + "\n");
}

}  // namespace topo
