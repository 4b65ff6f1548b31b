#pragma once

#include <optional>
#include <string>

#include "topotrack/mixture.hpp"
#include "topotrack/scenegen.hpp"
#include "topotrack/tracker.hpp"

namespace topo {

// Plain-text XYZ: one point per line, three floats separated by whitespace
// or commas; blank lines and '#' comments are ignored. Parse errors name the
// file and line.
PointCloud load_xyz(const std::string& path);
void write_xyz(const std::vector<Vec3>& points, const std::string& path);

// Ordered list of frame files plus optionally declared parameters.
struct SequenceManifest {
    std::vector<std::string> frame_files;  // resolved paths
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<double> epsilon;
    std::string units;
};

SequenceManifest load_manifest(const std::string& path);
void write_manifest(const SequenceManifest& manifest, const std::string& path);

// Accepts either a manifest file or a directory of frame files (taken in
// lexicographic order). Frame indices follow the resulting order.
std::vector<PointCloud> load_sequence(const std::string& path);

struct RunParams {
    TrackerParams tracker;
    double eps_reg = kDefaultEpsReg;

    bool operator==(const RunParams& o) const {
        return tracker.alpha == o.tracker.alpha && tracker.beta == o.tracker.beta &&
               tracker.epsilon == o.tracker.epsilon && tracker.r_max == o.tracker.r_max &&
               tracker.max_points == o.tracker.max_points &&
               tracker.subsample_seed == o.tracker.subsample_seed && eps_reg == o.eps_reg;
    }
};

// Everything a downstream consumer needs to reproduce or continue a run:
// parameters, warnings, per-frame loop descriptors and their mixtures.
struct StatesDocument {
    RunParams params;
    std::vector<std::string> warnings;
    std::vector<TopologicalState> states;
    std::vector<std::vector<LoopMixture>> mixtures;  // aligned with states/loops

    bool operator==(const StatesDocument& o) const {
        return params == o.params && warnings == o.warnings && states == o.states &&
               mixtures == o.mixtures;
    }
};

std::string states_to_string(const StatesDocument& doc);
void write_states(const StatesDocument& doc, const std::string& path);
StatesDocument read_states(const std::string& path);

// Scene export: frames as XYZ files plus manifest.json and truth.json.
void write_scene(const Scene& scene, const std::string& directory);

}  // namespace topo
