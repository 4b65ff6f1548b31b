#pragma once

#include <optional>

#include "topotrack/persistence.hpp"

namespace topo {

// Assumption parameters: alpha bounds the sampling gap, beta the spread of
// near-death edges around a killer edge, epsilon the per-step motion.
struct TrackerParams {
    double alpha = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;
    std::optional<double> r_max;  // empty: use the enclosing radius per frame
    int max_points = 768;         // 0 disables subsampling
    uint64_t subsample_seed = 0;

    // Throws ParamError on invalid values; returns warnings for soft
    // violations (epsilon >= alpha/2 weakens the tracking guarantees but is
    // not fatal).
    std::vector<std::string> validate() const;

    double birth_death_gate() const { return 2.0 * alpha + epsilon; }
    double distance_gate() const { return 2.0 * alpha + beta + epsilon; }
};

struct TopologicalState {
    int frame_index = 0;
    std::vector<LoopDescriptor> loops;

    bool operator==(const TopologicalState& o) const {
        return frame_index == o.frame_index && loops == o.loops;
    }
};

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();
// Sentinel used while solving; assignments touching it are stripped.
inline constexpr double kAssignSentinel = 1e9;

// Rows are current-frame loops, columns previous-frame loops. An entry is
// finite exactly when all three gates pass.
struct CostMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> entries;  // row-major

    CostMatrix() = default;
    CostMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<size_t>(r) * c, kForbidden) {}
    double& at(int r, int c) { return entries[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return entries[static_cast<size_t>(r) * cols + c]; }
};

CostMatrix gated_cost_matrix(const std::vector<LoopDescriptor>& curr,
                             const std::vector<LoopDescriptor>& prev, const TrackerParams& params);

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (row, col), sorted by row
    std::vector<double> pair_costs;          // aligned with pairs
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;
    double total_cost = 0.0;
};

// Minimum-total-cost assignment over the finite entries (Hungarian method
// with potentials on the sentinel-padded square matrix). Deterministic for
// a fixed input.
Assignment assign(const CostMatrix& cost);

// Matched loops inherit the previous IDs and record the matching distance;
// unmatched loops draw fresh IDs from next_id in list order. IDs are never
// reused.
TopologicalState propagate_ids(const Assignment& matching, const TopologicalState& prev,
                               std::vector<LoopDescriptor> curr, int frame_index, int64_t& next_id);

struct TrackResult {
    std::vector<TopologicalState> states;
    std::vector<std::string> warnings;
};

// Full per-sequence pipeline: subsample, persistence, significance filter,
// descriptor extraction, gated matching against the previous frame.
TrackResult track_sequence(const std::vector<PointCloud>& frames, const TrackerParams& params);

}  // namespace topo
