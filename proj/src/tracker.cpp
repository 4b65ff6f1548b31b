#include "topotrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace topo {

std::vector<std::string> TrackerParams::validate() const {
    if (!(alpha > 0.0)) throw ParamError("tracker: alpha must be > 0");
    if (beta < 0.0) throw ParamError("tracker: beta must be >= 0");
    if (epsilon < 0.0) throw ParamError("tracker: epsilon must be >= 0");
    if (r_max && !(*r_max > 0.0)) throw ParamError("tracker: fixed r_max must be > 0");
    if (max_points < 0) throw ParamError("tracker: max_points must be >= 0");
    std::vector<std::string> warnings;
    if (epsilon >= 0.5 * alpha) {
        warnings.push_back("epsilon >= alpha/2: per-step motion may exceed what the sampling "
                           "density supports; tracking continuity is not guaranteed");
    }
    return warnings;
}

CostMatrix gated_cost_matrix(const std::vector<LoopDescriptor>& curr,
                             const std::vector<LoopDescriptor>& prev, const TrackerParams& params) {
    CostMatrix m(static_cast<int>(curr.size()), static_cast<int>(prev.size()));
    const double value_gate = params.birth_death_gate();
    const double dist_gate = params.distance_gate();
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            if (std::abs(curr[r].birth - prev[c].birth) >= value_gate) continue;
            if (std::abs(curr[r].death - prev[c].death) >= value_gate) continue;
            const double d = hausdorff(curr[r].killer_edge.points, prev[c].killer_edge.points);
            if (d >= dist_gate) continue;
            m.at(r, c) = d;
        }
    }
    return m;
}

Assignment assign(const CostMatrix& cost) {
    Assignment out;
    const int rows = cost.rows, cols = cost.cols;
    const int n = std::max(rows, cols);
    if (n == 0) return out;

    auto padded = [&](int i, int j) -> double {
        if (i < rows && j < cols) {
            const double v = cost.at(i, j);
            return std::isfinite(v) ? v : kAssignSentinel;
        }
        return kAssignSentinel;
    };

    // shortest augmenting paths with potentials, 1-based
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = padded(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    for (int j = 1; j <= n; ++j) {
        const int i = p[j];
        if (i == 0) continue;
        const int r = i - 1, c = j - 1;
        if (r >= rows || c >= cols) continue;
        const double d = cost.at(r, c);
        if (!std::isfinite(d)) continue;  // sentinel assignment, not a real match
        out.pairs.emplace_back(r, c);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    std::vector<char> row_used(rows, 0), col_used(cols, 0);
    for (const auto& [r, c] : out.pairs) {
        out.pair_costs.push_back(cost.at(r, c));
        out.total_cost += cost.at(r, c);
        row_used[r] = 1;
        col_used[c] = 1;
    }
    for (int r = 0; r < rows; ++r) {
        if (!row_used[r]) out.unmatched_rows.push_back(r);
    }
    for (int c = 0; c < cols; ++c) {
        if (!col_used[c]) out.unmatched_cols.push_back(c);
    }
    return out;
}

TopologicalState propagate_ids(const Assignment& matching, const TopologicalState& prev,
                               std::vector<LoopDescriptor> curr, int frame_index, int64_t& next_id) {
    std::vector<char> matched(curr.size(), 0);
    std::set<int64_t> inherited;
    for (size_t k = 0; k < matching.pairs.size(); ++k) {
        const auto [r, c] = matching.pairs[k];
        if (r < 0 || r >= static_cast<int>(curr.size()) || c < 0 ||
            c >= static_cast<int>(prev.loops.size())) {
            throw InvariantError("propagate_ids: matching index out of range");
        }
        const int64_t id = prev.loops[c].id;
        if (!inherited.insert(id).second) {
            throw InvariantError("propagate_ids: duplicate inherited id " + std::to_string(id));
        }
        curr[r].id = id;
        curr[r].hausdorff_prev = matching.pair_costs[k];
        matched[r] = 1;
    }
    for (size_t r = 0; r < curr.size(); ++r) {
        if (!matched[r]) {
            curr[r].id = next_id++;
            curr[r].hausdorff_prev.reset();
        }
    }
    return TopologicalState{frame_index, std::move(curr)};
}

TrackResult track_sequence(const std::vector<PointCloud>& frames, const TrackerParams& params) {
    if (frames.empty()) throw InputError("track_sequence: no frames");
    TrackResult result;
    result.warnings = params.validate();

    int64_t next_id = 0;
    TopologicalState prev;
    bool have_prev = false;

    for (size_t t = 0; t < frames.size(); ++t) {
        try {
            PointCloud cloud = frames[t];
            validate_cloud(cloud);
            if (params.max_points > 0 && cloud.size() > params.max_points) {
                cloud = farthest_point_subsample(cloud, params.max_points, params.subsample_seed);
            }
            const DistanceMatrix dist(cloud);
            const double r_max = params.r_max ? *params.r_max : enclosing_radius(dist);
            const PersistenceDiagram1 diagram = compute_ph1(dist, r_max, cloud.frame_index);
            const PersistenceDiagram1 significant = filter_significant(diagram, params.alpha);

            std::vector<LoopDescriptor> descriptors;
            descriptors.reserve(significant.features.size());
            for (const LoopFeature& f : significant.features) {
                descriptors.push_back(extract_loop_descriptor(f, dist, cloud));
            }
            std::sort(descriptors.begin(), descriptors.end(), descriptor_canonical_less);

            Assignment matching;
            if (have_prev) {
                matching = assign(gated_cost_matrix(descriptors, prev.loops, params));
            }
            TopologicalState state =
                propagate_ids(matching, prev, std::move(descriptors), cloud.frame_index, next_id);
            prev = state;
            have_prev = true;
            result.states.push_back(std::move(state));
        } catch (const InputError& e) {
            throw InputError("frame " + std::to_string(t) + ": " + e.what());
        } catch (const ParamError& e) {
            throw ParamError("frame " + std::to_string(t) + ": " + e.what());
        } catch (const InvariantError& e) {
            throw InvariantError("frame " + std::to_string(t) + ": " + e.what());
        }
    }
    return result;
}

}  // namespace topo
