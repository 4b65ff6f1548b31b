#include "topotrack/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

namespace topo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PersistenceDiagram1 naive_reduction_ph1(const PointCloud& cloud, double r_max) {
    validate_cloud(cloud);
    if (cloud.size() > 64) {
        throw ParamError("naive_reduction_ph1: guarded to 64 points, got " +
                         std::to_string(cloud.size()));
    }
    const Filtration filtration = build_filtration(cloud, r_max);
    const auto& simplices = filtration.simplices;
    const int count = static_cast<int>(simplices.size());

    std::map<std::pair<int, std::array<int, 3>>, int> index_of;
    for (int i = 0; i < count; ++i) index_of[{simplices[i].dim, simplices[i].vertices}] = i;

    // boundary columns over all simplices, rows indexed by canonical position
    std::vector<std::vector<int>> columns(count);
    for (int i = 0; i < count; ++i) {
        const FiltrationSimplex& s = simplices[i];
        if (s.dim == 1) {
            columns[i] = {index_of.at({0, {s.vertices[0], -1, -1}}),
                          index_of.at({0, {s.vertices[1], -1, -1}})};
        } else if (s.dim == 2) {
            columns[i] = {index_of.at({1, {s.vertices[0], s.vertices[1], -1}}),
                          index_of.at({1, {s.vertices[0], s.vertices[2], -1}}),
                          index_of.at({1, {s.vertices[1], s.vertices[2], -1}})};
        }
        std::sort(columns[i].begin(), columns[i].end());
    }

    std::vector<int> owner(count, -1);  // pivot row -> column
    std::vector<int> merged;
    for (int j = 0; j < count; ++j) {
        std::vector<int>& col = columns[j];
        while (!col.empty() && owner[col.back()] >= 0) {
            const std::vector<int>& other = columns[owner[col.back()]];
            merged.clear();
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                          std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) owner[col.back()] = j;
    }

    PersistenceDiagram1 diagram;
    for (int i = 0; i < count; ++i) {
        const FiltrationSimplex& s = simplices[i];
        if (s.dim != 1 || !columns[i].empty()) continue;  // only cycle-creating edges
        const std::array<int, 2> creator{s.vertices[0], s.vertices[1]};
        if (owner[i] >= 0) {
            const FiltrationSimplex& killer = simplices[owner[i]];
            if (killer.value == s.value) continue;
            diagram.features.push_back({s.value, killer.value, creator, killer.vertices});
        } else {
            diagram.features.push_back({s.value, kInf, creator, std::nullopt});
        }
    }
    std::sort(diagram.features.begin(), diagram.features.end(),
              [](const LoopFeature& x, const LoopFeature& y) {
                  if (x.birth != y.birth) return x.birth < y.birth;
                  if (x.death != y.death) return x.death < y.death;
                  return x.creator_edge < y.creator_edge;
              });
    return diagram;
}

Assignment brute_force_assignment(const CostMatrix& cost) {
    if (cost.rows > 8 || cost.cols > 8) {
        throw ParamError("brute_force_assignment: guarded to 8x8 matrices");
    }
    Assignment best;
    const int rows = cost.rows, cols = cost.cols;
    const int n = std::max(rows, cols);
    if (n == 0) return best;

    auto padded = [&](int i, int j) -> double {
        if (i < rows && j < cols) {
            const double v = cost.at(i, j);
            return std::isfinite(v) ? v : kAssignSentinel;
        }
        return kAssignSentinel;
    };

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best_total = kInf;
    std::vector<int> best_perm;
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += padded(i, perm[i]);
        if (total < best_total) {
            best_total = total;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<char> row_used(rows, 0), col_used(cols, 0);
    for (int r = 0; r < rows; ++r) {
        const int c = best_perm[r];
        if (c >= cols) continue;
        const double d = cost.at(r, c);
        if (!std::isfinite(d)) continue;
        best.pairs.emplace_back(r, c);
        best.pair_costs.push_back(d);
        best.total_cost += d;
        row_used[r] = 1;
        col_used[c] = 1;
    }
    for (int r = 0; r < rows; ++r) {
        if (!row_used[r]) best.unmatched_rows.push_back(r);
    }
    for (int c = 0; c < cols; ++c) {
        if (!col_used[c]) best.unmatched_cols.push_back(c);
    }
    return best;
}

namespace {

PersistenceDiagram1 diagram_of(const PointCloud& cloud) {
    const DistanceMatrix dist(cloud);
    return compute_ph1(dist, enclosing_radius(dist), cloud.frame_index);
}

// Greedy existence matching: reference features by descending lifetime, each
// grabs the admissible observed feature with the smallest total shift.
LemmaReport match_features(const PersistenceDiagram1& reference, const PersistenceDiagram1& observed,
                           double lifetime_threshold,
                           const std::function<bool(double, double)>& admissible) {
    LemmaReport report;
    std::vector<const LoopFeature*> refs;
    for (const LoopFeature& f : reference.features) {
        if (f.finite() && f.lifetime() > lifetime_threshold) refs.push_back(&f);
    }
    std::sort(refs.begin(), refs.end(),
              [](const LoopFeature* x, const LoopFeature* y) { return x->lifetime() > y->lifetime(); });
    report.checked = static_cast<int>(refs.size());

    std::vector<char> used(observed.features.size(), 0);
    for (const LoopFeature* ref : refs) {
        int best = -1;
        double best_shift = kInf;
        for (size_t i = 0; i < observed.features.size(); ++i) {
            if (used[i] || !observed.features[i].finite()) continue;
            const double db = observed.features[i].birth - ref->birth;
            const double dd = observed.features[i].death - ref->death;
            if (!admissible(db, dd)) continue;
            const double shift = std::abs(db) + std::abs(dd);
            if (shift < best_shift) {
                best_shift = shift;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) {
            report.violations.push_back(*ref);
            continue;
        }
        used[best] = 1;
        const LoopFeature& obs = observed.features[best];
        const LemmaMatch m{*ref, obs, obs.birth - ref->birth, obs.death - ref->death};
        report.worst_d_birth = std::max(report.worst_d_birth, std::abs(m.d_birth));
        report.worst_d_death = std::max(report.worst_d_death, std::abs(m.d_death));
        report.matches.push_back(m);
    }
    report.ok = report.violations.empty();
    return report;
}

}  // namespace

LemmaReport verify_lemma2(const PointCloud& dense, const PointCloud& sub, double alpha) {
    validate_cloud(dense);
    validate_cloud(sub);
    if (alpha < 0.0) throw ParamError("verify_lemma2: alpha must be >= 0");
    for (const Vec3& p : sub.points) {
        const bool found = std::any_of(dense.points.begin(), dense.points.end(),
                                       [&](const Vec3& q) { return p == q; });
        if (!found) throw InputError("verify_lemma2: sub is not a point subset of dense");
    }
    const PersistenceDiagram1 reference = diagram_of(dense);
    const PersistenceDiagram1 observed = diagram_of(sub);
    return match_features(reference, observed, alpha, [alpha](double db, double dd) {
        return db >= 0.0 && db <= alpha && dd >= 0.0 && dd <= alpha;
    });
}

LemmaReport verify_lemma3(const PointCloud& cloud, const PointCloud& moved, double epsilon) {
    validate_cloud(cloud);
    validate_cloud(moved);
    if (!(epsilon > 0.0)) throw ParamError("verify_lemma3: epsilon must be > 0");
    if (cloud.size() != moved.size()) {
        throw InputError("verify_lemma3: clouds must have the same cardinality");
    }
    for (int i = 0; i < cloud.size(); ++i) {
        if (!(distance(cloud.points[i], moved.points[i]) < epsilon)) {
            throw InputError("verify_lemma3: point " + std::to_string(i) +
                             " moved by >= epsilon");
        }
    }
    const PersistenceDiagram1 reference = diagram_of(cloud);
    const PersistenceDiagram1 observed = diagram_of(moved);
    return match_features(reference, observed, epsilon, [epsilon](double db, double dd) {
        return std::abs(db) <= epsilon && std::abs(dd) <= epsilon;
    });
}

}  // namespace topo
