#include "topotrack/persistence.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_map>

namespace topo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Edge {
    double value;
    int a, b;  // a < b
};

inline bool edge_less(const Edge& x, const Edge& y) {
    if (x.value != y.value) return x.value < y.value;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
}

// Vertices fit in 21 bits each, so the packed key compares like the
// lexicographic vertex triple.
inline uint64_t triangle_key(int a, int b, int c) {
    return (static_cast<uint64_t>(a) << 42) | (static_cast<uint64_t>(b) << 21) | static_cast<uint64_t>(c);
}

inline std::array<int, 3> sorted_triple(int a, int b, int k) {
    if (k < a) return {k, a, b};
    if (k < b) return {a, k, b};
    return {a, b, k};
}

inline std::array<int, 3> unpack_key(uint64_t key) {
    return {static_cast<int>(key >> 42), static_cast<int>((key >> 21) & 0x1FFFFF),
            static_cast<int>(key & 0x1FFFFF)};
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    // true if the edge merged two components
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x > y) std::swap(x, y);
        parent[y] = x;
        return true;
    }
};

// Edges that close a cycle when inserted in canonical order; these are the
// candidate loop creators.
std::vector<char> mark_positive_edges(const std::vector<Edge>& sorted_edges, int n_vertices) {
    UnionFind uf(n_vertices);
    std::vector<char> positive(sorted_edges.size(), 0);
    for (size_t i = 0; i < sorted_edges.size(); ++i) {
        positive[i] = uf.unite(sorted_edges[i].a, sorted_edges[i].b) ? 0 : 1;
    }
    return positive;
}

bool feature_less(const LoopFeature& x, const LoopFeature& y) {
    if (x.birth != y.birth) return x.birth < y.birth;
    if (x.death != y.death) return x.death < y.death;
    return x.creator_edge < y.creator_edge;
}

void finish_diagram(PersistenceDiagram1& diagram) {
    std::sort(diagram.features.begin(), diagram.features.end(), feature_less);
}

// ---- coboundary (clearing + implicit cofacets) engine ----------------------

struct CofacetEntry {
    double value;
    uint64_t key;
};
inline bool entry_less(const CofacetEntry& x, const CofacetEntry& y) {
    if (x.value != y.value) return x.value < y.value;
    return x.key < y.key;
}

// Working column of the reduction, bucketed by filtration value. The pivot
// sweep is monotone except when a previously settled column is absorbed, in
// which case the sweep may step back to a lower bucket; entries below the
// current pivot always cancel in pairs, so revisiting is sound. Each bucket
// is sorted once when the sweep reaches it; entries arriving for the bucket
// currently being swept go through a small side heap.
class BucketColumn {
public:
    void reset(double lo, double hi) {
        lo_ = lo;
        const double span = hi - lo;
        inv_width_ = span > 0.0 ? static_cast<double>(kBuckets - 1) / span : 0.0;
        if (buckets_.empty()) {
            buckets_.resize(kBuckets);
            for (auto& b : buckets_) b.reserve(1024);
        }
        for (int b = first_used_; b <= last_used_; ++b) buckets_[b].clear();
        first_used_ = kBuckets;
        last_used_ = -1;
        cur_ = 0;
        read_ = 0;
        sorted_ = false;
        pending_.clear();
    }

    void add(double v, uint64_t key) {
        const int b = bucket_of(v);
        if (b < cur_) {
            // step back; the unread tail of the current bucket is kept as-is
            // and will be re-sorted when the sweep returns
            if (sorted_ && read_ > 0) {
                auto& vec = buckets_[cur_];
                vec.erase(vec.begin(), vec.begin() + read_);
            }
            flush_pending();
            sorted_ = false;
            read_ = 0;
            cur_ = b;
        }
        if (b == cur_ && sorted_) {
            pending_.push_back({v, key});
            std::push_heap(pending_.begin(), pending_.end(), entry_greater);
        } else {
            buckets_[b].push_back({v, key});
        }
        first_used_ = std::min(first_used_, b);
        last_used_ = std::max(last_used_, b);
    }

    std::optional<CofacetEntry> pop_pivot() {
        while (true) {
            if (!sorted_) {
                if (cur_ > last_used_) return std::nullopt;
                auto& vec = buckets_[cur_];
                if (vec.empty() && pending_.empty()) {
                    ++cur_;
                    continue;
                }
                std::sort(vec.begin(), vec.end(), entry_less);
                read_ = 0;
                sorted_ = true;
            }
            const auto& vec = buckets_[cur_];
            if (read_ >= vec.size() && pending_.empty()) {
                buckets_[cur_].clear();
                sorted_ = false;
                ++cur_;
                continue;
            }
            const CofacetEntry e = take_min();
            int copies = 1;
            while (true) {
                const CofacetEntry* next = peek_min();
                if (!next || next->key != e.key) break;
                take_min();
                ++copies;
            }
            if (copies % 2 == 1) return e;
        }
    }

private:
    static constexpr int kBuckets = 1024;

    static bool entry_greater(const CofacetEntry& x, const CofacetEntry& y) { return entry_less(y, x); }

    int bucket_of(double v) const {
        const double offset = (v - lo_) * inv_width_;
        if (offset <= 0.0) return 0;
        if (offset >= kBuckets - 1) return kBuckets - 1;
        return static_cast<int>(offset);
    }

    void flush_pending() {
        auto& vec = buckets_[cur_];
        vec.insert(vec.end(), pending_.begin(), pending_.end());
        pending_.clear();
    }

    const CofacetEntry* peek_min() {
        const auto& vec = buckets_[cur_];
        const bool have_run = read_ < vec.size();
        const bool have_pending = !pending_.empty();
        if (!have_run && !have_pending) return nullptr;
        if (have_run && (!have_pending || entry_less(vec[read_], pending_.front()))) return &vec[read_];
        return &pending_.front();
    }

    CofacetEntry take_min() {
        const auto& vec = buckets_[cur_];
        const bool have_run = read_ < vec.size();
        if (have_run && (pending_.empty() || entry_less(vec[read_], pending_.front()))) {
            return vec[read_++];
        }
        std::pop_heap(pending_.begin(), pending_.end(), entry_greater);
        const CofacetEntry e = pending_.back();
        pending_.pop_back();
        return e;
    }

    double lo_ = 0.0;
    double inv_width_ = 0.0;
    std::vector<std::vector<CofacetEntry>> buckets_;
    std::vector<CofacetEntry> pending_;  // arrivals for the bucket being swept
    int first_used_ = kBuckets;
    int last_used_ = -1;
    int cur_ = 0;
    size_t read_ = 0;
    bool sorted_ = false;
};

}  // namespace

PersistenceDiagram1 compute_ph1(const DistanceMatrix& dist, double r_max, int frame_index) {
    if (!(r_max > 0.0)) throw ParamError("compute_ph1: r_max must be positive");
    const int n = dist.size();

    std::vector<double> half(static_cast<size_t>(n) * n);
    for (size_t i = 0; i < half.size(); ++i) half[i] = 0.5 * dist.row(0)[i];

    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        const double* row = half.data() + static_cast<size_t>(i) * n;
        for (int j = i + 1; j < n; ++j) {
            if (row[j] <= r_max) edges.push_back({row[j], i, j});
        }
    }
    std::sort(edges.begin(), edges.end(), edge_less);
    const std::vector<char> positive = mark_positive_edges(edges, n);

    // A settled column is remembered as the list of edges whose coboundaries
    // were absorbed; consumers re-stream those cofacets on demand instead of
    // keeping the reduced columns in memory.
    struct ReducedColumn {
        int edge_index;
        std::vector<int> added_edges;
    };
    std::vector<ReducedColumn> columns;
    std::unordered_map<uint64_t, int> pivot_owner;  // triangle key -> column index
    pivot_owner.reserve(edges.size() * 2 + 16);

    PersistenceDiagram1 diagram;
    diagram.frame_index = frame_index;

    auto emit = [&](const Edge& e, double death, uint64_t key) {
        if (death == e.value) return;  // simultaneous insertion, not a feature
        const auto t = unpack_key(key);
        diagram.features.push_back({e.value, death, {e.a, e.b}, t});
    };
    auto emit_essential = [&](const Edge& e) {
        diagram.features.push_back({e.value, kInf, {e.a, e.b}, std::nullopt});
    };

    BucketColumn column;
    auto add_cofacets = [&](BucketColumn& col, const Edge& e) {
        const double* ha = half.data() + static_cast<size_t>(e.a) * n;
        const double* hb = half.data() + static_cast<size_t>(e.b) * n;
        for (int k = 0; k < n; ++k) {
            if (k == e.a || k == e.b) continue;
            if (ha[k] > r_max || hb[k] > r_max) continue;
            const double v = std::max(e.value, std::max(ha[k], hb[k]));
            const auto t = sorted_triple(e.a, e.b, k);
            col.add(v, triangle_key(t[0], t[1], t[2]));
        }
    };

    // Process creator edges in reverse canonical order. The pivot of a column
    // is its canonically smallest cofacet; a settling column claims it, and a
    // later column hitting a claimed pivot absorbs the owner and continues.
    for (size_t idx = edges.size(); idx-- > 0;) {
        if (!positive[idx]) continue;
        const Edge& e = edges[idx];

        // Fast path: find the smallest cofacet without building the column.
        // Any third point within the edge length of both endpoints gives a
        // cofacet at the edge's own value, and scanning by index visits those
        // in increasing lexicographic order, so the first hit is the minimum.
        const double* ha = half.data() + static_cast<size_t>(e.a) * n;
        const double* hb = half.data() + static_cast<size_t>(e.b) * n;
        double best_value = kInf;
        int best_k = -1;
        for (int k = 0; k < n; ++k) {
            if (ha[k] > r_max || hb[k] > r_max) continue;
            if (ha[k] <= e.value && hb[k] <= e.value) {
                if (k == e.a || k == e.b) continue;
                best_value = e.value;
                best_k = k;
                break;
            }
            const double v = std::max(e.value, std::max(ha[k], hb[k]));
            if (v < best_value) {
                best_value = v;
                best_k = k;
            }
        }

        if (best_k < 0) {
            emit_essential(e);
            continue;
        }
        const auto t0 = sorted_triple(e.a, e.b, best_k);
        const uint64_t pivot0 = triangle_key(t0[0], t0[1], t0[2]);
        if (pivot_owner.find(pivot0) == pivot_owner.end()) {
            pivot_owner.emplace(pivot0, static_cast<int>(columns.size()));
            columns.push_back({static_cast<int>(idx), {}});
            emit(e, best_value, pivot0);
            continue;
        }

        // Collision: materialize the column and reduce until an unclaimed
        // pivot appears.
        column.reset(e.value, r_max);
        add_cofacets(column, e);
        std::vector<int> added;
        bool settled = false;
        while (auto pivot = column.pop_pivot()) {
            auto owner = pivot_owner.find(pivot->key);
            if (owner == pivot_owner.end()) {
                pivot_owner.emplace(pivot->key, static_cast<int>(columns.size()));
                columns.push_back({static_cast<int>(idx), std::move(added)});
                emit(e, pivot->value, pivot->key);
                settled = true;
                break;
            }
            // The owner's constituent coboundaries contain this pivot an odd
            // number of times; re-adding the popped entry keeps the mod-2
            // bookkeeping consistent.
            column.add(pivot->value, pivot->key);
            const ReducedColumn& col = columns[owner->second];
            add_cofacets(column, edges[col.edge_index]);
            added.push_back(col.edge_index);
            for (int g : col.added_edges) {
                add_cofacets(column, edges[g]);
                added.push_back(g);
            }
        }
        if (!settled) emit_essential(e);
    }

    finish_diagram(diagram);
    return diagram;
}

// ---- boundary (triangle column) engine for explicit filtrations ------------

namespace {

void validate_filtration(const Filtration& f) {
    const int n = f.source_count;
    int vertex_count = 0;
    std::set<std::pair<int, int>> edge_set;
    const FiltrationSimplex* prev = nullptr;
    for (const FiltrationSimplex& s : f.simplices) {
        if (prev && !canonical_less(*prev, s)) {
            throw InputError("filtration is not in canonical order");
        }
        prev = &s;
        switch (s.dim) {
            case 0:
                if (s.vertices[0] < 0 || s.vertices[0] >= n || s.value != 0.0) {
                    throw InputError("malformed vertex simplex");
                }
                ++vertex_count;
                break;
            case 1: {
                const int a = s.vertices[0], b = s.vertices[1];
                if (a < 0 || b <= a || b >= n) throw InputError("malformed edge simplex");
                edge_set.emplace(a, b);
                break;
            }
            case 2: {
                const int a = s.vertices[0], b = s.vertices[1], c = s.vertices[2];
                if (a < 0 || b <= a || c <= b || c >= n) throw InputError("malformed triangle simplex");
                if (!edge_set.count({a, b}) || !edge_set.count({a, c}) || !edge_set.count({b, c})) {
                    throw InputError("filtration not closed under faces: triangle with missing edge");
                }
                break;
            }
            default:
                throw InputError("unsupported simplex dimension");
        }
    }
    if (vertex_count != n) throw InputError("filtration vertex count does not match source_count");
}

}  // namespace

PersistenceDiagram1 compute_ph1(const Filtration& filtration) {
    validate_filtration(filtration);

    std::vector<Edge> edges;
    std::vector<const FiltrationSimplex*> triangles;
    for (const FiltrationSimplex& s : filtration.simplices) {
        if (s.dim == 1) edges.push_back({s.value, s.vertices[0], s.vertices[1]});
        if (s.dim == 2) triangles.push_back(&s);
    }
    // canonical global order restricted to one dimension is already sorted

    const std::vector<char> positive = mark_positive_edges(edges, filtration.source_count);

    // Rank the creator edges; only they can carry pivots of reduced triangle
    // columns (a triangle boundary is a cycle, and the newest edge of a cycle
    // never merges components), so columns drop merging edges up front.
    std::vector<int> positive_rank(edges.size(), -1);
    std::vector<int> positive_to_edge;
    for (size_t i = 0; i < edges.size(); ++i) {
        if (positive[i]) {
            positive_rank[i] = static_cast<int>(positive_to_edge.size());
            positive_to_edge.push_back(static_cast<int>(i));
        }
    }
    std::unordered_map<uint64_t, int> edge_index;
    edge_index.reserve(edges.size() * 2 + 16);
    for (size_t i = 0; i < edges.size(); ++i) {
        edge_index.emplace(triangle_key(0, edges[i].a, edges[i].b), static_cast<int>(i));
    }

    std::vector<std::vector<int>> stored;            // reduced columns, sorted rank vectors
    std::vector<int> stored_triangle;                // killer triangle per stored column
    std::vector<int> owner(positive_to_edge.size(), -1);  // pivot rank -> stored column

    std::vector<int> work, merged;
    for (size_t t = 0; t < triangles.size(); ++t) {
        const auto& v = triangles[t]->vertices;
        work.clear();
        const std::array<std::pair<int, int>, 3> tri_edges{
            std::make_pair(v[0], v[1]), std::make_pair(v[0], v[2]), std::make_pair(v[1], v[2])};
        for (const auto& [a, b] : tri_edges) {
            const int ei = edge_index.at(triangle_key(0, a, b));
            if (positive[ei]) work.push_back(positive_rank[ei]);
        }
        std::sort(work.begin(), work.end());

        while (!work.empty()) {
            const int pivot = work.back();
            const int own = owner[pivot];
            if (own < 0) break;
            // symmetric difference with the owning column
            const std::vector<int>& other = stored[own];
            merged.clear();
            std::set_symmetric_difference(work.begin(), work.end(), other.begin(), other.end(),
                                          std::back_inserter(merged));
            work.swap(merged);
        }
        if (!work.empty()) {
            owner[work.back()] = static_cast<int>(stored.size());
            stored.push_back(work);
            stored_triangle.push_back(static_cast<int>(t));
        }
    }

    PersistenceDiagram1 diagram;
    for (size_t p = 0; p < positive_to_edge.size(); ++p) {
        const Edge& e = edges[positive_to_edge[p]];
        if (owner[p] >= 0) {
            const FiltrationSimplex& killer = *triangles[stored_triangle[owner[p]]];
            if (killer.value == e.value) continue;
            diagram.features.push_back({e.value, killer.value, {e.a, e.b}, killer.vertices});
        } else {
            diagram.features.push_back({e.value, kInf, {e.a, e.b}, std::nullopt});
        }
    }
    finish_diagram(diagram);
    return diagram;
}

PersistenceDiagram1 filter_significant(const PersistenceDiagram1& diagram, double alpha) {
    if (alpha < 0.0) throw ParamError("filter_significant: alpha must be >= 0");
    PersistenceDiagram1 out;
    out.frame_index = diagram.frame_index;
    for (const LoopFeature& f : diagram.features) {
        if (f.finite() && f.lifetime() > alpha) out.features.push_back(f);
    }
    return out;
}

// ---- killer-edge neighborhood ----------------------------------------------

namespace {

TriangleInfo make_triangle_info(const std::array<int, 3>& v, const DistanceMatrix& dist,
                                const PointCloud& cloud) {
    TriangleInfo t;
    t.vertices = v;
    t.points = {cloud.points[v[0]], cloud.points[v[1]], cloud.points[v[2]]};
    t.value = std::max(dist.half(v[0], v[1]), std::max(dist.half(v[0], v[2]), dist.half(v[1], v[2])));
    return t;
}

}  // namespace

LoopDescriptor extract_loop_descriptor(const LoopFeature& feature, const DistanceMatrix& dist,
                                       const PointCloud& cloud) {
    if (!feature.finite()) {
        throw InvariantError("extract_loop_descriptor: feature has no killer triangle");
    }
    const int n = dist.size();
    const auto& kt = *feature.killer_triangle;
    const double death = feature.death;

    // sanity: the feature must belong to this cloud
    const double tri_value =
        std::max(dist.half(kt[0], kt[1]), std::max(dist.half(kt[0], kt[2]), dist.half(kt[1], kt[2])));
    if (tri_value != death) {
        throw InvariantError("extract_loop_descriptor: killer triangle value does not match death");
    }

    // killer edge: longest edge of the paired triangle, ties broken canonically
    const std::array<std::array<int, 2>, 3> tri_edges{
        std::array<int, 2>{kt[0], kt[1]}, std::array<int, 2>{kt[0], kt[2]}, std::array<int, 2>{kt[1], kt[2]}};
    std::array<int, 2> killer{-1, -1};
    for (const auto& ed : tri_edges) {
        if (dist.half(ed[0], ed[1]) == death) {
            killer = ed;
            break;  // tri_edges is already in lexicographic order
        }
    }

    LoopDescriptor d;
    d.birth = feature.birth;
    d.death = death;
    d.lifetime = death - feature.birth;
    d.killer_edge.vertices = killer;
    d.killer_edge.points = {cloud.points[killer[0]], cloud.points[killer[1]]};
    d.killer_edge.value = death;

    // every triangle on the killer edge entering exactly at the death value
    const int a = killer[0], b = killer[1];
    for (int k = 0; k < n; ++k) {
        if (k == a || k == b) continue;
        if (dist.half(a, k) <= death && dist.half(b, k) <= death) {
            TriangleInfo t = make_triangle_info(sorted_triple(a, b, k), dist, cloud);
            t.paired = (t.vertices == kt);
            d.killer_triangles.push_back(t);
        }
    }

    // Immediate neighborhood: across each side of each killer triangle, the
    // earliest triangle to appear, provided it does so strictly before the
    // death value. Triangles entering at the death value itself belong to the
    // killer set or arrive with it, not to the neighborhood.
    std::set<std::array<int, 3>> killer_set;
    for (const TriangleInfo& t : d.killer_triangles) killer_set.insert(t.vertices);
    std::set<std::array<int, 3>> seen;
    for (const TriangleInfo& t : d.killer_triangles) {
        const auto& v = t.vertices;
        const std::array<std::array<int, 2>, 3> sides{
            std::array<int, 2>{v[0], v[1]}, std::array<int, 2>{v[0], v[2]}, std::array<int, 2>{v[1], v[2]}};
        for (const auto& [p, q] : sides) {
            const double side_value = dist.half(p, q);
            double best_value = death;
            int best_k = -1;
            for (int k = 0; k < n; ++k) {
                if (k == p || k == q) continue;
                const double vk = std::max(side_value, std::max(dist.half(p, k), dist.half(q, k)));
                if (vk >= best_value) continue;
                const auto tri = sorted_triple(p, q, k);
                if (killer_set.count(tri)) continue;
                best_value = vk;
                best_k = k;
            }
            if (best_k < 0) continue;
            const auto tri = sorted_triple(p, q, best_k);
            if (!seen.insert(tri).second) continue;
            d.neighbor_triangles.push_back(make_triangle_info(tri, dist, cloud));
        }
    }
    std::sort(d.neighbor_triangles.begin(), d.neighbor_triangles.end(),
              [](const TriangleInfo& x, const TriangleInfo& y) {
                  if (x.value != y.value) return x.value < y.value;
                  return x.vertices < y.vertices;
              });
    return d;
}

LoopDescriptor extract_loop_descriptor(const LoopFeature& feature, const Filtration& filtration,
                                       const PointCloud& cloud) {
    if (filtration.source_count != cloud.size()) {
        throw InputError("extract_loop_descriptor: filtration and cloud sizes differ");
    }
    return extract_loop_descriptor(feature, DistanceMatrix(cloud), cloud);
}

bool descriptor_canonical_less(const LoopDescriptor& a, const LoopDescriptor& b) {
    if (a.lifetime != b.lifetime) return a.lifetime > b.lifetime;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.killer_edge.vertices < b.killer_edge.vertices;
}

}  // namespace topo
