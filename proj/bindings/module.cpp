#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "topotrack/io.hpp"
#include "topotrack/mixture.hpp"
#include "topotrack/oracle.hpp"
#include "topotrack/scenegen.hpp"
#include "topotrack/tracker.hpp"
#include "topotrack/validate.hpp"

namespace py = pybind11;
using namespace topo;

namespace {

PointCloud make_cloud(const std::vector<std::array<double, 3>>& points, int frame_index) {
    PointCloud cloud;
    cloud.frame_index = frame_index;
    cloud.points.reserve(points.size());
    for (const auto& p : points) cloud.points.push_back({p[0], p[1], p[2]});
    validate_cloud(cloud);
    return cloud;
}

std::vector<std::array<double, 3>> cloud_points(const PointCloud& cloud) {
    std::vector<std::array<double, 3>> out;
    out.reserve(cloud.points.size());
    for (const Vec3& p : cloud.points) out.push_back({p.x, p.y, p.z});
    return out;
}

std::array<double, 3> vec_tuple(const Vec3& v) { return {v.x, v.y, v.z}; }

CostMatrix matrix_from_rows(const std::vector<std::vector<py::object>>& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows[0].size()) : 0;
    CostMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c) throw ParamError("cost matrix rows differ in length");
        for (int j = 0; j < c; ++j) {
            if (rows[i][j].is_none()) continue;  // forbidden
            m.at(i, j) = rows[i][j].cast<double>();
        }
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_topotrack, m) {
    m.doc() = "Loop extraction and tracking for 3-D point cloud sequences";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("as_tuple", &vec_tuple)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " +
                   std::to_string(v.z) + ")";
        });

    py::class_<PointCloud>(m, "PointCloud")
        .def(py::init(&make_cloud), py::arg("points"), py::arg("frame_index") = 0)
        .def_readwrite("frame_index", &PointCloud::frame_index)
        .def_property_readonly("points", &cloud_points)
        .def("__len__", &PointCloud::size);

    py::class_<FiltrationSimplex>(m, "FiltrationSimplex")
        .def_readonly("vertices", &FiltrationSimplex::vertices)
        .def_readonly("dim", &FiltrationSimplex::dim)
        .def_readonly("value", &FiltrationSimplex::value);

    py::class_<Filtration>(m, "Filtration")
        .def_readonly("simplices", &Filtration::simplices)
        .def_readonly("r_max", &Filtration::r_max)
        .def_readonly("source_count", &Filtration::source_count);

    py::class_<LoopFeature>(m, "LoopFeature")
        .def_readonly("birth", &LoopFeature::birth)
        .def_readonly("death", &LoopFeature::death)
        .def_readonly("creator_edge", &LoopFeature::creator_edge)
        .def_readonly("killer_triangle", &LoopFeature::killer_triangle)
        .def_property_readonly("lifetime", &LoopFeature::lifetime)
        .def_property_readonly("finite", &LoopFeature::finite);

    py::class_<PersistenceDiagram1>(m, "PersistenceDiagram1")
        .def_readonly("features", &PersistenceDiagram1::features)
        .def_readonly("frame_index", &PersistenceDiagram1::frame_index);

    py::class_<EdgeInfo>(m, "EdgeInfo")
        .def_readonly("vertices", &EdgeInfo::vertices)
        .def_readonly("value", &EdgeInfo::value)
        .def_property_readonly("points", [](const EdgeInfo& e) {
            return std::array<std::array<double, 3>, 2>{vec_tuple(e.points[0]), vec_tuple(e.points[1])};
        });

    py::class_<TriangleInfo>(m, "TriangleInfo")
        .def_readonly("vertices", &TriangleInfo::vertices)
        .def_readonly("value", &TriangleInfo::value)
        .def_readonly("paired", &TriangleInfo::paired)
        .def_property_readonly("points", [](const TriangleInfo& t) {
            return std::array<std::array<double, 3>, 3>{vec_tuple(t.points[0]), vec_tuple(t.points[1]),
                                                        vec_tuple(t.points[2])};
        });

    py::class_<LoopDescriptor>(m, "LoopDescriptor")
        .def_readonly("id", &LoopDescriptor::id)
        .def_readonly("birth", &LoopDescriptor::birth)
        .def_readonly("death", &LoopDescriptor::death)
        .def_readonly("lifetime", &LoopDescriptor::lifetime)
        .def_readonly("killer_edge", &LoopDescriptor::killer_edge)
        .def_readonly("killer_triangles", &LoopDescriptor::killer_triangles)
        .def_readonly("neighbor_triangles", &LoopDescriptor::neighbor_triangles)
        .def_readonly("hausdorff_prev", &LoopDescriptor::hausdorff_prev);

    py::class_<TrackerParams>(m, "TrackerParams")
        .def(py::init([](double alpha, double beta, double epsilon, std::optional<double> r_max,
                         int max_points, uint64_t subsample_seed) {
                 TrackerParams p;
                 p.alpha = alpha;
                 p.beta = beta;
                 p.epsilon = epsilon;
                 p.r_max = r_max;
                 p.max_points = max_points;
                 p.subsample_seed = subsample_seed;
                 return p;
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("epsilon"), py::arg("r_max") = py::none(),
             py::arg("max_points") = 768, py::arg("subsample_seed") = 0)
        .def_readwrite("alpha", &TrackerParams::alpha)
        .def_readwrite("beta", &TrackerParams::beta)
        .def_readwrite("epsilon", &TrackerParams::epsilon)
        .def_readwrite("r_max", &TrackerParams::r_max)
        .def_readwrite("max_points", &TrackerParams::max_points)
        .def_readwrite("subsample_seed", &TrackerParams::subsample_seed)
        .def("validate", &TrackerParams::validate);

    py::class_<TopologicalState>(m, "TopologicalState")
        .def_readonly("frame_index", &TopologicalState::frame_index)
        .def_readonly("loops", &TopologicalState::loops);

    py::class_<TrackResult>(m, "TrackResult")
        .def_readonly("states", &TrackResult::states)
        .def_readonly("warnings", &TrackResult::warnings);

    py::class_<Assignment>(m, "Assignment")
        .def_readonly("pairs", &Assignment::pairs)
        .def_readonly("pair_costs", &Assignment::pair_costs)
        .def_readonly("unmatched_rows", &Assignment::unmatched_rows)
        .def_readonly("unmatched_cols", &Assignment::unmatched_cols)
        .def_readonly("total_cost", &Assignment::total_cost);

    py::class_<Mat3>(m, "Mat3").def_readonly("m", &Mat3::m);

    py::enum_<LoopMixture::Source>(m, "ComponentSource")
        .value("killer", LoopMixture::Source::killer)
        .value("neighbor", LoopMixture::Source::neighbor);

    py::class_<LoopMixture>(m, "LoopMixture")
        .def_readonly("loop_id", &LoopMixture::loop_id)
        .def_readonly("weights", &LoopMixture::weights)
        .def_readonly("raw_weights", &LoopMixture::raw_weights)
        .def_readonly("covariances", &LoopMixture::covariances)
        .def_readonly("component_source", &LoopMixture::component_source)
        .def_property_readonly("means", [](const LoopMixture& mix) {
            std::vector<std::array<double, 3>> out;
            for (const Vec3& mu : mix.means) out.push_back(vec_tuple(mu));
            return out;
        });

    py::enum_<SceneKind>(m, "SceneKind")
        .value("annulus", SceneKind::annulus)
        .value("two_annulus", SceneKind::two_annulus)
        .value("breathing_annulus", SceneKind::breathing_annulus);

    py::class_<SceneSpec>(m, "SceneSpec")
        .def(py::init<>())
        .def_readwrite("kind", &SceneSpec::kind)
        .def_readwrite("points_per_frame", &SceneSpec::points_per_frame)
        .def_readwrite("frames", &SceneSpec::frames)
        .def_readwrite("radius", &SceneSpec::radius)
        .def_readwrite("tube_width", &SceneSpec::tube_width)
        .def_readwrite("noise_sigma", &SceneSpec::noise_sigma)
        .def_readwrite("step_motion", &SceneSpec::step_motion)
        .def_readwrite("separation", &SceneSpec::separation)
        .def_readwrite("seed", &SceneSpec::seed);

    py::class_<LoopTruth>(m, "LoopTruth")
        .def_readonly("radius", &LoopTruth::radius)
        .def_readonly("thickness", &LoopTruth::thickness)
        .def_property_readonly("center", [](const LoopTruth& t) { return vec_tuple(t.center); })
        .def_property_readonly("normal", [](const LoopTruth& t) { return vec_tuple(t.normal); });

    py::class_<GroundTruth>(m, "GroundTruth")
        .def_readonly("frames", &GroundTruth::frames)
        .def("loop_count", &GroundTruth::loop_count);

    py::class_<SceneReport>(m, "SceneReport")
        .def_readonly("covering_radius", &SceneReport::covering_radius)
        .def_readonly("max_covering_radius", &SceneReport::max_covering_radius)
        .def_readonly("max_step_displacement", &SceneReport::max_step_displacement)
        .def_readonly("killer_spread", &SceneReport::killer_spread);

    py::class_<Scene>(m, "Scene")
        .def_readonly("frames", &Scene::frames)
        .def_readonly("truth", &Scene::truth)
        .def_readonly("report", &Scene::report);

    py::class_<LemmaMatch>(m, "LemmaMatch")
        .def_readonly("reference", &LemmaMatch::reference)
        .def_readonly("observed", &LemmaMatch::observed)
        .def_readonly("d_birth", &LemmaMatch::d_birth)
        .def_readonly("d_death", &LemmaMatch::d_death);

    py::class_<LemmaReport>(m, "LemmaReport")
        .def_readonly("ok", &LemmaReport::ok)
        .def_readonly("checked", &LemmaReport::checked)
        .def_readonly("matches", &LemmaReport::matches)
        .def_readonly("violations", &LemmaReport::violations)
        .def_readonly("worst_d_birth", &LemmaReport::worst_d_birth)
        .def_readonly("worst_d_death", &LemmaReport::worst_d_death);

    // core operations
    m.def("pairwise_distances", [](const PointCloud& cloud) {
        const DistanceMatrix d(cloud);
        std::vector<std::vector<double>> out(d.size(), std::vector<double>(d.size()));
        for (int i = 0; i < d.size(); ++i) {
            for (int j = 0; j < d.size(); ++j) out[i][j] = d(i, j);
        }
        return out;
    });
    m.def("enclosing_radius", py::overload_cast<const PointCloud&>(&enclosing_radius));
    m.def("build_filtration", py::overload_cast<const PointCloud&, double>(&build_filtration),
          py::arg("cloud"), py::arg("r_max"));
    m.def("farthest_point_subsample", &farthest_point_subsample, py::arg("cloud"), py::arg("n"),
          py::arg("seed") = 0);
    m.def("compute_ph1", py::overload_cast<const Filtration&>(&compute_ph1), py::arg("filtration"));
    m.def(
        "compute_ph1",
        [](const PointCloud& cloud, std::optional<double> r_max) {
            const DistanceMatrix dist(cloud);
            return compute_ph1(dist, r_max ? *r_max : enclosing_radius(dist), cloud.frame_index);
        },
        py::arg("cloud"), py::arg("r_max") = py::none());
    m.def("filter_significant", &filter_significant, py::arg("diagram"), py::arg("alpha"));
    m.def(
        "extract_loop_descriptor",
        [](const LoopFeature& feature, const PointCloud& cloud) {
            return extract_loop_descriptor(feature, DistanceMatrix(cloud), cloud);
        },
        py::arg("feature"), py::arg("cloud"));
    m.def(
        "hausdorff",
        [](const std::vector<std::array<double, 3>>& a, const std::vector<std::array<double, 3>>& b) {
            std::vector<Vec3> va, vb;
            for (const auto& p : a) va.push_back({p[0], p[1], p[2]});
            for (const auto& p : b) vb.push_back({p[0], p[1], p[2]});
            return hausdorff(va, vb);
        },
        py::arg("a"), py::arg("b"));
    m.def("covering_radius", &covering_radius, py::arg("dense"), py::arg("subset"));
    m.def("max_nn_distance", &max_nn_distance, py::arg("cloud"));
    m.def(
        "assign", [](const std::vector<std::vector<py::object>>& rows) { return assign(matrix_from_rows(rows)); },
        "Minimum-cost assignment; use None for forbidden entries", py::arg("cost"));
    m.def(
        "brute_force_assignment",
        [](const std::vector<std::vector<py::object>>& rows) {
            return brute_force_assignment(matrix_from_rows(rows));
        },
        py::arg("cost"));
    m.def("track_sequence", &track_sequence, py::arg("frames"), py::arg("params"));
    m.def("naive_reduction_ph1", &naive_reduction_ph1, py::arg("cloud"), py::arg("r_max"));
    m.def("verify_lemma2", &verify_lemma2, py::arg("dense"), py::arg("sub"), py::arg("alpha"));
    m.def("verify_lemma3", &verify_lemma3, py::arg("cloud"), py::arg("moved"), py::arg("epsilon"));
    m.def(
        "simplex_gaussian",
        [](const std::array<double, 3>& v1, const std::array<double, 3>& v2,
           const std::array<double, 3>& v3, double eps_reg) {
            auto [mean, cov] = simplex_gaussian({v1[0], v1[1], v1[2]}, {v2[0], v2[1], v2[2]},
                                                {v3[0], v3[1], v3[2]}, eps_reg);
            return py::make_tuple(vec_tuple(mean), cov.m);
        },
        py::arg("v1"), py::arg("v2"), py::arg("v3"), py::arg("eps_reg") = kDefaultEpsReg);
    m.def("loop_mixture", &loop_mixture, py::arg("descriptor"), py::arg("eps_reg") = kDefaultEpsReg);
    m.def(
        "mixture_logpdf",
        [](const LoopMixture& mix, const std::array<double, 3>& x) {
            return mixture_logpdf(mix, {x[0], x[1], x[2]});
        },
        py::arg("mixture"), py::arg("x"));
    m.def(
        "mixture_sample",
        [](const LoopMixture& mix, int n, uint64_t seed) {
            std::vector<std::array<double, 3>> out;
            for (const Vec3& p : mixture_sample(mix, n, seed)) out.push_back(vec_tuple(p));
            return out;
        },
        py::arg("mixture"), py::arg("n"), py::arg("seed") = 0);
    m.def(
        "mixture_mean",
        [](const LoopMixture& mix) { return vec_tuple(mixture_mean(mix)); }, py::arg("mixture"));
    m.def("gen_scene", &gen_scene, py::arg("spec"));
    m.def(
        "check_membership",
        [](const GroundTruth& truth, int frame, int loop, const std::array<double, 3>& p) {
            return check_membership(truth, frame, loop, {p[0], p[1], p[2]});
        },
        py::arg("truth"), py::arg("frame"), py::arg("loop"), py::arg("point"));
    m.def("suggested_params", &suggested_params, py::arg("report"));
    m.def("load_sequence", &load_sequence, py::arg("path"));
    m.def("load_xyz", &load_xyz, py::arg("path"));
}
