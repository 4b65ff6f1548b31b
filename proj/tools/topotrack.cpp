#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "topotrack/io.hpp"
#include "topotrack/mixture.hpp"
#include "topotrack/oracle.hpp"
#include "topotrack/scenegen.hpp"
#include "topotrack/tracker.hpp"
#include "topotrack/validate.hpp"

namespace {

// exit codes: 0 success, 1 input error, 2 parameter error, 3 internal invariant
constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kParamError = 2;
constexpr int kInternalError = 3;

struct RunOptions {
    std::string input;
    std::string out;
    std::optional<double> alpha, beta, epsilon, r_max;
    int max_points = 768;
    uint64_t seed = 0;
};

int cmd_run(const RunOptions& opt) {
    const std::vector<topo::PointCloud> frames = topo::load_sequence(opt.input);

    std::optional<topo::SequenceManifest> manifest;
    if (!std::filesystem::is_directory(opt.input)) manifest = topo::load_manifest(opt.input);

    topo::RunParams params;
    params.tracker.max_points = opt.max_points;
    params.tracker.subsample_seed = opt.seed;
    params.tracker.r_max = opt.r_max;

    // precedence: flags, then manifest, then measured defaults
    double derived_alpha = 0.0;
    if (!opt.alpha && !(manifest && manifest->alpha)) {
        topo::PointCloud first = frames.front();
        if (opt.max_points > 0 && first.size() > opt.max_points) {
            const topo::PointCloud sub = topo::farthest_point_subsample(first, opt.max_points, opt.seed);
            derived_alpha = 2.0 * topo::covering_radius(first, sub);
        } else {
            derived_alpha = 2.0 * topo::max_nn_distance(first);
        }
    }
    params.tracker.alpha =
        opt.alpha ? *opt.alpha : (manifest && manifest->alpha ? *manifest->alpha : derived_alpha);
    params.tracker.beta =
        opt.beta ? *opt.beta : (manifest && manifest->beta ? *manifest->beta : params.tracker.alpha);
    params.tracker.epsilon = opt.epsilon ? *opt.epsilon
                                         : (manifest && manifest->epsilon ? *manifest->epsilon
                                                                          : 0.45 * params.tracker.alpha);

    const topo::TrackResult result = topo::track_sequence(frames, params.tracker);
    for (const std::string& warning : result.warnings) {
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }

    topo::StatesDocument doc;
    doc.params = params;
    doc.warnings = result.warnings;
    doc.states = result.states;
    for (const topo::TopologicalState& state : result.states) {
        std::vector<topo::LoopMixture> frame_mixtures;
        for (const topo::LoopDescriptor& loop : state.loops) {
            frame_mixtures.push_back(topo::loop_mixture(loop, params.eps_reg));
        }
        doc.mixtures.push_back(std::move(frame_mixtures));
    }
    topo::write_states(doc, opt.out);

    size_t loops = 0;
    for (const auto& s : result.states) loops += s.loops.size();
    std::printf("tracked %zu frames, %zu loop observations (alpha=%g beta=%g epsilon=%g) -> %s\n",
                result.states.size(), loops, params.tracker.alpha, params.tracker.beta,
                params.tracker.epsilon, opt.out.c_str());
    return kOk;
}

struct GenOptions {
    std::string kind = "annulus";
    std::string out;
    int points = 256;
    int frames = 50;
    double radius = 1.0;
    double tube_width = 0.04;
    double noise_sigma = 0.002;
    double step_motion = 0.02;
    double separation = 6.0;
    uint64_t seed = 1;
};

int cmd_gen(const GenOptions& opt) {
    topo::SceneSpec spec;
    if (opt.kind == "annulus") {
        spec.kind = topo::SceneKind::annulus;
    } else if (opt.kind == "two-annulus") {
        spec.kind = topo::SceneKind::two_annulus;
    } else if (opt.kind == "breathing-annulus") {
        spec.kind = topo::SceneKind::breathing_annulus;
    } else {
        throw topo::ParamError("unknown scene kind: " + opt.kind);
    }
    spec.points_per_frame = opt.points;
    spec.frames = opt.frames;
    spec.radius = opt.radius;
    spec.tube_width = opt.tube_width;
    spec.noise_sigma = opt.noise_sigma;
    spec.step_motion = opt.step_motion;
    spec.separation = opt.separation;
    spec.seed = opt.seed;

    const topo::Scene scene = topo::gen_scene(spec);
    topo::write_scene(scene, opt.out);
    std::printf("wrote %d frames to %s (covering radius <= %.6g, max step %.6g)\n", spec.frames,
                opt.out.c_str(), scene.report.max_covering_radius,
                scene.report.max_step_displacement);
    return kOk;
}

struct SampleOptions {
    std::string states;
    std::string out;
    int frame = 0;
    int64_t loop_id = 0;
    int n = 1000;
    uint64_t seed = 0;
};

int cmd_sample(const SampleOptions& opt) {
    const topo::StatesDocument doc = topo::read_states(opt.states);
    for (size_t t = 0; t < doc.states.size(); ++t) {
        if (doc.states[t].frame_index != opt.frame) continue;
        const auto& loops = doc.states[t].loops;
        for (size_t l = 0; l < loops.size(); ++l) {
            if (loops[l].id != opt.loop_id) continue;
            const auto samples = topo::mixture_sample(doc.mixtures.at(t).at(l), opt.n, opt.seed);
            topo::write_xyz(samples, opt.out);
            std::printf("wrote %d samples of loop %lld at frame %d -> %s\n", opt.n,
                        static_cast<long long>(opt.loop_id), opt.frame, opt.out.c_str());
            return kOk;
        }
        throw topo::InputError("loop id " + std::to_string(opt.loop_id) + " not present at frame " +
                               std::to_string(opt.frame));
    }
    throw topo::InputError("frame " + std::to_string(opt.frame) + " not present in " + opt.states);
}

int cmd_validate(const std::string& suite, uint64_t seed) {
    std::vector<topo::SuiteResult> results;
    if (suite == "all") {
        results = topo::validate_all(seed);
    } else if (suite == "oracle") {
        results = {topo::validate_oracle(seed)};
    } else if (suite == "assignment") {
        results = {topo::validate_assignment(seed)};
    } else if (suite == "lemma2") {
        results = {topo::validate_lemma2(seed)};
    } else if (suite == "lemma3") {
        results = {topo::validate_lemma3(seed)};
    } else if (suite == "perf") {
        results = {topo::validate_perf(seed)};
    } else {
        throw topo::ParamError("unknown suite: " + suite);
    }

    bool all_passed = true;
    for (const topo::SuiteResult& r : results) {
        std::printf("[%s] %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str());
        for (const std::string& line : r.lines) std::printf("%s\n", line.c_str());
        all_passed = all_passed && r.passed;
    }
    return all_passed ? kOk : kInternalError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topotrack: loop extraction and tracking for 3-D point cloud sequences"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App* run = app.add_subcommand("run", "track loops through a sequence of point clouds");
    run->add_option("--input", run_opt.input, "frame directory or manifest file")->required();
    run->add_option("--out", run_opt.out, "output states document (JSON)")->required();
    run->add_option("--alpha", run_opt.alpha, "sampling density bound");
    run->add_option("--beta", run_opt.beta, "killer localization bound");
    run->add_option("--epsilon", run_opt.epsilon, "per-step motion bound");
    run->add_option("--rmax", run_opt.r_max, "fixed truncation radius (default: enclosing radius)");
    run->add_option("--max-points", run_opt.max_points, "subsample cap per frame (0 disables)")
        ->capture_default_str();
    run->add_option("--seed", run_opt.seed, "subsample seed")->capture_default_str();

    GenOptions gen_opt;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene with ground truth");
    gen->add_option("--kind", gen_opt.kind, "annulus | two-annulus | breathing-annulus")
        ->capture_default_str();
    gen->add_option("--out", gen_opt.out, "output directory")->required();
    gen->add_option("--points", gen_opt.points, "points per frame")->capture_default_str();
    gen->add_option("--frames", gen_opt.frames, "frame count")->capture_default_str();
    gen->add_option("--radius", gen_opt.radius, "loop radius")->capture_default_str();
    gen->add_option("--tube-width", gen_opt.tube_width, "ring thickness")->capture_default_str();
    gen->add_option("--noise", gen_opt.noise_sigma, "per-frame sensor noise sigma")
        ->capture_default_str();
    gen->add_option("--step", gen_opt.step_motion, "per-step motion budget")->capture_default_str();
    gen->add_option("--separation", gen_opt.separation, "center distance (two-annulus)")
        ->capture_default_str();
    gen->add_option("--seed", gen_opt.seed, "generator seed")->capture_default_str();

    SampleOptions sample_opt;
    CLI::App* sample = app.add_subcommand("sample", "draw mixture samples for one tracked loop");
    sample->add_option("--states", sample_opt.states, "states document from `run`")->required();
    sample->add_option("--out", sample_opt.out, "output XYZ file")->required();
    sample->add_option("--frame", sample_opt.frame, "frame index")->capture_default_str();
    sample->add_option("--loop-id", sample_opt.loop_id, "loop id")->capture_default_str();
    sample->add_option("--n", sample_opt.n, "sample count")->capture_default_str();
    sample->add_option("--seed", sample_opt.seed, "sampler seed")->capture_default_str();

    std::string suite = "all";
    uint64_t validate_seed = 20240501;
    CLI::App* validate = app.add_subcommand("validate", "run the built-in self checks");
    validate->add_option("--suite", suite, "oracle | assignment | lemma2 | lemma3 | perf | all")
        ->capture_default_str();
    validate->add_option("--seed", validate_seed, "suite seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kParamError;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (gen->parsed()) return cmd_gen(gen_opt);
        if (sample->parsed()) return cmd_sample(sample_opt);
        if (validate->parsed()) return cmd_validate(suite, validate_seed);
    } catch (const topo::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kInputError;
    } catch (const topo::ParamError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return kParamError;
    } catch (const topo::InvariantError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kInternalError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return kInternalError;
    }
    return kOk;
}
