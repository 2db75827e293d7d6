// Command-line frontend: field generation, spectral transforms, cube-scan
// analysis, the factorization construction, and the verification checks.
// One command per invocation; pipelines are composed through RFLD files
// and JSON reports.
//
// Exit codes: 0 success / verification passed, 1 verification failed
// (report still written), 2 usage or I/O error.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rbmo/bmo_weights.hpp"
#include "rbmo/construction.hpp"
#include "rbmo/grid.hpp"
#include "rbmo/serialize.hpp"
#include "rbmo/transforms.hpp"
#include "rbmo/verification.hpp"

namespace {

using namespace rbmo;

std::array<double, 3> to_array3(const std::vector<double>& v) {
    std::array<double, 3> a{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < v.size() && i < 3; ++i) a[i] = v[i];
    return a;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

struct GenerateOptions {
    int n = 2;
    int N = 128;
    double L = 1.0;
    std::string kind;
    std::string output;
    double value = 1.0;
    std::vector<int> wavevector{1};
    double amplitude = 1.0;
    double phase = 0.0;
    std::vector<double> center;
    double radius = -1.0;
    double floor_value = 0.0;
    double exponent = 0.5;
    double r0 = -1.0;
    double smoothing = -1.0;
    std::uint64_t seed = 1;
};

int run_generate(const GenerateOptions& opt) {
    const GridSpec spec = make_grid(opt.n, opt.N, opt.L);
    std::array<double, 3> center =
        opt.center.empty() ? box_center(spec) : to_array3(opt.center);
    const double radius = opt.radius > 0.0 ? opt.radius : 0.25 * spec.length;

    ScalarField f;
    if (opt.kind == "constant") {
        f = constant_field(spec, opt.value);
    } else if (opt.kind == "single_mode") {
        std::array<int, 3> k{0, 0, 0};
        for (std::size_t i = 0; i < opt.wavevector.size() && i < 3; ++i)
            k[i] = opt.wavevector[i];
        f = single_mode_field(spec, k, opt.amplitude, opt.phase);
    } else if (opt.kind == "ball_indicator") {
        f = ball_indicator_field(spec, center, radius, opt.floor_value);
    } else if (opt.kind == "power_weight") {
        const double r0 = opt.r0 > 0.0 ? opt.r0 : 2.0 * spec.spacing();
        f = power_weight_field(spec, center, opt.exponent, r0);
    } else if (opt.kind == "random_bmo") {
        const double smoothing =
            opt.smoothing > 0.0 ? opt.smoothing : 2.0 * spec.spacing();
        f = random_bmo_field(spec, opt.amplitude, smoothing, opt.seed);
    } else {
        throw CLI::ValidationError("--kind", "unknown field kind " + opt.kind);
    }
    write_rfld(opt.output, f);
    return 0;
}

struct TransformOptions {
    std::string op;
    std::string input;
    std::string output;
    int j = 1;
    double t = -1.0;
};

int run_transform(const TransformOptions& opt) {
    const ScalarField f = read_rfld(opt.input);
    ScalarField out;
    if (opt.op == "riesz") {
        out = riesz(f, opt.j);
    } else if (opt.op == "hilbert") {
        out = hilbert_circle(f);
    } else if (opt.op == "poisson") {
        const double t = opt.t > 0.0 ? opt.t : 0.05 * f.spec.length;
        out = poisson_extend(f, t);
    } else if (opt.op == "maximal") {
        out = maximal_dyadic(f);
    } else {
        throw CLI::ValidationError("--op", "unknown transform " + opt.op);
    }
    write_rfld(opt.output, out);
    return 0;
}

struct AnalyzeOptions {
    std::string metric;
    std::string input;
    std::string output;
    std::string profile;
    double p = 2.0;
    double q = 2.0;
    int min_level = 0;
    int max_level = -1;
};

int run_analyze(const AnalyzeOptions& opt) {
    const ScalarField f = read_rfld(opt.input);
    const int max_level = opt.max_level >= 0 ? opt.max_level : f.spec.max_level();

    CubeSupremumReport report;
    if (opt.metric == "bmo") {
        report = bmo_norm(f, opt.min_level, max_level);
    } else if (opt.metric == "ap") {
        report = ap_characteristic(f, opt.p, opt.min_level, max_level);
    } else if (opt.metric == "rhi") {
        report = reverse_holder_constant(f, opt.q, opt.min_level, max_level);
    } else {
        throw CLI::ValidationError("--metric", "unknown metric " + opt.metric);
    }
    write_json(opt.output, to_json(report));
    if (!opt.profile.empty()) emit_profile(report, opt.profile);
    return 0;
}

struct ConstructOptions {
    std::string input;
    std::string output;
    std::string dir;
    BuildConfig cfg;
};

int run_construct(const ConstructOptions& opt) {
    const ScalarField f = read_rfld(opt.input);
    const ConstructionResult result = build_factorization(f, opt.cfg);

    const std::filesystem::path manifest_path(opt.output);
    const std::filesystem::path dir =
        opt.dir.empty() ? (manifest_path.has_parent_path() ? manifest_path.parent_path()
                                                           : std::filesystem::path("."))
                        : std::filesystem::path(opt.dir);
    std::filesystem::create_directories(dir);
    write_rfld(dir / "g1.rfld", result.g1);
    write_rfld(dir / "g2.rfld", result.g2);
    write_rfld(dir / "v.rfld", result.v);
    write_json(manifest_path,
               construction_manifest(result, "g1.rfld", "g2.rfld", "v.rfld"));
    return 0;
}

struct VerifyOptions {
    std::string check;
    std::string input;
    std::string output;
    std::string profile_dir;
    double epsilon = -1.0;
    double t0 = -1.0;
    std::vector<double> t_list;
    double t_min = -1.0;
    double t_step = -1.0;
    int t_count = 9;
    double q = 2.0;
    double rho = 1.0;
    int min_level = 0;
    int max_level = 5;
    int level = 0;
    std::vector<int> index;
    double expansion = 4.0;
};

int run_verify(const VerifyOptions& opt) {
    VerificationReport report;
    if (opt.check == "phi_tail") {
        // geometry-only check; the grid comes from the input field header
        const ScalarField f = read_rfld(opt.input);
        DyadicCube cube;
        cube.level = opt.level;
        for (std::size_t i = 0; i < opt.index.size() && i < 3; ++i)
            cube.index[i] = opt.index[i];
        report.check = "phi_tail";
        report.constants["value"] = phi_tail_norm(f.spec, cube, opt.expansion);
        report.constants["expansion"] = opt.expansion;
        if (report.constants["value"] == 0.0)
            report.notes.push_back("expanded cube covers the torus; complement empty");
        report.pass = true;
    } else {
        const ScalarField f = read_rfld(opt.input);
        const double L = f.spec.length;
        const double default_eps = (f.spec.dim - 1.0) / f.spec.dim + 0.1;
        const double eps = opt.epsilon > 0.0 ? opt.epsilon : default_eps;

        if (opt.check == "majorization") {
            const double t0 = opt.t0 > 0.0 ? opt.t0 : 0.05 * L;
            std::vector<double> ts = opt.t_list;
            if (ts.empty()) ts = {0.05 * L, 0.1 * L};
            report = check_majorization(f, eps, t0, ts);
        } else if (opt.check == "subharmonicity") {
            const double t_min = opt.t_min > 0.0 ? opt.t_min : 0.1 * L;
            const double t_step = opt.t_step > 0.0 ? opt.t_step : 0.005 * L;
            std::vector<double> heights;
            for (int i = 0; i < opt.t_count; ++i) heights.push_back(t_min + i * t_step);
            report = check_subharmonicity(f, eps, heights, t_step);
        } else if (opt.check == "key_inequality") {
            std::vector<double> ts = opt.t_list;
            if (ts.empty()) ts = {L / 16.0, L / 8.0, L / 4.0};
            report = check_key_inequality(f, opt.q, ts);
        } else if (opt.check == "sufficiency") {
            report = check_sufficiency(f, opt.rho, opt.min_level, opt.max_level);
        } else {
            throw CLI::ValidationError("--check", "unknown check " + opt.check);
        }
    }
    write_json(opt.output, to_json(report));
    if (!opt.profile_dir.empty()) emit_profile(report, opt.profile_dir);
    return report.pass ? 0 : 1;
}

struct RoundtripOptions {
    std::string input;
    std::string output;
    std::string profile_dir;
    BuildConfig cfg;
};

int run_roundtrip(const RoundtripOptions& opt) {
    const ScalarField f = read_rfld(opt.input);
    VerificationReport report;
    try {
        report = roundtrip(f, opt.cfg);
    } catch (const std::runtime_error& e) {
        report.check = "roundtrip";
        report.pass = false;
        report.notes.push_back(std::string("construction failed: ") + e.what());
    }
    write_json(opt.output, to_json(report));
    if (!opt.profile_dir.empty()) emit_profile(report, opt.profile_dir);
    return report.pass ? 0 : 1;
}

void add_build_flags(CLI::App* cmd, BuildConfig& cfg) {
    cmd->add_option("--tau", cfg.tau, "A2 threshold for the alpha search");
    cmd->add_option("--sigma", cfg.sigma, "safety factor on operator norm estimates");
    cmd->add_option("--probes", cfg.probe_count, "probe count for norm estimation");
    cmd->add_option("--iterations", cfg.iterations, "iterations per probe");
    cmd->add_option("--seed", cfg.seed, "probe RNG seed");
    cmd->add_option("--tail-tol", cfg.tail_tol, "series truncation tolerance");
    cmd->add_option("--kmax", cfg.k_max, "series length cap");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral Riesz-transform toolkit on periodic grids"};
    app.require_subcommand(1);

    GenerateOptions gen;
    CLI::App* generate = app.add_subcommand("generate", "sample a field into an RFLD file");
    generate->add_option("--n", gen.n, "dimension (1..3)")->required();
    generate->add_option("--N", gen.N, "points per axis (power of two)")->required();
    generate->add_option("--L", gen.L, "box period")->required();
    generate->add_option("--kind", gen.kind,
                         "constant|single_mode|ball_indicator|power_weight|random_bmo")
        ->required();
    generate->add_option("--output,-o", gen.output, "output RFLD path")->required();
    generate->add_option("--value", gen.value, "constant value");
    generate->add_option("--wavevector", gen.wavevector, "integer mode (single_mode)")
        ->delimiter(',');
    generate->add_option("--amplitude", gen.amplitude, "amplitude (single_mode, random_bmo)");
    generate->add_option("--phase", gen.phase, "phase (single_mode)");
    generate->add_option("--center", gen.center, "center coordinates")->delimiter(',');
    generate->add_option("--radius", gen.radius, "ball radius (default L/4)");
    generate->add_option("--floor", gen.floor_value, "additive floor (ball_indicator)");
    generate->add_option("--exponent", gen.exponent, "power-weight exponent");
    generate->add_option("--r0", gen.r0, "regularization radius (default 2L/N)");
    generate->add_option("--smoothing", gen.smoothing, "mollifier scale (default 2L/N)");
    generate->add_option("--seed", gen.seed, "RNG seed (random_bmo)");

    TransformOptions tr;
    CLI::App* transform = app.add_subcommand("transform", "apply an operator to a field");
    transform->add_option("--op", tr.op, "riesz|hilbert|poisson|maximal")->required();
    transform->add_option("--input,-i", tr.input, "input RFLD")->required();
    transform->add_option("--output,-o", tr.output, "output RFLD")->required();
    transform->add_option("--j", tr.j, "Riesz component (1..n)");
    transform->add_option("--t", tr.t, "Poisson height (default 0.05 L)");

    AnalyzeOptions an;
    CLI::App* analyze = app.add_subcommand("analyze", "cube-supremum scan of a field");
    analyze->add_option("--metric", an.metric, "bmo|ap|rhi")->required();
    analyze->add_option("--input,-i", an.input, "input RFLD")->required();
    analyze->add_option("--output,-o", an.output, "report JSON path")->required();
    analyze->add_option("--profile", an.profile, "per-level CSV path");
    analyze->add_option("--p", an.p, "A_p exponent");
    analyze->add_option("--q", an.q, "reverse Hoelder exponent");
    analyze->add_option("--min-level", an.min_level, "coarsest dyadic level");
    analyze->add_option("--max-level", an.max_level, "finest dyadic level (default log2 N)");

    ConstructOptions co;
    CLI::App* construct = app.add_subcommand(
        "construct", "factorize f = (g1/g2)^alpha and write the certificate manifest");
    construct->add_option("--input,-i", co.input, "input RFLD")->required();
    construct->add_option("--output,-o", co.output, "manifest JSON path")->required();
    construct->add_option("--dir", co.dir, "directory for g1/g2/v fields");
    add_build_flags(construct, co.cfg);

    VerifyOptions ve;
    CLI::App* verify = app.add_subcommand("verify", "run one inequality check");
    verify->add_option("--check", ve.check,
                       "majorization|subharmonicity|key_inequality|sufficiency|phi_tail")
        ->required();
    verify->add_option("--input,-i", ve.input, "input RFLD")->required();
    verify->add_option("--output,-o", ve.output, "report JSON path")->required();
    verify->add_option("--profile-dir", ve.profile_dir, "directory for CSV profiles");
    verify->add_option("--epsilon", ve.epsilon, "power (default (n-1)/n + 0.1)");
    verify->add_option("--t0", ve.t0, "base height (majorization)");
    verify->add_option("--t", ve.t_list, "heights")->delimiter(',');
    verify->add_option("--t-min", ve.t_min, "lowest slab height (subharmonicity)");
    verify->add_option("--t-step", ve.t_step, "slab spacing (subharmonicity)");
    verify->add_option("--t-count", ve.t_count, "slab height count (subharmonicity)");
    verify->add_option("--q", ve.q, "key-inequality exponent");
    verify->add_option("--rho", ve.rho, "sufficiency power in (0,1]");
    verify->add_option("--min-level", ve.min_level, "coarsest RHI level (sufficiency)");
    verify->add_option("--max-level", ve.max_level, "finest RHI level (sufficiency)");
    verify->add_option("--level", ve.level, "cube level (phi_tail)");
    verify->add_option("--index", ve.index, "cube index (phi_tail)")->delimiter(',');
    verify->add_option("--expansion", ve.expansion, "cube expansion factor (phi_tail)");

    RoundtripOptions rt;
    CLI::App* round = app.add_subcommand("roundtrip", "full factorize-and-verify cycle");
    round->add_option("--input,-i", rt.input, "input RFLD")->required();
    round->add_option("--output,-o", rt.output, "report JSON path")->required();
    round->add_option("--profile-dir", rt.profile_dir, "directory for CSV profiles");
    add_build_flags(round, rt.cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) return run_generate(gen);
        if (*transform) return run_transform(tr);
        if (*analyze) return run_analyze(an);
        if (*construct) return run_construct(co);
        if (*verify) return run_verify(ve);
        if (*round) return run_roundtrip(rt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
