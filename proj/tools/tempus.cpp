// Command-line front end: every experiment is a subcommand with a config
// echo (manifest) and seed-derived random streams, so runs reproduce
// byte-for-byte.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tempus/branchnet.hpp"
#include "tempus/corkscrew.hpp"
#include "tempus/cosmology.hpp"
#include "tempus/decoherence.hpp"
#include "tempus/errors.hpp"
#include "tempus/numerics.hpp"
#include "tempus/rng.hpp"
#include "tempus/schulman.hpp"
#include "tempus/suite.hpp"
#include "tempus/symmetry.hpp"
#include "tempus/version.hpp"
#include "tempus/wigner.hpp"

namespace {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Range syntax "start:stop:count"; geometric = true spaces logarithmically.
std::vector<double> parse_range(const std::string& text, bool geometric) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw tempus::ConfigInvalid("bad range (expected start:stop:count): " + text);
    std::vector<double> out;
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        double u = static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(geometric ? lo * std::pow(hi / lo, u) : lo + (hi - lo) * u);
    }
    return out;
}

struct RunContext {
    std::string subcommand;
    std::uint64_t master_seed = 42;
    json parameters;

    std::uint64_t stream_seed() const {
        return tempus::derive_seed(master_seed, subcommand);
    }

    json manifest() const {
        json m;
        m["tool"] = "tempus";
        m["version"] = tempus::kVersion;
        m["subcommand"] = subcommand;
        m["seed"] = master_seed;
        m["parameters"] = parameters;
        return m;
    }

    std::string manifest_hash() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(tempus::fnv1a64(manifest().dump())));
        return buf;
    }
};

// Results stream: stdout by default, a file when --csv/--out was given (the
// manifest then lands in a sidecar).
class OutputSink {
  public:
    OutputSink(const std::string& path, const RunContext& ctx) : path_(path) {
        if (!path_.empty()) {
            file_.open(path_);
            if (!file_) throw tempus::ConfigInvalid("cannot open output file: " + path_);
            std::ofstream mf(path_ + ".manifest.json");
            mf << ctx.manifest().dump(2) << "\n";
        }
        out() << "# manifest " << ctx.manifest_hash() << "\n";
        out() << "# tempus " << tempus::kVersion << " " << ctx.subcommand << " seed "
              << ctx.master_seed << "\n";
    }

    std::ostream& out() { return path_.empty() ? std::cout : file_; }

  private:
    std::string path_;
    std::ofstream file_;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw tempus::ConfigInvalid("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw tempus::ConfigInvalid(std::string("config parse error: ") + e.what());
    }
    // A manifest is itself a valid config: rerunning from it reproduces the
    // run byte for byte.
    if (cfg.contains("parameters") && cfg.contains("subcommand")) {
        json flat = cfg["parameters"];
        if (cfg.contains("seed")) flat["seed"] = cfg["seed"];
        return flat;
    }
    return cfg;
}

// Flags override file values: a config key applies only when the flag was
// absent on the command line.
template <typename T>
void fill_from_config(CLI::App* cmd, const json& cfg, const std::string& name, T& target) {
    if (!cfg.contains(name)) return;
    auto* opt = cmd->get_option_no_throw("--" + name);
    if (opt != nullptr && opt->count() > 0) return;
    try {
        target = cfg.at(name).get<T>();
    } catch (const std::exception&) {
        throw tempus::ConfigInvalid("config field has the wrong type: " + name);
    }
}

// ---------------------------------------------------------------------------

int cmd_classify(const std::string& system, bool as_json, bool as_csv, RunContext& ctx,
                 const std::string& out_path) {
    ctx.parameters = {{"system", system}};
    OutputSink sink(out_path, ctx);
    auto catalog = tempus::classify_catalog(ctx.stream_seed());

    auto wanted = [&](const std::string& id) { return system == "all" || system == id; };

    if (as_json) {
        json rows = json::array();
        for (const auto& rep : catalog) {
            if (!wanted(rep.system)) continue;
            json row;
            row["system"] = rep.system;
            row["time_reversal_invariant"] = rep.tri;
            row["trajectories"] = json::array();
            for (const auto& tv : rep.trajectories) {
                json t;
                t["label"] = tv.label;
                t["verdict"] = tempus::to_string(tv.report.verdict);
                if (tv.report.period) t["period"] = *tv.report.period;
                row["trajectories"].push_back(t);
            }
            if (rep.t_symmetry) row["t_symmetry"] = *rep.t_symmetry;
            rows.push_back(row);
        }
        sink.out() << rows.dump(2) << "\n";
        return 0;
    }

    sink.out() << (as_csv ? "system,tri,trajectory,verdict,period\n" : "");
    for (const auto& rep : catalog) {
        if (!wanted(rep.system)) continue;
        for (const auto& tv : rep.trajectories) {
            if (as_csv) {
                sink.out() << rep.system << ',' << (rep.tri ? 1 : 0) << ',' << tv.label << ','
                           << tempus::to_string(tv.report.verdict) << ','
                           << (tv.report.period ? format_g17(*tv.report.period) : "") << "\n";
            } else {
                sink.out() << rep.system << "  tri=" << (rep.tri ? "yes" : "no ") << "  "
                           << tv.label << ": " << tempus::to_string(tv.report.verdict);
                if (tv.report.period) sink.out() << " (period " << *tv.report.period << ")";
                sink.out() << "\n";
            }
        }
    }
    return 0;
}

int cmd_cosmo(int k, double m, double lambda, const std::string& ic, double t_end,
              double step, bool adaptive, RunContext& ctx, const std::string& out_path) {
    double a_dot = 0.0, phi = 0.0, phi_dot = 0.0;
    if (std::sscanf(ic.c_str(), "%lf,%lf,%lf", &a_dot, &phi, &phi_dot) != 3)
        throw tempus::ConfigInvalid("bad --ic (expected adot,phi,phidot): " + ic);
    ctx.parameters = {{"k", k},        {"m", m},       {"lambda", lambda}, {"ic", ic},
                      {"t-end", t_end}, {"step", step}, {"adaptive", adaptive}};
    OutputSink sink(out_path, ctx);

    tempus::cosmo::FRWModel model;
    model.k = k;
    model.field_mass = m;
    model.lambda = lambda;
    tempus::cosmo::CosmoState state;
    state.a_dot = a_dot;
    state.phi = phi;
    state.phi_dot = phi_dot;
    state.a = tempus::cosmo::solve_constraint_for_a(a_dot, phi, phi_dot, model).a;

    tempus::cosmo::EvolveOptions opts;
    opts.step = step;
    opts.adaptive = adaptive;
    auto run = tempus::cosmo::evolve_cosmo(state, model, t_end, opts);

    sink.out() << "t,a,adot,phi,phidot,residual\n";
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        auto s = tempus::cosmo::state_at(run, i);
        sink.out() << format_g17(s.t) << ',' << format_g17(s.a) << ',' << format_g17(s.a_dot)
                   << ',' << format_g17(s.phi) << ',' << format_g17(s.phi_dot) << ','
                   << format_g17(run.residuals[i]) << "\n";
    }
    if (run.singular_end) std::cerr << "note: run ended at the singularity\n";
    return 0;
}

int cmd_measure(const std::string& mode, double cube, const std::string& eps_range,
                std::size_t n, RunContext& ctx, const std::string& out_path, double m,
                int k, double lambda) {
    ctx.parameters = {{"mode", mode}, {"L", cube}, {"eps", eps_range}, {"n", n},
                      {"m", m},       {"k", k},    {"lambda", lambda}};
    OutputSink sink(out_path, ctx);

    tempus::corkscrew::MeasureScanConfig config;
    config.cube_side = cube;
    config.epsilons = parse_range(eps_range, true);
    config.n_samples = n;
    config.seed = ctx.stream_seed();
    config.model.k = k;
    config.model.field_mass = m;
    config.model.lambda = lambda;

    if (mode == "axis") {
        config.mode = tempus::corkscrew::ScanMode::AxisSet;
        auto result = tempus::corkscrew::scan_axis_measure(config);
        sink.out() << "epsilon,fraction,stderr,predicted\n";
        for (const auto& row : result.rows)
            sink.out() << format_g17(row.epsilon) << ',' << format_g17(row.fraction) << ','
                       << format_g17(row.stderr_) << ',' << format_g17(row.predicted) << "\n";
        std::cerr << "loglog slope " << result.loglog_fit.slope << " +- "
                  << result.loglog_fit.slope_ci95 << "\n";
        return 0;
    }
    if (mode == "tube") {
        config.mode = tempus::corkscrew::ScanMode::SolutionTube;
        tempus::corkscrew::SurfaceBuildOptions build;
        build.spacing = *std::min_element(config.epsilons.begin(), config.epsilons.end()) /
                        4.0 * 0.99;
        auto result = tempus::corkscrew::tube_scan_with_refinement(config, build);
        sink.out() << "epsilon,fraction,stderr,predicted\n";
        for (const auto& row : result.rows)
            sink.out() << format_g17(row.epsilon) << ',' << format_g17(row.fraction) << ','
                       << format_g17(row.stderr_) << ',' << format_g17(row.predicted) << "\n";
        std::cerr << "loglog slope " << result.loglog_fit.slope << " +- "
                  << result.loglog_fit.slope_ci95 << "\n";
        return 0;
    }
    if (mode == "dynamic") {
        config.mode = tempus::corkscrew::ScanMode::Dynamic;
        auto census = tempus::corkscrew::dynamic_symmetry_census(config);
        sink.out() << "n,empirical,predicted,combined_stderr,agree\n";
        sink.out() << census.n << ',' << format_g17(census.empirical_fraction) << ','
                   << format_g17(census.predicted_fraction) << ','
                   << format_g17(census.combined_stderr) << ','
                   << (census.agree_within_3se ? 1 : 0) << "\n";
        return census.agree_within_3se ? 0 : 1;
    }
    throw tempus::ConfigInvalid("unknown --mode: " + mode);
}

int cmd_deco(const std::string& kernel, const std::string& t_range, RunContext& ctx,
             const std::string& out_path) {
    ctx.parameters = {{"kernel", kernel}, {"t-grid", t_range}};
    OutputSink sink(out_path, ctx);

    tempus::deco::SpectralState state;
    double param = 0.0;
    if (std::sscanf(kernel.c_str(), "lorentzian:gamma=%lf", &param) == 1) {
        state = tempus::deco::lorentzian_state(param);
    } else if (std::sscanf(kernel.c_str(), "gaussian:sigma=%lf", &param) == 1) {
        state = tempus::deco::gaussian_state(param);
    } else {
        throw tempus::ConfigInvalid(
            "bad --kernel (lorentzian:gamma=G or gaussian:sigma=S): " + kernel);
    }
    auto obs = tempus::deco::flat_observable(state.grid);
    auto t_grid = parse_range(t_range, false);
    auto curve = tempus::deco::offdiag_envelope(state, obs, t_grid);

    sink.out() << "t,mean,envelope\n";
    for (std::size_t i = 0; i < curve.t.size(); ++i)
        sink.out() << format_g17(curve.t[i]) << ',' << format_g17(curve.mean[i]) << ','
                   << format_g17(curve.envelope[i]) << "\n";
    std::cerr << "twin asymmetry " << curve.twin_asymmetry << "\n";
    return 0;
}

int cmd_wigner(const std::string& hamiltonian, double omega, double sigma,
               const std::string& grid_spec, RunContext& ctx, const std::string& out_path) {
    ctx.parameters = {{"hamiltonian", hamiltonian},
                      {"omega", omega},
                      {"sigma", sigma},
                      {"grid", grid_spec}};
    OutputSink sink(out_path, ctx);

    if (hamiltonian != "sho")
        throw tempus::ConfigInvalid("unknown --hamiltonian (only: sho): " + hamiltonian);
    int nq = 0, np = 0;
    if (std::sscanf(grid_spec.c_str(), "%dx%d", &nq, &np) != 2 || nq < 8 || np < 8 ||
        nq != np)
        throw tempus::ConfigInvalid("bad --grid (expected NxN): " + grid_spec);

    auto ham = tempus::wigner::sho_hamiltonian();
    auto grid = tempus::wigner::PhaseGrid::centered(2.5, static_cast<std::size_t>(nq));
    auto shell = tempus::wigner::wigner_energy_shell(omega, ham, sigma, grid);

    sink.out() << "q,p,value\n";
    for (std::size_t i = 0; i < grid.nq; ++i)
        for (std::size_t j = 0; j < grid.np; ++j)
            sink.out() << format_g17(grid.q_at(i)) << ',' << format_g17(grid.p_at(j)) << ','
                       << format_g17(shell.values[i * grid.np + j]) << "\n";
    return 0;
}

int cmd_branch(const std::string& graph_path, const std::string& query, RunContext& ctx,
               const std::string& out_path) {
    ctx.parameters = {{"graph", graph_path}, {"query", query}};
    OutputSink sink(out_path, ctx);

    auto graph = graph_path.empty() ? tempus::branch::reference_cascade()
                                    : tempus::branch::graph_from_json_file(graph_path);

    if (!query.empty()) {
        auto comma = query.find(',');
        if (comma == std::string::npos)
            throw tempus::ConfigInvalid("bad --query (expected A,B): " + query);
        std::string a = query.substr(0, comma);
        std::string b = query.substr(comma + 1);
        auto rel = tempus::branch::causally_related(graph, a, b);
        const char* text = rel == tempus::branch::CausalRelation::CauseOf   ? "cause_of"
                           : rel == tempus::branch::CausalRelation::EffectOf ? "effect_of"
                                                                             : "unrelated";
        sink.out() << a << ',' << b << ',' << text << "\n";
        return 0;
    }

    auto report = tempus::branch::validate_graph(graph);
    sink.out() << "valid," << (report.valid() ? 1 : 0) << "\n";
    for (const auto& v : report.violations) sink.out() << "violation," << v.message << "\n";
    if (report.valid()) {
        auto arrow = tempus::branch::global_arrow(graph);
        sink.out() << "source," << arrow.source_id << "\n";
        sink.out() << "orientation,"
                   << (arrow.orientation == tempus::branch::Orientation::Forward ? "forward"
                                                                                 : "reversed")
                   << "\n";
        auto mirror = tempus::branch::is_mirror_symmetric(graph);
        sink.out() << "mirror_symmetric," << (mirror.symmetric ? 1 : 0) << "\n";
    }
    return report.valid() ? 0 : 1;
}

int cmd_schulman(std::size_t na, std::size_t nb, double lambda, std::size_t steps,
                 std::size_t runs, const std::string& scenario, RunContext& ctx,
                 const std::string& out_path) {
    ctx.parameters = {{"na", na},     {"nb", nb},   {"lambda", lambda},
                      {"steps", steps}, {"runs", runs}, {"scenario", scenario}};
    OutputSink sink(out_path, ctx);

    tempus::branch::UrnPair pair;
    pair.n_a = na;
    pair.n_b = nb;
    pair.lambda = lambda;
    auto mode = scenario == "mirror" ? tempus::branch::Scenario::Mirror
                                     : tempus::branch::Scenario::AsymmetricSizes;

    std::size_t monotone = 0, displaced = 0, symmetric = 0;
    tempus::branch::SchulmanResult first;
    for (std::size_t r = 0; r < runs; ++r) {
        auto res = tempus::branch::schulman_sim(
            pair, steps, tempus::derive_seed(ctx.stream_seed(), r), mode);
        if (r == 0) first = res;
        monotone += res.composite_monotone ? 1 : 0;
        displaced += res.displacement_detected ? 1 : 0;
        symmetric += res.mirror_symmetric ? 1 : 0;
    }

    sink.out() << "step,s_a,s_b,s_composite\n";
    for (std::size_t s = 0; s < first.s_a.size(); ++s)
        sink.out() << s << ',' << format_g17(first.s_a[s]) << ',' << format_g17(first.s_b[s])
                   << ',' << format_g17(first.s_composite[s]) << "\n";

    if (mode == tempus::branch::Scenario::AsymmetricSizes) {
        std::cerr << "monotone " << monotone << "/" << runs << ", displaced " << displaced
                  << "/" << runs << "\n";
    } else {
        std::cerr << "mirror-symmetric " << symmetric << "/" << runs << "\n";
    }
    return 0;
}

int cmd_reproduce(const std::string& suite_name, RunContext& ctx,
                  const std::string& out_path) {
    ctx.parameters = {{"suite", suite_name}};
    OutputSink sink(out_path, ctx);
    auto scale = suite_name == "quick" ? tempus::suite::Scale::Quick
                                       : tempus::suite::Scale::Full;
    bool all_passed = true;
    sink.out() << "id,name,passed,seconds\n";
    for (int id = 1; id <= tempus::suite::kNumChecks; ++id) {
        auto res = tempus::suite::run_check(id, scale);
        all_passed &= res.passed;
        sink.out() << res.id << ',' << res.name << ',' << (res.passed ? "PASS" : "FAIL")
                   << ',' << format_g17(res.seconds) << "\n";
        std::cerr << (res.passed ? "PASS" : "FAIL") << " " << res.id << " " << res.name
                  << " (" << res.seconds << " s)\n";
        if (!res.passed) std::cerr << "       " << res.detail << "\n";
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tempus: numerical experiments on time asymmetry"};
    app.require_subcommand(1);

    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string config_path;
    app.add_option("--seed", seed, "master seed; each subcommand derives its own stream");
    app.add_option("--threads", threads, "worker cap (default: TEMPUS_THREADS or hardware)");
    app.add_option("--config", config_path, "JSON config file; flags override its values");

    // classify
    auto* classify = app.add_subcommand("classify", "taxonomy of the four reference systems");
    std::string cl_system = "all";
    bool cl_json = false, cl_csv = false;
    std::string cl_out;
    classify->add_option("--system", cl_system, "a|b|c|d|all")
        ->check(CLI::IsMember({"a", "b", "c", "d", "all"}));
    classify->add_flag("--json", cl_json, "emit JSON");
    classify->add_flag("--csv", cl_csv, "emit CSV rows");
    classify->add_option("--out", cl_out, "write results to a file (with manifest sidecar)");

    // cosmo
    auto* cosmo_cmd = app.add_subcommand("cosmo", "FRW + scalar field evolution");
    int co_k = 1;
    double co_m = 0.5, co_lambda = 0.0, co_tend = 10.0, co_step = 1e-3;
    std::string co_ic = "0,0.3,0";
    bool co_adaptive = false;
    std::string co_csv;
    cosmo_cmd->add_option("--k", co_k, "curvature -1|0|1")->check(CLI::IsMember({-1, 0, 1}));
    cosmo_cmd->add_option("--m", co_m, "scalar field mass");
    cosmo_cmd->add_option("--lambda", co_lambda, "cosmological constant");
    cosmo_cmd->add_option("--ic", co_ic, "reduced initial data adot,phi,phidot");
    cosmo_cmd->add_option("--t-end", co_tend, "final time");
    cosmo_cmd->add_option("--step", co_step, "integration step");
    cosmo_cmd->add_flag("--adaptive", co_adaptive, "adaptive RK45 instead of fixed RK4");
    cosmo_cmd->add_option("--csv", co_csv, "output CSV path");

    // measure
    auto* measure = app.add_subcommand("measure", "corkscrew measure scans");
    std::string me_mode = "axis", me_eps = "0.01:0.16:8", me_csv;
    double me_cube = 2.0, me_m = 0.5, me_lambda = 0.0;
    int me_k = 1;
    std::size_t me_n = 1'000'000;
    measure->add_option("--mode", me_mode, "axis|tube|dynamic")
        ->check(CLI::IsMember({"axis", "tube", "dynamic"}));
    measure->add_option("--L", me_cube, "cube side");
    measure->add_option("--eps", me_eps, "epsilon range start:stop:count (geometric)");
    measure->add_option("--n", me_n, "samples per epsilon");
    measure->add_option("--m", me_m, "scalar field mass");
    measure->add_option("--k", me_k, "curvature")->check(CLI::IsMember({-1, 0, 1}));
    measure->add_option("--lambda", me_lambda, "cosmological constant");
    measure->add_option("--csv", me_csv, "output CSV path");

    // deco
    auto* deco_cmd = app.add_subcommand("deco", "spectral decoherence curves");
    std::string de_kernel = "lorentzian:gamma=0.3", de_tgrid = "-20:20:401", de_csv;
    deco_cmd->add_option("--kernel", de_kernel, "lorentzian:gamma=G | gaussian:sigma=S");
    deco_cmd->add_option("--t-grid", de_tgrid, "time grid start:stop:count (linear)");
    deco_cmd->add_option("--csv", de_csv, "output CSV path");

    // wigner
    auto* wig = app.add_subcommand("wigner", "smoothed Wigner energy shells");
    std::string wi_ham = "sho", wi_grid = "512x512", wi_csv;
    double wi_omega = 1.0, wi_sigma = 0.05;
    wig->add_option("--hamiltonian", wi_ham, "hamiltonian name (sho)");
    wig->add_option("--omega", wi_omega, "shell energy");
    wig->add_option("--sigma", wi_sigma, "smoothing width");
    wig->add_option("--grid", wi_grid, "grid NxN");
    wig->add_option("--csv", wi_csv, "output CSV path");

    // branch
    auto* br = app.add_subcommand("branch", "branch-system graph queries");
    std::string br_graph, br_query, br_out;
    br->add_option("--graph", br_graph, "graph JSON (defaults to the reference cascade)");
    br->add_option("--query", br_query, "causal query A,B");
    br->add_option("--out", br_out, "output path");

    // schulman
    auto* sch = app.add_subcommand("schulman", "coupled-urn experiments");
    std::size_t sc_na = 200, sc_nb = 20, sc_steps = 20'000, sc_runs = 1;
    double sc_lambda = 0.01;
    std::string sc_scenario = "asymmetric", sc_csv;
    sch->add_option("--na", sc_na, "balls in A");
    sch->add_option("--nb", sc_nb, "balls in B");
    sch->add_option("--lambda", sc_lambda, "coupling probability per step");
    sch->add_option("--steps", sc_steps, "steps per run");
    sch->add_option("--runs", sc_runs, "ensemble size");
    sch->add_option("--scenario", sc_scenario, "asymmetric|mirror")
        ->check(CLI::IsMember({"asymmetric", "mirror"}));
    sch->add_option("--csv", sc_csv, "output CSV path");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "run the verification suite");
    std::string re_suite = "quick", re_out;
    rep->add_option("--suite", re_suite, "quick|full")
        ->check(CLI::IsMember({"quick", "full"}));
    rep->add_option("--out", re_out, "output path");

    // Let --seed/--threads/--config appear after the subcommand too.
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") ? 0 : 2;
    }

    try {
        json cfg = load_config(config_path);
        if (threads > 0) tempus::set_max_threads(threads);
        if (cfg.contains("seed") && app.get_option("--seed")->count() == 0)
            seed = cfg["seed"].get<std::uint64_t>();

        RunContext ctx;
        ctx.master_seed = seed;

        if (classify->parsed()) {
            ctx.subcommand = "classify";
            fill_from_config(classify, cfg, "system", cl_system);
            return cmd_classify(cl_system, cl_json, cl_csv, ctx, cl_out);
        }
        if (cosmo_cmd->parsed()) {
            ctx.subcommand = "cosmo";
            fill_from_config(cosmo_cmd, cfg, "k", co_k);
            fill_from_config(cosmo_cmd, cfg, "m", co_m);
            fill_from_config(cosmo_cmd, cfg, "lambda", co_lambda);
            fill_from_config(cosmo_cmd, cfg, "ic", co_ic);
            fill_from_config(cosmo_cmd, cfg, "t-end", co_tend);
            fill_from_config(cosmo_cmd, cfg, "step", co_step);
            return cmd_cosmo(co_k, co_m, co_lambda, co_ic, co_tend, co_step, co_adaptive, ctx,
                             co_csv);
        }
        if (measure->parsed()) {
            ctx.subcommand = "measure";
            fill_from_config(measure, cfg, "mode", me_mode);
            fill_from_config(measure, cfg, "L", me_cube);
            fill_from_config(measure, cfg, "eps", me_eps);
            fill_from_config(measure, cfg, "n", me_n);
            fill_from_config(measure, cfg, "m", me_m);
            fill_from_config(measure, cfg, "k", me_k);
            fill_from_config(measure, cfg, "lambda", me_lambda);
            return cmd_measure(me_mode, me_cube, me_eps, me_n, ctx, me_csv, me_m, me_k,
                               me_lambda);
        }
        if (deco_cmd->parsed()) {
            ctx.subcommand = "deco";
            fill_from_config(deco_cmd, cfg, "kernel", de_kernel);
            fill_from_config(deco_cmd, cfg, "t-grid", de_tgrid);
            return cmd_deco(de_kernel, de_tgrid, ctx, de_csv);
        }
        if (wig->parsed()) {
            ctx.subcommand = "wigner";
            fill_from_config(wig, cfg, "omega", wi_omega);
            fill_from_config(wig, cfg, "sigma", wi_sigma);
            fill_from_config(wig, cfg, "grid", wi_grid);
            return cmd_wigner(wi_ham, wi_omega, wi_sigma, wi_grid, ctx, wi_csv);
        }
        if (br->parsed()) {
            ctx.subcommand = "branch";
            fill_from_config(br, cfg, "graph", br_graph);
            fill_from_config(br, cfg, "query", br_query);
            return cmd_branch(br_graph, br_query, ctx, br_out);
        }
        if (sch->parsed()) {
            ctx.subcommand = "schulman";
            fill_from_config(sch, cfg, "na", sc_na);
            fill_from_config(sch, cfg, "nb", sc_nb);
            fill_from_config(sch, cfg, "lambda", sc_lambda);
            fill_from_config(sch, cfg, "steps", sc_steps);
            fill_from_config(sch, cfg, "runs", sc_runs);
            fill_from_config(sch, cfg, "scenario", sc_scenario);
            return cmd_schulman(sc_na, sc_nb, sc_lambda, sc_steps, sc_runs, sc_scenario, ctx,
                                sc_csv);
        }
        if (rep->parsed()) {
            ctx.subcommand = "reproduce";
            fill_from_config(rep, cfg, "suite", re_suite);
            return cmd_reproduce(re_suite, ctx, re_out);
        }
    } catch (const tempus::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
