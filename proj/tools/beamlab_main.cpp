// Command-line laboratory: discretize the two coupled beam systems, then
// verify, scan, probe, simulate, or sweep per the subcommand. Every run
// writes report.json (resolved config + results) plus the command's CSV into
// --out; identical config and seed reproduce identical bytes.

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beamlab/config.hpp"
#include "beamlab/evolve.hpp"
#include "beamlab/grid.hpp"
#include "beamlab/model.hpp"
#include "beamlab/regionmap.hpp"
#include "beamlab/report.hpp"
#include "beamlab/resolvent.hpp"
#include "beamlab/rng.hpp"
#include "beamlab/spectrum.hpp"

using namespace beamlab;

namespace {

struct RunSetup {
    std::string command;
    std::filesystem::path out_dir;
    Config cfg;
    SystemId system = SystemId::System1;
    ModelParams params;
    int n = 64;
    double L = M_PI;
    std::uint64_t seed = 42;
    int jobs = 1;
};

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        // globals
        "system", "n", "L", "seed", "jobs",
        // model constants
        "rho1", "rho2", "rho3", "kappa", "b", "delta", "beta", "gamma", "mu", "mu1",
        "mu2", "K", "tau", "sigma", "xi",
        // per-command sections
        "verify.states",
        "resolvent-scan.lambda_min", "resolvent-scan.lambda_max",
        "resolvent-scan.count",
        "probe.id", "probe.lambda_min", "probe.lambda_max", "probe.count",
        "probe.samples",
        "simulate.t_end", "simulate.steps", "simulate.method",
        "simulate.tail_fraction",
        "region-map.lattice", "region-map.checks"};
    return keys;
}

ModelParams params_from_config(const Config& cfg) {
    ModelParams p;
    p.rho1 = cfg.get_double("rho1", p.rho1);
    p.rho2 = cfg.get_double("rho2", p.rho2);
    p.rho3 = cfg.get_double("rho3", p.rho3);
    p.kappa = cfg.get_double("kappa", p.kappa);
    p.b = cfg.get_double("b", p.b);
    p.delta = cfg.get_double("delta", p.delta);
    p.beta = cfg.get_double("beta", p.beta);
    p.gamma = cfg.get_double("gamma", p.gamma);
    p.mu = cfg.get_double("mu", p.mu);
    p.mu1 = cfg.get_double("mu1", p.mu1);
    p.mu2 = cfg.get_double("mu2", p.mu2);
    p.bigK = cfg.get_double("K", p.bigK);
    p.tau = cfg.get_double("tau", p.tau);
    p.sigma = cfg.get_double("sigma", p.sigma);
    p.xi = cfg.get_double("xi", p.xi);
    return p;
}

JsonValue params_json(const ModelParams& p) {
    JsonValue j = JsonValue::object();
    j["rho1"] = p.rho1;
    j["rho2"] = p.rho2;
    j["rho3"] = p.rho3;
    j["kappa"] = p.kappa;
    j["b"] = p.b;
    j["delta"] = p.delta;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["mu"] = p.mu;
    j["mu1"] = p.mu1;
    j["mu2"] = p.mu2;
    j["K"] = p.bigK;
    j["tau"] = p.tau;
    j["sigma"] = p.sigma;
    j["xi"] = p.xi;
    return j;
}

JsonValue base_report(const RunSetup& s) {
    JsonValue root = JsonValue::object();
    root["schema_version"] = kReportSchemaVersion;
    root["command"] = s.command;
    JsonValue cfg = JsonValue::object();
    cfg["system"] = static_cast<int>(s.system);
    cfg["n"] = s.n;
    cfg["L"] = s.L;
    cfg["seed"] = s.seed;
    cfg["jobs"] = s.jobs;
    cfg["params"] = params_json(s.params);
    root["config"] = std::move(cfg);
    return root;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing output file: " + path.string());
}

void emit(const RunSetup& s, const JsonValue& report) {
    write_file(s.out_dir / "report.json", report.dump(2));
}

Generator make_generator(const RunSetup& s) {
    return assemble_generator(s.params, build_grid(s.n, s.L), s.system);
}

// ---- verify ----------------------------------------------------------------

int run_verify(const RunSetup& s) {
    Generator gen = make_generator(s);
    JsonValue report = base_report(s);
    int states = s.cfg.get_int("verify.states", 100);
    if (states < 1) throw ConfigError("config key 'verify.states': must be >= 1");
    report["config"]["verify"]["states"] = states;

    bool all_passed = true;

    // Energy balance: Re<BU, U>_G must equal minus the damping form.
    double worst_diss = 0.0;
    for (int k = 0; k < states; ++k) {
        StateVector U = random_state(gen, Rng::derive(s.seed, 1, k));
        double form = std::real(g_inner(gen, gen.B * U.stacked(), U.stacked()));
        double residual = std::abs(form + dissipation_form(U, gen)) /
                          std::max(1.0, std::abs(form));
        worst_diss = std::max(worst_diss, residual);
    }
    bool diss_ok = worst_diss < 1e-9;
    JsonValue diss = JsonValue::object();
    diss["states"] = states;
    diss["max_residual"] = worst_diss;
    diss["tolerance"] = 1e-9;
    diss["passed"] = diss_ok;
    report["results"]["dissipativity"] = std::move(diss);

    // Operator algebra: fractional powers compose additively.
    Rng rng(Rng::derive(s.seed, 2, 0));
    double worst_power = 0.0;
    for (int k = 0; k < 20; ++k) {
        double nu1 = rng.next_symmetric();
        double nu2 = rng.next_symmetric();
        Eigen::VectorXd x(gen.grid.n);
        for (int i = 0; i < gen.grid.n; ++i) x(i) = rng.next_symmetric();
        Eigen::VectorXd two_step =
            frac_power_apply(gen.grid, nu1, frac_power_apply(gen.grid, nu2, x));
        Eigen::VectorXd one_step = frac_power_apply(gen.grid, nu1 + nu2, x);
        worst_power =
            std::max(worst_power, (two_step - one_step).norm() / x.norm());
    }
    double chol_residual =
        (gen.chol.transpose() * gen.chol - gen.G).cwiseAbs().maxCoeff();
    bool algebra_ok = worst_power <= 1e-10 && chol_residual <= 1e-9;
    JsonValue algebra = JsonValue::object();
    algebra["max_power_residual"] = worst_power;
    algebra["cholesky_residual"] = chol_residual;
    algebra["passed"] = algebra_ok;
    report["results"]["operator_algebra"] = std::move(algebra);

    // Stationary solvability, bounded by the norm at zero frequency.
    double sc = stationary_check(gen, 16, Rng::derive(s.seed, 3, 0));
    double rn0 = resolvent_norm(gen, 0.0);
    bool stationary_ok = std::isfinite(sc) && sc <= rn0 + 1e-9;
    JsonValue stat = JsonValue::object();
    stat["max_amplification"] = sc;
    stat["resolvent_norm_at_zero"] = rn0;
    stat["passed"] = stationary_ok;
    report["results"]["stationary"] = std::move(stat);

    all_passed = diss_ok && algebra_ok && stationary_ok;
    report["results"]["passed"] = all_passed;
    emit(s, report);
    return all_passed ? 0 : 1;
}

// ---- spectrum ----------------------------------------------------------------

int run_spectrum(const RunSetup& s) {
    Generator gen = make_generator(s);
    SpectrumReport spec = compute_spectrum(gen);

    std::string csv = csv_row({"re", "im"});
    for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
        csv += csv_row({format_double(spec.eigenvalues(i).real()),
                        format_double(spec.eigenvalues(i).imag())});
    write_file(s.out_dir / "spectrum.csv", csv);

    JsonValue report = base_report(s);
    report["results"]["count"] = static_cast<int>(spec.eigenvalues.size());
    report["results"]["abscissa"] = spec.abscissa;
    report["results"]["axis_gap"] = spec.axis_gap;
    emit(s, report);
    return 0;
}

// ---- resolvent-scan ----------------------------------------------------------

int run_scan(const RunSetup& s) {
    Generator gen = make_generator(s);
    double lmin = s.cfg.get_double("resolvent-scan.lambda_min", 0.0);
    double lmax = s.cfg.get_double("resolvent-scan.lambda_max", 0.0);
    int count = s.cfg.get_int("resolvent-scan.count", 30);

    ScanReport scan_report = scan(gen, lmin, lmax, count);

    std::string csv = csv_row({"lambda", "norm"});
    for (Eigen::Index i = 0; i < scan_report.lambdas.size(); ++i)
        csv += csv_row({format_double(scan_report.lambdas(i)),
                        format_double(scan_report.norms(i))});
    write_file(s.out_dir / "scan.csv", csv);

    JsonValue report = base_report(s);
    JsonValue rc = JsonValue::object();
    rc["lambda_min"] = lmin;
    rc["lambda_max"] = lmax;
    rc["count"] = count;
    report["config"]["resolvent-scan"] = std::move(rc);

    JsonValue fit = JsonValue::object();
    fit["eta"] = scan_report.eta_fit.eta;
    fit["residual"] = scan_report.eta_fit.residual;
    fit["window_min"] = scan_report.eta_fit.window_min;
    fit["window_max"] = scan_report.eta_fit.window_max;
    fit["points"] = scan_report.eta_fit.points;
    report["results"]["eta_fit"] = std::move(fit);
    report["results"]["eta_predicted"] = scan_report.eta_predicted;
    report["results"]["lambda_max_resolved"] = scan_report.lambda_max_resolved;
    report["results"]["beyond_resolved"] = scan_report.beyond_resolved;
    emit(s, report);
    return 0;
}

// ---- probe -------------------------------------------------------------------

int run_probe(const RunSetup& s) {
    Generator gen = make_generator(s);
    std::string fallback = s.system == SystemId::System1 ? "L3" : "L12";
    std::string id_text = s.cfg.get_string("probe.id", fallback);
    ProbeId id = probe_from_name(id_text);

    // Default band: the top two decades of the resolved range (an explicit
    // lambda_min = 1 would be empty for heavily damped spectra).
    double lmin = s.cfg.get_double("probe.lambda_min", 0.0);
    double lmax = s.cfg.get_double("probe.lambda_max", 0.0);
    if (lmax == 0.0) lmax = lambda_max_resolved(gen);
    if (lmin == 0.0) lmin = lmax / 100.0;
    int count = s.cfg.get_int("probe.count", 24);
    int samples = s.cfg.get_int("probe.samples", 16);

    Eigen::VectorXd grid_lambda = log_grid(lmin, lmax, count);
    Eigen::VectorXd ratios = lemma_probe(gen, id, grid_lambda, samples, s.seed);
    bool bounded = probe_bounded(grid_lambda, ratios);

    std::string csv = csv_row({"lambda", "ratio"});
    for (Eigen::Index i = 0; i < grid_lambda.size(); ++i)
        csv += csv_row({format_double(grid_lambda(i)), format_double(ratios(i))});
    write_file(s.out_dir / "scan.csv", csv);

    std::vector<double> sorted(ratios.data(), ratios.data() + ratios.size());
    std::sort(sorted.begin(), sorted.end());
    double median = sorted.size() % 2 == 1
                        ? sorted[sorted.size() / 2]
                        : 0.5 * (sorted[sorted.size() / 2 - 1] +
                                 sorted[sorted.size() / 2]);

    JsonValue report = base_report(s);
    JsonValue pc = JsonValue::object();
    pc["id"] = probe_name(id);
    pc["lambda_min"] = lmin;
    pc["lambda_max"] = lmax;
    pc["count"] = count;
    pc["samples"] = samples;
    report["config"]["probe"] = std::move(pc);
    report["results"]["max_ratio"] = ratios.maxCoeff();
    report["results"]["median_ratio"] = median;
    report["results"]["bounded"] = bounded;
    emit(s, report);
    return bounded ? 0 : 1;
}

// ---- simulate ----------------------------------------------------------------

int run_simulate(const RunSetup& s) {
    Generator gen = make_generator(s);
    double t_end = s.cfg.get_double("simulate.t_end", 10.0);
    int steps = s.cfg.get_int("simulate.steps", 1000);
    double tail_fraction = s.cfg.get_double("simulate.tail_fraction", 0.3);
    std::string method_text =
        s.cfg.get_string("simulate.method", "implicit-midpoint");
    PropagationMethod method;
    if (method_text == "implicit-midpoint")
        method = PropagationMethod::implicit_midpoint;
    else if (method_text == "eigen-exact")
        method = PropagationMethod::eigen_exact;
    else
        throw ConfigError("config key 'simulate.method': expected "
                          "implicit-midpoint or eigen-exact, got '" +
                          method_text + "'");

    StateVector U0 = random_state(gen, s.seed);
    Trajectory traj = propagate(gen, U0, t_end, steps, method);
    double rate = fit_decay_rate(traj, tail_fraction);
    double abscissa = spectral_abscissa(gen);
    Eigen::VectorXd share = smoothing_indicator(gen, traj);

    bool monotone = true;
    for (int k = 0; k < steps; ++k)
        monotone = monotone && traj.energies(k + 1) - traj.energies(k) <=
                                   1e-9 * std::max(1.0, traj.energies(k));

    std::string csv = csv_row({"t", "energy"});
    for (Eigen::Index i = 0; i < traj.times.size(); ++i)
        csv += csv_row({format_double(traj.times(i)), format_double(traj.energies(i))});
    write_file(s.out_dir / "trace.csv", csv);

    JsonValue report = base_report(s);
    JsonValue sc = JsonValue::object();
    sc["t_end"] = t_end;
    sc["steps"] = steps;
    sc["method"] = method_text;
    sc["tail_fraction"] = tail_fraction;
    report["config"]["simulate"] = std::move(sc);

    report["results"]["energy_initial"] = traj.energies(0);
    report["results"]["energy_final"] = traj.energies(steps);
    report["results"]["monotone"] = monotone;
    report["results"]["decay_rate"] = rate;
    report["results"]["abscissa"] = abscissa;
    report["results"]["fell_back_to_midpoint"] = traj.fell_back_to_midpoint;
    JsonValue smoothing = JsonValue::array();
    for (Eigen::Index i = 0; i < share.size(); ++i) smoothing.push_back(share(i));
    report["results"]["stiff_energy_share"] = std::move(smoothing);
    emit(s, report);

    // The midpoint scheme must not gain energy; that is its design theorem.
    bool failed = method == PropagationMethod::implicit_midpoint && !monotone;
    return failed ? 1 : 0;
}

// ---- region-map ----------------------------------------------------------------

int run_region_map(const RunSetup& s) {
    std::vector<double> values;
    std::string lattice_text = s.cfg.get_string("region-map.lattice", "0.25, 0.5, 0.75");
    for (const std::string& item : Config::split_list(lattice_text)) {
        try {
            std::size_t used = 0;
            double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            values.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("config key 'region-map.lattice': bad value '" + item +
                              "'");
        }
    }

    RegionChecks checks;
    std::string checks_text = s.cfg.get_string("region-map.checks", "");
    for (const std::string& item : Config::split_list(checks_text)) {
        if (item == "scan")
            checks.scan = true;
        else if (item == "abscissa")
            checks.abscissa = true;
        else if (item == "probes")
            checks.probes = true;
        else
            throw ConfigError("config key 'region-map.checks': unknown check '" +
                              item + "'");
    }

    auto lattice = cube_lattice(values);
    RegionReport region =
        sweep(s.params, build_grid(s.n, s.L), s.system, lattice, checks, s.seed);

    std::string csv = csv_row({"tau", "sigma", "xi", "predicted", "eta_pred",
                               "eta_fit", "abscissa", "probes_passed", "error"});
    int analytic = 0, gevrey = 0, stable = 0, errors = 0;
    for (const RegionPoint& pt : region.points) {
        csv += csv_row({format_double(pt.tau), format_double(pt.sigma),
                        format_double(pt.xi), region_label_name(pt.predicted),
                        format_double(pt.eta_pred), format_double(pt.eta_fit),
                        format_double(pt.abscissa), pt.probes_passed ? "1" : "0",
                        pt.error});
        analytic += pt.predicted == RegionLabel::analytic;
        gevrey += pt.predicted == RegionLabel::gevrey;
        stable += pt.predicted == RegionLabel::stable_only;
        errors += !pt.error.empty();
    }
    write_file(s.out_dir / "region.csv", csv);

    JsonValue report = base_report(s);
    JsonValue rc = JsonValue::object();
    rc["lattice"] = lattice_text;
    rc["checks"] = checks_text;
    report["config"]["region-map"] = std::move(rc);
    report["results"]["points"] = static_cast<int>(region.points.size());
    report["results"]["analytic"] = analytic;
    report["results"]["gevrey"] = gevrey;
    report["results"]["stable_only"] = stable;
    report["results"]["check_errors"] = errors;
    emit(s, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "beamlab: fractional-damping beam laboratory (verify | spectrum | "
        "resolvent-scan | probe | simulate | region-map)"};
    std::string command, config_path, out_dir = ".";
    std::uint64_t seed_flag = 0;
    int system_flag = 0, jobs_flag = 0;

    app.add_option("command", command, "command to run")
        ->required()
        ->check(CLI::IsMember({"verify", "spectrum", "resolvent-scan", "probe",
                               "simulate", "region-map"}));
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory (created if missing)");
    auto* seed_opt = app.add_option("--seed", seed_flag, "random seed override");
    auto* system_opt =
        app.add_option("--system", system_flag, "system selector override")
            ->check(CLI::IsMember({1, 2}));
    auto* jobs_opt = app.add_option("--jobs", jobs_flag, "parallelism hint")
                         ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunSetup s;
        s.command = command;
        s.cfg = config_path.empty() ? Config() : Config::parse_file(config_path);
        s.cfg.require_known(known_keys());

        int system_num = s.cfg.get_int("system", 1);
        if (system_opt->count() > 0) system_num = system_flag;
        if (system_num != 1 && system_num != 2)
            throw ConfigError("config key 'system': expected 1 or 2");
        s.system = system_num == 1 ? SystemId::System1 : SystemId::System2;

        s.params = params_from_config(s.cfg);
        s.params.validate();
        s.n = s.cfg.get_int("n", 64);
        s.L = s.cfg.get_double("L", M_PI);
        s.seed = s.cfg.get_uint64("seed", 42);
        if (seed_opt->count() > 0) s.seed = seed_flag;
        s.jobs = s.cfg.get_int("jobs", 1);
        if (jobs_opt->count() > 0) s.jobs = jobs_flag;
        if (s.jobs < 1) throw ConfigError("config key 'jobs': must be >= 1");

        s.out_dir = out_dir;
        std::filesystem::create_directories(s.out_dir);

        if (command == "verify") return run_verify(s);
        if (command == "spectrum") return run_spectrum(s);
        if (command == "resolvent-scan") return run_scan(s);
        if (command == "probe") return run_probe(s);
        if (command == "simulate") return run_simulate(s);
        if (command == "region-map") return run_region_map(s);
        throw std::logic_error("unreachable command dispatch");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
