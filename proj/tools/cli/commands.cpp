// commands.cpp — decompose, sample, field, verify, converge.

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "pulsemix/fields.hpp"
#include "pulsemix/sampler.hpp"
#include "pulsemix/thermal.hpp"
#include "pulsemix/verify.hpp"

namespace pulsemix::cli {

namespace {

using nlohmann::json;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::ostringstream csv_stream() {
    std::ostringstream os;
    os << std::setprecision(17);
    return os;
}

LambdaMatrix build_lambda(const RunConfig& config, const SpectralWindow& window) {
    const ThermalContext ctx = config.context();
    const SiteIndexSet sites = config.site_set();
    if (config.decomposition == Decomposition::finite) {
        return lambda_discrete(ctx, window, sites);
    }
    return lambda_continuum(ctx, window, sites, config.quad_points);
}

json window_json(const SpectralWindow& w) {
    return {{"k_center", w.k_center()},
            {"lattice_const", w.lattice_const()},
            {"n_modes", w.n_modes()},
            {"quant_length", w.quant_length()}};
}

PulseSet draw(const RunConfig& config, const EigenSystem& eig, GammaValue gamma,
              std::uint64_t seed) {
    return config.typical ? typical_pulse_set(eig, gamma, seed)
                          : random_pulse_set(eig, gamma, seed);
}

} // namespace

FileSet cmd_decompose(const RunConfig& config) {
    const SpectralWindow window = config.window();
    const LambdaMatrix lambda = build_lambda(config, window);
    const EigenSystem eig = diagonalize(lambda);

    json lags = json::array();
    auto lag_csv = csv_stream();
    lag_csv << "lag,re,im\n";
    for (int d = 0; d < lambda.size(); ++d) {
        const auto v = lambda.lag(d);
        lags.push_back({{"lag", d}, {"re", v.real()}, {"im", v.imag()}});
        lag_csv << d << ',' << v.real() << ',' << v.imag() << '\n';
    }
    auto theta_csv = csv_stream();
    theta_csv << "r,theta\n";
    for (int r = 0; r < eig.size(); ++r) theta_csv << r << ',' << eig.theta(r) << '\n';

    json doc{{"config", config.to_json()},
             {"window", window_json(window)},
             {"sites", lambda.sites.to_vector()},
             {"gamma", lambda.gamma.value},
             {"lambda_lags", std::move(lags)},
             {"theta", std::vector<double>(eig.theta.data(), eig.theta.data() + eig.size())}};
    return {{"decomposition.json", dump(doc)},
            {"lambda_lags.csv", lag_csv.str()},
            {"theta.csv", theta_csv.str()}};
}

FileSet cmd_sample(const RunConfig& config) {
    const SpectralWindow window = config.window();
    const LambdaMatrix lambda = build_lambda(config, window);
    const EigenSystem eig = diagonalize(lambda);
    FileSet files;
    for (int i = 0; i < config.count; ++i) {
        const PulseSet pulse = draw(config, eig, lambda.gamma, config.seed + static_cast<std::uint64_t>(i));
        std::ostringstream name;
        name << "pulse_set_" << std::setw(3) << std::setfill('0') << i << ".json";
        files.emplace(name.str(), dump(to_json(pulse)));
    }
    return files;
}

namespace {

void add_field_outputs(FileSet& files, const std::filesystem::path& dir, const RunConfig& config,
                       const SpectralWindow& window, const PulseSet& pulse) {
    json meta{{"window", window_json(window)},
              {"beta", config.beta},
              {"seed", pulse.seed},
              {"prefactor", std::string(to_string(config.prefactor))},
              {"include_carrier", config.grid.include_carrier},
              {"sites", pulse.sites.to_vector()}};

    const FieldProfile set = pulse_set_field(pulse, window, config.grid, config.prefactor);
    auto csv = csv_stream();
    write_profile_csv(csv, set);
    files.emplace(dir / "set.csv", csv.str());
    files.emplace(dir / "set.json", dump(profile_to_json(set, meta)));
    files.emplace(dir / "pulse_set.json", dump(to_json(pulse)));

    for (int s : config.pulses) {
        if (!pulse.sites.contains(s)) continue;
        const FieldProfile single = single_pulse_field(pulse, window, s, config.grid, config.prefactor);
        auto pcsv = csv_stream();
        write_profile_csv(pcsv, single);
        files.emplace(dir / ("pulse_" + std::to_string(s) + ".csv"), pcsv.str());
    }
}

} // namespace

FileSet cmd_field(const RunConfig& config, const std::filesystem::path& pulse_set_file) {
    const ThermalContext ctx = config.context();
    const SpectralWindow narrow = config.window();
    const SpectralWindow wide = config.wide_window();
    try {
        require_positive_energy(ctx, wide);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("wide window: ") + e.what());
    }

    std::optional<PulseSet> given;
    if (!pulse_set_file.empty()) {
        std::ifstream in(pulse_set_file);
        if (!in) throw ConfigError("cannot open pulse set " + pulse_set_file.string());
        try {
            json j;
            in >> j;
            given = pulse_set_from_json(j);
        } catch (const std::exception& e) {
            throw ConfigError("pulse set " + pulse_set_file.string() + ": " + e.what());
        }
    }

    FileSet files;
    {
        std::optional<PulseSet> pulse = given;
        if (!pulse) {
            const LambdaMatrix lambda = build_lambda(config, narrow);
            pulse = typical_pulse_set(diagonalize(lambda), lambda.gamma, config.seed);
        }
        add_field_outputs(files, "narrow", config, narrow, *pulse);
    }
    {
        const LambdaMatrix lambda = build_lambda(config, wide);
        const PulseSet pulse = typical_pulse_set(diagonalize(lambda), lambda.gamma, config.seed);
        add_field_outputs(files, "wide", config, wide, pulse);
    }

    // Planck-weight overlay with the two k-ranges marked
    auto planck = csv_stream();
    planck << "k,weight,in_narrow,in_wide\n";
    const double half_wide = kPi / wide.lattice_const();
    const double half_narrow = kPi / narrow.lattice_const();
    const int points = 801;
    for (int i = 0; i < points; ++i) {
        const double k = config.k_center - 2.0 * half_wide + 4.0 * half_wide * i / (points - 1);
        double weight = 0.0;
        try {
            weight = planck_weight(ctx, k);
        } catch (const std::domain_error&) {
            continue;
        }
        const double dk = k - config.k_center;
        planck << k << ',' << weight << ',' << (std::abs(dk) <= half_narrow ? 1 : 0) << ','
               << (std::abs(dk) <= half_wide ? 1 : 0) << '\n';
    }
    files.emplace("planck.csv", planck.str());
    return files;
}

FileSet cmd_verify(const RunConfig& config, bool& passed, std::ostream& log) {
    const ThermalContext ctx = config.context();
    const SpectralWindow window = config.window();
    const SiteIndexSet sites = config.decomposition == Decomposition::finite
                                   ? config.site_set()
                                   : SiteIndexSet::full(window);

    const InvariantReport invariants =
        verify_invariants(ctx, window, sites, {config.seed, config.quad_points});
    const MomentReport moments = verify_moments(ctx, window, config.samples, config.seed);

    for (const auto& c : invariants.checks) {
        log << (c.pass ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured
            << " bound=" << c.bound << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
    }
    log << (moments.pass ? "PASS " : "FAIL ") << "moments  max_abs_error=" << moments.max_abs_error
        << " max_bound_ratio=" << moments.max_bound_ratio
        << " max_first_moment_ratio=" << moments.max_first_moment_ratio
        << " samples=" << moments.sample_count << '\n';

    passed = invariants.all_passed() && moments.pass;
    json doc{{"config", config.to_json()},
             {"invariants", to_json(invariants)},
             {"moments", to_json(moments)},
             {"pass", passed}};
    return {{"verify_report.json", dump(doc)}};
}

FileSet cmd_converge(const RunConfig& config) {
    const ThermalContext ctx = config.context();
    const SpectralWindow base = config.window();
    const int lag_count = std::min(config.site_set().size(), base.n_modes());
    const SiteIndexSet lag_sites = SiteIndexSet::centered(lag_count);

    const LambdaMatrix cont = lambda_continuum(ctx, base, lag_sites, config.quad_points);
    const double gamma_cont = cont.gamma.value;

    auto csv = csv_stream();
    csv << "j,n_modes,quant_length,gamma,gamma_continuum,gamma_error,lambda_max_lag_error\n";
    json rows = json::array();
    SpectralWindow window = base;
    for (int j = 0; j <= config.converge_steps; ++j) {
        if (j > 0) window = refine(window);
        const LambdaMatrix disc = lambda_discrete(ctx, window, lag_sites);
        double lag_error = 0.0;
        for (int d = 0; d < lag_count; ++d) {
            lag_error = std::max(lag_error, std::abs(disc.lag(d) - cont.lag(d)));
        }
        const double gamma_error = std::abs(disc.gamma.value - gamma_cont);
        csv << j << ',' << window.n_modes() << ',' << window.quant_length() << ','
            << disc.gamma.value << ',' << gamma_cont << ',' << gamma_error << ',' << lag_error << '\n';
        rows.push_back({{"j", j},
                        {"n_modes", window.n_modes()},
                        {"quant_length", window.quant_length()},
                        {"gamma", disc.gamma.value},
                        {"gamma_continuum", gamma_cont},
                        {"gamma_error", gamma_error},
                        {"lambda_max_lag_error", lag_error}});
    }
    json doc{{"config", config.to_json()}, {"lags", lag_count}, {"steps", std::move(rows)}};
    return {{"converge.csv", csv.str()}, {"converge.json", dump(doc)}};
}

void write_files(const std::filesystem::path& out_dir, const FileSet& files) {
    for (const auto& [rel, content] : files) {
        const auto path = out_dir / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        os << content;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pulsemix: thermal light as a mixture of sets of coherent pulses"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> samples;
    std::optional<int> sites;
    std::optional<int> quad_points;
    std::optional<int> count;
    std::optional<int> steps;
    std::string prefactor;
    std::string out_dir;
    std::string pulse_set;
    bool typical = false;
    bool random = false;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--samples", samples, "Monte-Carlo sample count (verify)");
    app.add_option("--sites", sites, "number of pulse sites, centered on zero");
    app.add_option("--quad-points", quad_points, "continuum quadrature nodes");
    app.add_option("--prefactor", prefactor, "Wannier prefactor")
        ->check(CLI::IsMember({"standard", "normalized"}));
    app.add_option("--out", out_dir, "output directory");
    auto* typical_flag = app.add_flag("--typical", typical, "typical pulse sets (default)");
    app.add_flag("--random", random, "pulse sets drawn at random from the mixture weights")->excludes(typical_flag);

    auto* decompose = app.add_subcommand("decompose", "write Gamma, Lambda by lag and theta_r");
    auto* sample = app.add_subcommand("sample", "write PulseSet JSON files");
    sample->add_option("--count", count, "number of pulse sets");
    auto* field = app.add_subcommand("field", "write field envelopes for narrow and wide windows");
    field->add_option("--pulse-set", pulse_set, "PulseSet JSON for the narrow window");
    auto* verify = app.add_subcommand("verify", "run the invariant suite and moment check");
    auto* converge = app.add_subcommand("converge", "refinement convergence table");
    converge->add_option("--steps", steps, "number of refinement steps");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    try {
        RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (seed) config.seed = *seed;
        if (samples) config.samples = *samples;
        if (sites) config.sites = *sites;
        if (quad_points) config.quad_points = *quad_points;
        if (!prefactor.empty()) config.prefactor = parse_prefactor(prefactor);
        if (!out_dir.empty()) config.out = out_dir;
        if (typical) config.typical = true;
        if (random) config.typical = false;
        if (count) config.count = *count;
        if (steps) config.converge_steps = *steps;
        config.validate();

        FileSet files;
        int code = kSuccess;
        if (decompose->parsed()) {
            files = cmd_decompose(config);
        } else if (sample->parsed()) {
            files = cmd_sample(config);
        } else if (field->parsed()) {
            files = cmd_field(config, pulse_set);
        } else if (verify->parsed()) {
            bool passed = false;
            files = cmd_verify(config, passed, out);
            code = passed ? kSuccess : kCheckFailure;
        } else if (converge->parsed()) {
            files = cmd_converge(config);
        }
        write_files(config.out, files);
        for (const auto& [rel, _] : files) out << "wrote " << (config.out / rel).string() << '\n';
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
}

} // namespace pulsemix::cli
