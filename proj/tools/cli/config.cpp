// config.cpp — Parsing and validation of RunConfig.

#include "cli/config.hpp"

#include <fstream>
#include <set>

namespace pulsemix::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& into) {
    if (auto it = j.find(key); it != j.end()) into = it->get<T>();
}

} // namespace

SpectralWindow RunConfig::window() const {
    try {
        return SpectralWindow(k_center, lattice_const, n_modes);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

SpectralWindow RunConfig::wide_window() const {
    if (!(wide_factor > 0.0)) throw ConfigError("field.wide_factor must be positive");
    try {
        return SpectralWindow(k_center, lattice_const / wide_factor, n_modes);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

ThermalContext RunConfig::context() const {
    try {
        if (dispersion_kind == "linear") {
            return ThermalContext(beta, Dispersion::linear(dispersion_slope), hbar);
        }
        if (dispersion_kind == "tabulated") {
            if (dispersion_table.empty()) throw ConfigError("dispersion.table is required");
            return ThermalContext(beta, load_dispersion_table(dispersion_table), hbar);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("dispersion.kind must be 'linear' or 'tabulated', got '" +
                      dispersion_kind + "'");
}

SiteIndexSet RunConfig::site_set() const {
    const SpectralWindow w = window();
    if (decomposition == Decomposition::finite) {
        const int count = sites.value_or(w.n_modes());
        if (count < 1 || count > w.n_modes()) {
            throw ConfigError("sites must be in 1..n_modes for the finite decomposition");
        }
        return SiteIndexSet::centered(count);
    }
    const int count = sites.value_or(41);
    if (count < 1) throw ConfigError("sites must be >= 1");
    return SiteIndexSet::centered(count);
}

void RunConfig::validate() const {
    const SpectralWindow w = window();
    const ThermalContext ctx = context();
    try {
        require_positive_energy(ctx, w);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    (void)site_set();
    if (quad_points < 2) throw ConfigError("quad_points must be >= 2");
    if (samples < 1000) throw ConfigError("samples must be >= 1000");
    if (count < 1) throw ConfigError("count must be >= 1");
    if (converge_steps < 0 || converge_steps > 8) throw ConfigError("converge.steps must be in 0..8");
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    if (!(wide_factor > 0.0)) throw ConfigError("field.wide_factor must be positive");
}

nlohmann::json RunConfig::to_json() const {
    json dispersion{{"kind", dispersion_kind}};
    if (dispersion_kind == "linear") {
        dispersion["slope"] = dispersion_slope;
    } else {
        dispersion["table"] = dispersion_table.generic_string();
    }
    json j{
        {"window", {{"k_center", k_center}, {"lattice_const", lattice_const}, {"n_modes", n_modes}}},
        {"beta", beta},
        {"hbar", hbar},
        {"dispersion", dispersion},
        {"decomposition", decomposition == Decomposition::finite ? "finite" : "continuum"},
        {"sites", site_set().size()},
        {"seed", seed},
        {"quad_points", quad_points},
        {"prefactor", std::string(pulsemix::to_string(prefactor))},
        {"samples", samples},
        {"sample_kind", typical ? "typical" : "random"},
        {"count", count},
        {"grid",
         {{"z_min", grid.z_min},
          {"z_max", grid.z_max},
          {"n_points", grid.n_points},
          {"include_carrier", grid.include_carrier}}},
        {"field", {{"pulses", pulses}, {"wide_factor", wide_factor}}},
        {"converge", {{"steps", converge_steps}}},
    };
    return j;
}

RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    RunConfig c;
    try {
        reject_unknown(j,
                       {"window", "beta", "hbar", "dispersion", "decomposition", "sites", "seed",
                        "quad_points", "prefactor", "samples", "sample_kind", "count", "grid",
                        "field", "converge", "out"},
                       "config");
        if (auto it = j.find("window"); it != j.end()) {
            reject_unknown(*it, {"k_center", "lattice_const", "n_modes"}, "window");
            read(*it, "k_center", c.k_center);
            read(*it, "lattice_const", c.lattice_const);
            read(*it, "n_modes", c.n_modes);
        }
        read(j, "beta", c.beta);
        read(j, "hbar", c.hbar);
        if (auto it = j.find("dispersion"); it != j.end()) {
            reject_unknown(*it, {"kind", "slope", "table"}, "dispersion");
            read(*it, "kind", c.dispersion_kind);
            read(*it, "slope", c.dispersion_slope);
            if (auto t = it->find("table"); t != it->end()) {
                std::filesystem::path p = t->get<std::string>();
                c.dispersion_table = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
            }
        }
        if (auto it = j.find("decomposition"); it != j.end()) {
            const auto d = it->get<std::string>();
            if (d == "finite") {
                c.decomposition = Decomposition::finite;
            } else if (d == "continuum") {
                c.decomposition = Decomposition::continuum;
            } else {
                throw ConfigError("decomposition must be 'finite' or 'continuum'");
            }
        }
        if (auto it = j.find("sites"); it != j.end() && !it->is_null()) c.sites = it->get<int>();
        read(j, "seed", c.seed);
        read(j, "quad_points", c.quad_points);
        if (auto it = j.find("prefactor"); it != j.end()) {
            c.prefactor = parse_prefactor(it->get<std::string>());
        }
        read(j, "samples", c.samples);
        if (auto it = j.find("sample_kind"); it != j.end()) {
            const auto kind = it->get<std::string>();
            if (kind != "typical" && kind != "random") {
                throw ConfigError("sample_kind must be 'typical' or 'random'");
            }
            c.typical = kind == "typical";
        }
        read(j, "count", c.count);
        if (auto it = j.find("grid"); it != j.end()) {
            reject_unknown(*it, {"z_min", "z_max", "n_points", "include_carrier"}, "grid");
            read(*it, "z_min", c.grid.z_min);
            read(*it, "z_max", c.grid.z_max);
            read(*it, "n_points", c.grid.n_points);
            read(*it, "include_carrier", c.grid.include_carrier);
        }
        if (auto it = j.find("field"); it != j.end()) {
            reject_unknown(*it, {"pulses", "wide_factor"}, "field");
            read(*it, "pulses", c.pulses);
            read(*it, "wide_factor", c.wide_factor);
        }
        if (auto it = j.find("converge"); it != j.end()) {
            reject_unknown(*it, {"steps"}, "converge");
            read(*it, "steps", c.converge_steps);
        }
        if (auto it = j.find("out"); it != j.end()) c.out = it->get<std::string>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

} // namespace pulsemix::cli
