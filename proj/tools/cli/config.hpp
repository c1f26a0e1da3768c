// config.hpp — Run configuration: JSON file plus command-line overrides.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pulsemix/fields.hpp"
#include "pulsemix/modes.hpp"
#include "pulsemix/thermal.hpp"

namespace pulsemix::cli {

// Any problem with the configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Decomposition { finite, continuum };

struct RunConfig {
    // spectral window
    double k_center{10.0};
    double lattice_const{1.0};
    int n_modes{21};

    double beta{1.0};
    double hbar{1.0};

    // "linear" (ω = slope·|k|) or "tabulated" (two-column file)
    std::string dispersion_kind{"linear"};
    double dispersion_slope{1.0};
    std::filesystem::path dispersion_table;

    Decomposition decomposition{Decomposition::finite};
    // unset: full window (finite) or 41 (continuum)
    std::optional<int> sites;

    std::uint64_t seed{1};
    int quad_points{kDefaultQuadPoints};
    Prefactor prefactor{Prefactor::standard};

    std::int64_t samples{100000};
    bool typical{true};
    int count{1};

    FieldGrid grid{-15.0, 15.0, 1201, false};
    std::vector<int> pulses{-2, 0, 2};
    double wide_factor{2.0};

    int converge_steps{3};
    std::filesystem::path out{"out"};

    SpectralWindow window() const;
    ThermalContext context() const;
    SiteIndexSet site_set() const;
    // same k̃ and N, lattice constant divided by wide_factor
    SpectralWindow wide_window() const;

    // every module precondition; throws ConfigError
    void validate() const;

    nlohmann::json to_json() const;
};

// Unknown keys are rejected. Relative table paths resolve against base_dir.
RunConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

} // namespace pulsemix::cli
