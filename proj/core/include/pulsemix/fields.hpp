// fields.hpp — Mean displacement-field envelopes of pulses and pulse sets in
// the narrowband limit, built from the sinc ("empty lattice Wannier") function.
//
// The constant transverse factor √(ħω(k̃)/2)·d_k̃(0,0) is set to 1, and only the
// positive-frequency part is returned; take the real part for plotting.

#pragma once

#include <iosfwd>
#include <string_view>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "pulsemix/modes.hpp"
#include "pulsemix/sampler.hpp"
#include "pulsemix/thermal.hpp"

namespace pulsemix {

// standard: 2π/√l, normalized: 1/√l (the L→∞ limit of w, unit L² norm)
enum class Prefactor { standard, normalized };

double wannier_prefactor(Prefactor prefactor, double lattice_const);
Prefactor parse_prefactor(std::string_view name);
std::string_view to_string(Prefactor prefactor);

// sin(x)/x with sinc(0) = 1
double sinc(double x);

// W_s(z) = prefactor · sinc(π(z - s·l)/l)
double wannier(const SpectralWindow& window, int s, double z,
               Prefactor prefactor = Prefactor::standard);

struct FieldGrid {
    double z_min;
    double z_max;
    int n_points;
    bool include_carrier{false};

    void validate() const;
    double point(int i) const { return z_min + (z_max - z_min) * i / (n_points - 1); }
};

struct FieldProfile {
    Eigen::VectorXd z;
    Eigen::VectorXcd envelope;
};

// γ̄_s e^{-Γ} W_s(z), times e^{ik̃z} when the grid asks for the carrier
FieldProfile single_pulse_field(const PulseSet& pulse, const SpectralWindow& window, int s,
                                const FieldGrid& grid, Prefactor prefactor = Prefactor::standard);

// Σ_s γ̄_s e^{-Γ} W_s(z)
FieldProfile pulse_set_field(const PulseSet& pulse, const SpectralWindow& window,
                             const FieldGrid& grid, Prefactor prefactor = Prefactor::standard);

// full width at half maximum of |envelope| around its peak, linearly
// interpolated between grid points; throws if a half-max crossing is missing
double full_width_half_max(const FieldProfile& profile);

// ħω(k)/(e^{βħω(k)} - 1)
double planck_weight(const ThermalContext& ctx, double k);

// columns z, re, im, abs
void write_profile_csv(std::ostream& out, const FieldProfile& profile);
// {metadata: ..., z, re, im, abs}
nlohmann::json profile_to_json(const FieldProfile& profile, const nlohmann::json& metadata);

} // namespace pulsemix
