// fields.cpp — Sinc envelopes and profile export.

#include "pulsemix/fields.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace pulsemix {

double wannier_prefactor(Prefactor prefactor, double lattice_const) {
    const double base = 1.0 / std::sqrt(lattice_const);
    return prefactor == Prefactor::standard ? 2.0 * kPi * base : base;
}

Prefactor parse_prefactor(std::string_view name) {
    if (name == "standard") return Prefactor::standard;
    if (name == "normalized") return Prefactor::normalized;
    throw std::invalid_argument("unknown prefactor convention '" + std::string(name) +
                                "' (expected standard|normalized)");
}

std::string_view to_string(Prefactor prefactor) {
    return prefactor == Prefactor::standard ? "standard" : "normalized";
}

double sinc(double x) {
    if (std::abs(x) < 1e-5) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double wannier(const SpectralWindow& window, int s, double z, Prefactor prefactor) {
    const double l = window.lattice_const();
    const double x = z - static_cast<double>(s) * l;
    return wannier_prefactor(prefactor, l) * sinc(kPi * x / l);
}

void FieldGrid::validate() const {
    if (!std::isfinite(z_min) || !std::isfinite(z_max) || !(z_min < z_max)) {
        throw std::invalid_argument("FieldGrid: need finite z_min < z_max");
    }
    if (n_points < 2) throw std::invalid_argument("FieldGrid: n_points must be >= 2");
}

namespace {

FieldProfile empty_profile(const FieldGrid& grid) {
    grid.validate();
    FieldProfile profile{Eigen::VectorXd(grid.n_points), Eigen::VectorXcd::Zero(grid.n_points)};
    for (int i = 0; i < grid.n_points; ++i) profile.z(i) = grid.point(i);
    return profile;
}

void add_pulse(FieldProfile& profile, std::complex<double> amplitude,
               const SpectralWindow& window, int s, Prefactor prefactor) {
    for (Eigen::Index i = 0; i < profile.z.size(); ++i) {
        profile.envelope(i) += amplitude * wannier(window, s, profile.z(i), prefactor);
    }
}

void apply_carrier(FieldProfile& profile, const SpectralWindow& window, const FieldGrid& grid) {
    if (!grid.include_carrier) return;
    for (Eigen::Index i = 0; i < profile.z.size(); ++i) {
        profile.envelope(i) *= std::polar(1.0, window.k_center() * profile.z(i));
    }
}

} // namespace

FieldProfile single_pulse_field(const PulseSet& pulse, const SpectralWindow& window, int s,
                                const FieldGrid& grid, Prefactor prefactor) {
    if (!pulse.sites.contains(s)) {
        throw std::out_of_range("single_pulse_field: site " + std::to_string(s) +
                                " not in pulse set");
    }
    FieldProfile profile = empty_profile(grid);
    const double scale = std::exp(-pulse.gamma_scale.value);
    add_pulse(profile, pulse.amplitude_bar(s) * scale, window, s, prefactor);
    apply_carrier(profile, window, grid);
    return profile;
}

FieldProfile pulse_set_field(const PulseSet& pulse, const SpectralWindow& window,
                             const FieldGrid& grid, Prefactor prefactor) {
    FieldProfile profile = empty_profile(grid);
    const double scale = std::exp(-pulse.gamma_scale.value);
    for (int i = 0; i < pulse.sites.size(); ++i) {
        add_pulse(profile, pulse.gamma_bar(i) * scale, window, pulse.sites[i], prefactor);
    }
    apply_carrier(profile, window, grid);
    return profile;
}

double full_width_half_max(const FieldProfile& profile) {
    const Eigen::VectorXd mag = profile.envelope.cwiseAbs();
    if (mag.size() < 3) throw std::invalid_argument("full_width_half_max: profile too short");
    Eigen::Index peak = 0;
    const double top = mag.maxCoeff(&peak);
    if (!(top > 0.0)) throw std::runtime_error("full_width_half_max: profile is identically zero");
    const double half = 0.5 * top;

    auto crossing = [&](Eigen::Index inside, Eigen::Index outside) {
        const double t = (mag(inside) - half) / (mag(inside) - mag(outside));
        return profile.z(inside) + t * (profile.z(outside) - profile.z(inside));
    };

    Eigen::Index left = peak;
    while (left > 0 && mag(left - 1) >= half) --left;
    if (left == 0) throw std::runtime_error("full_width_half_max: no left half-max crossing");
    Eigen::Index right = peak;
    while (right + 1 < mag.size() && mag(right + 1) >= half) ++right;
    if (right + 1 == mag.size()) {
        throw std::runtime_error("full_width_half_max: no right half-max crossing");
    }
    return crossing(right, right + 1) - crossing(left, left - 1);
}

double planck_weight(const ThermalContext& ctx, double k) {
    return ctx.hbar * ctx.dispersion(k) * mean_occupation(ctx, k);
}

void write_profile_csv(std::ostream& out, const FieldProfile& profile) {
    const auto old_precision = out.precision(17);
    out << "z,re,im,abs\n";
    for (Eigen::Index i = 0; i < profile.z.size(); ++i) {
        const auto e = profile.envelope(i);
        out << profile.z(i) << ',' << e.real() << ',' << e.imag() << ',' << std::abs(e) << '\n';
    }
    out.precision(old_precision);
}

nlohmann::json profile_to_json(const FieldProfile& profile, const nlohmann::json& metadata) {
    std::vector<double> z(profile.z.data(), profile.z.data() + profile.z.size());
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> mag;
    for (Eigen::Index i = 0; i < profile.envelope.size(); ++i) {
        re.push_back(profile.envelope(i).real());
        im.push_back(profile.envelope(i).imag());
        mag.push_back(std::abs(profile.envelope(i)));
    }
    return {{"metadata", metadata}, {"z", z}, {"re", re}, {"im", im}, {"abs", mag}};
}

} // namespace pulsemix
