// sampler.hpp — Eigendecomposition of Λ and generation of pulse sets:
// typical (|η_r| = 1/√(2θ_r)), user-specified magnitudes, and fully random
// draws from the Gaussian density F.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "pulsemix/modes.hpp"
#include "pulsemix/rng.hpp"
#include "pulsemix/thermal.hpp"

namespace pulsemix {

// U†ΛU = diag(θ), θ ascending, each column of U scaled so that its
// largest-magnitude entry is real and positive.
struct EigenSystem {
    Eigen::MatrixXcd U;
    Eigen::VectorXd theta;
    LambdaMatrix source;

    int size() const noexcept { return static_cast<int>(theta.size()); }
};

EigenSystem diagonalize(const LambdaMatrix& lambda);

struct EtaVector {
    Eigen::VectorXcd eta;
    Eigen::VectorXd phases;
};

// One term |{γ̄ e^{-Γ}}⟩ of the mixture.
struct PulseSet {
    SiteIndexSet sites;
    Eigen::VectorXcd gamma_bar;
    GammaValue gamma_scale;
    std::uint64_t seed{0};
    double likelihood_exponent{0.0};

    // γ_s = γ̄_s e^{-Γ}
    Eigen::VectorXcd physical_amplitudes() const;
    std::complex<double> amplitude_bar(int s) const {
        return gamma_bar(static_cast<Eigen::Index>(sites.offset(s)));
    }
};

// Σ_{ss'} γ̄_s Λ_{ss'} γ̄*_{s'}
double quadratic_form(const LambdaMatrix& lambda, const Eigen::VectorXcd& gamma_bar);

// η_r = Σ_s U_{sr} γ̄_s
Eigen::VectorXcd eta_from_gamma_bar(const EigenSystem& eig, const Eigen::VectorXcd& gamma_bar);
// γ̄_s = Σ_r U*_{sr} η_r
Eigen::VectorXcd gamma_bar_from_eta(const EigenSystem& eig, const Eigen::VectorXcd& eta);

// Per-draw engine shared by the pulse-set factories and the Monte-Carlo
// verifier. Phases are drawn first for each r, then (random mode) |η_r|².
class EtaSampler {
public:
    explicit EtaSampler(const EigenSystem& eig);

    // phases uniform, |η_r| fixed
    void draw_fixed(Rng& rng, const Eigen::VectorXd& magnitudes, EtaVector& out) const;
    // phases uniform, |η_r|² ~ Exp(mean 1/θ_r)
    void draw_thermal(Rng& rng, EtaVector& out) const;

    const Eigen::VectorXd& theta() const noexcept { return theta_; }

private:
    Eigen::VectorXd theta_;
};

PulseSet typical_pulse_set(const EigenSystem& eig, GammaValue gamma, std::uint64_t rng_seed);
PulseSet atypical_pulse_set(const EigenSystem& eig, GammaValue gamma,
                            const Eigen::VectorXd& magnitudes, std::uint64_t rng_seed);
PulseSet random_pulse_set(const EigenSystem& eig, GammaValue gamma, std::uint64_t rng_seed);

// {sites, gamma_bar: [[re, im], ...], gamma_scale, seed, likelihood_exponent}
nlohmann::json to_json(const PulseSet& pulse);
PulseSet pulse_set_from_json(const nlohmann::json& j);

} // namespace pulsemix
