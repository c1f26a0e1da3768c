// sampler.cpp — Diagonalization of Λ and pulse-set generation.

#include "pulsemix/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace pulsemix {

EigenSystem diagonalize(const LambdaMatrix& lambda) {
    const Eigen::MatrixXcd& A = lambda.entries;
    if (A.rows() != A.cols() || A.rows() == 0) {
        throw std::invalid_argument("diagonalize: Lambda must be square and nonempty");
    }
    const double scale = A.cwiseAbs().maxCoeff();
    const double asym = (A - A.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * (scale > 0.0 ? scale : 1.0)) {
        throw std::invalid_argument("diagonalize: Lambda is not Hermitian (max |A - A^H| = " +
                                    std::to_string(asym) + ")");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(A);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("diagonalize: eigensolver did not converge");
    }

    EigenSystem eig{solver.eigenvectors(), solver.eigenvalues(), lambda};
    for (Eigen::Index r = 0; r < eig.U.cols(); ++r) {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < eig.U.rows(); ++i) {
            const double mag = std::abs(eig.U(i, r));
            if (mag > best) {
                best = mag;
                pivot = i;
            }
        }
        const std::complex<double> p = eig.U(pivot, r);
        eig.U.col(r) *= std::conj(p) / std::abs(p);
        eig.U(pivot, r) = std::abs(p);
    }
    return eig;
}

Eigen::VectorXcd PulseSet::physical_amplitudes() const {
    return gamma_bar * std::exp(-gamma_scale.value);
}

double quadratic_form(const LambdaMatrix& lambda, const Eigen::VectorXcd& gamma_bar) {
    if (gamma_bar.size() != lambda.entries.rows()) {
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    }
    // γ̄ᵀ Λ γ̄* = y† Λ y with y = γ̄*
    const Eigen::VectorXcd y = gamma_bar.conjugate();
    return (y.adjoint() * lambda.entries * y)(0).real();
}

Eigen::VectorXcd eta_from_gamma_bar(const EigenSystem& eig, const Eigen::VectorXcd& gamma_bar) {
    if (gamma_bar.size() != eig.U.rows()) {
        throw std::invalid_argument("eta_from_gamma_bar: dimension mismatch");
    }
    return eig.U.transpose() * gamma_bar;
}

Eigen::VectorXcd gamma_bar_from_eta(const EigenSystem& eig, const Eigen::VectorXcd& eta) {
    if (eta.size() != eig.U.cols()) {
        throw std::invalid_argument("gamma_bar_from_eta: dimension mismatch");
    }
    return eig.U.conjugate() * eta;
}

EtaSampler::EtaSampler(const EigenSystem& eig) : theta_(eig.theta) {
    for (Eigen::Index r = 0; r < theta_.size(); ++r) {
        if (!(theta_(r) > 0.0)) {
            throw std::domain_error("EtaSampler: eigenvalue theta_" + std::to_string(r) +
                                    " = " + std::to_string(theta_(r)) + " is not positive");
        }
    }
}

void EtaSampler::draw_fixed(Rng& rng, const Eigen::VectorXd& magnitudes, EtaVector& out) const {
    if (magnitudes.size() != theta_.size()) {
        throw std::invalid_argument("EtaSampler: magnitudes dimension mismatch");
    }
    const Eigen::Index R = theta_.size();
    out.eta.resize(R);
    out.phases.resize(R);
    for (Eigen::Index r = 0; r < R; ++r) {
        const double phi = 2.0 * kPi * rng.uniform();
        out.phases(r) = phi;
        out.eta(r) = std::polar(magnitudes(r), phi);
    }
}

void EtaSampler::draw_thermal(Rng& rng, EtaVector& out) const {
    const Eigen::Index R = theta_.size();
    out.eta.resize(R);
    out.phases.resize(R);
    for (Eigen::Index r = 0; r < R; ++r) {
        const double phi = 2.0 * kPi * rng.uniform();
        const double mag2 = -std::log1p(-rng.uniform()) / theta_(r);
        out.phases(r) = phi;
        out.eta(r) = std::polar(std::sqrt(mag2), phi);
    }
}

namespace {

PulseSet make_pulse_set(const EigenSystem& eig, GammaValue gamma, std::uint64_t seed,
                        const EtaVector& eta) {
    PulseSet pulse{eig.source.sites, gamma_bar_from_eta(eig, eta.eta), gamma, seed, 0.0};
    pulse.likelihood_exponent = quadratic_form(eig.source, pulse.gamma_bar);
    return pulse;
}

} // namespace

PulseSet atypical_pulse_set(const EigenSystem& eig, GammaValue gamma,
                            const Eigen::VectorXd& magnitudes, std::uint64_t rng_seed) {
    if (magnitudes.size() != eig.theta.size()) {
        throw std::invalid_argument("atypical_pulse_set: expected " +
                                    std::to_string(eig.theta.size()) + " magnitudes, got " +
                                    std::to_string(magnitudes.size()));
    }
    if ((magnitudes.array() < 0.0).any() || !magnitudes.allFinite()) {
        throw std::invalid_argument("atypical_pulse_set: magnitudes must be finite and >= 0");
    }
    const EtaSampler sampler(eig);
    Rng rng(rng_seed);
    EtaVector eta;
    sampler.draw_fixed(rng, magnitudes, eta);
    return make_pulse_set(eig, gamma, rng_seed, eta);
}

PulseSet typical_pulse_set(const EigenSystem& eig, GammaValue gamma, std::uint64_t rng_seed) {
    const EtaSampler sampler(eig);
    const Eigen::VectorXd magnitudes = (2.0 * eig.theta.array()).rsqrt().matrix();
    Rng rng(rng_seed);
    EtaVector eta;
    sampler.draw_fixed(rng, magnitudes, eta);
    return make_pulse_set(eig, gamma, rng_seed, eta);
}

PulseSet random_pulse_set(const EigenSystem& eig, GammaValue gamma, std::uint64_t rng_seed) {
    const EtaSampler sampler(eig);
    Rng rng(rng_seed);
    EtaVector eta;
    sampler.draw_thermal(rng, eta);
    return make_pulse_set(eig, gamma, rng_seed, eta);
}

nlohmann::json to_json(const PulseSet& pulse) {
    nlohmann::json amps = nlohmann::json::array();
    for (Eigen::Index i = 0; i < pulse.gamma_bar.size(); ++i) {
        amps.push_back({pulse.gamma_bar(i).real(), pulse.gamma_bar(i).imag()});
    }
    return {
        {"sites", pulse.sites.to_vector()},
        {"gamma_bar", std::move(amps)},
        {"gamma_scale", pulse.gamma_scale.value},
        {"seed", pulse.seed},
        {"likelihood_exponent", pulse.likelihood_exponent},
    };
}

PulseSet pulse_set_from_json(const nlohmann::json& j) {
    const auto sites = j.at("sites").get<std::vector<int>>();
    const auto& amps = j.at("gamma_bar");
    if (sites.empty()) throw std::invalid_argument("pulse set: empty site list");
    for (std::size_t i = 1; i < sites.size(); ++i) {
        if (sites[i] != sites[i - 1] + 1) {
            throw std::invalid_argument("pulse set: sites must be consecutive");
        }
    }
    if (!amps.is_array() || amps.size() != sites.size()) {
        throw std::invalid_argument("pulse set: gamma_bar length differs from sites");
    }
    Eigen::VectorXcd gamma_bar(static_cast<Eigen::Index>(sites.size()));
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const auto& pair = amps[i];
        if (!pair.is_array() || pair.size() != 2) {
            throw std::invalid_argument("pulse set: gamma_bar entries must be [re, im]");
        }
        gamma_bar(static_cast<Eigen::Index>(i)) = {pair[0].get<double>(), pair[1].get<double>()};
    }
    return PulseSet{SiteIndexSet(sites.front(), static_cast<int>(sites.size())),
                    std::move(gamma_bar),
                    GammaValue{j.at("gamma_scale").get<double>()},
                    j.at("seed").get<std::uint64_t>(),
                    j.at("likelihood_exponent").get<double>()};
}

} // namespace pulsemix
