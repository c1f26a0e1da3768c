// Diagonalization conventions and pulse-set generation.

#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "pulsemix/sampler.hpp"

using namespace pulsemix;
using cd = std::complex<double>;

namespace {

ThermalContext linear_ctx(double beta) { return ThermalContext(beta, Dispersion::linear(1.0)); }

LambdaMatrix identity_lambda(int count) {
    return LambdaMatrix{SiteIndexSet::centered(count), Eigen::MatrixXcd::Identity(count, count), {0.0}};
}

LambdaMatrix full_window_lambda(int N, double beta = 1.0) {
    const SpectralWindow w(5.0, 1.0, N);
    return lambda_discrete(linear_ctx(beta), w, SiteIndexSet::full(w));
}

} // namespace

TEST(Diagonalize, IdentityGivesIdentity) {
    const auto eig = diagonalize(identity_lambda(5));
    EXPECT_LT((eig.theta.array() - 1.0).abs().maxCoeff(), 1e-15);
    EXPECT_LT((eig.U - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Diagonalize, ThreeModeSpectrumAscending) {
    const SpectralWindow w(5.0, 1.0, 3);
    const auto lambda = full_window_lambda(3);
    const auto eig = diagonalize(lambda);
    std::vector<double> oracle;
    for (int m = -1; m <= 1; ++m) {
        oracle.push_back(std::exp(-2.0 * lambda.gamma.value) * std::expm1(w.wavenumber(m)));
    }
    std::sort(oracle.begin(), oracle.end());
    for (int r = 0; r < 3; ++r) EXPECT_NEAR(eig.theta(r) / oracle[static_cast<std::size_t>(r)], 1.0, 1e-12);
}

TEST(Diagonalize, ResidualAndPhaseConvention) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> beta_dist(0.3, 2.0);
    std::uniform_real_distribution<double> k_dist(4.0, 9.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto lambda = lambda_continuum(linear_ctx(beta_dist(gen)), SpectralWindow(k_dist(gen), 1.0, 1),
                                             SiteIndexSet::centered(21), 256);
        const auto eig = diagonalize(lambda);
        const double norm = lambda.entries.cwiseAbs().maxCoeff();
        const Eigen::MatrixXcd D = eig.U.adjoint() * lambda.entries * eig.U;
        const Eigen::MatrixXcd expected = eig.theta.cast<cd>().asDiagonal();
        EXPECT_LT((D - expected).cwiseAbs().maxCoeff(), 1e-10 * norm);
        EXPECT_LT((eig.U.adjoint() * eig.U - Eigen::MatrixXcd::Identity(21, 21)).cwiseAbs().maxCoeff(), 1e-12);
        for (int r = 1; r < 21; ++r) EXPECT_LE(eig.theta(r - 1), eig.theta(r));
        for (int r = 0; r < 21; ++r) {
            Eigen::Index pivot = 0;
            eig.U.col(r).cwiseAbs().maxCoeff(&pivot);
            EXPECT_GT(eig.U(pivot, r).real(), 0.0);
            EXPECT_EQ(eig.U(pivot, r).imag(), 0.0);
        }
    }
}

TEST(Diagonalize, RejectsNonHermitian) {
    auto lambda = identity_lambda(3);
    lambda.entries(0, 1) = 1e-3;
    EXPECT_THROW(diagonalize(lambda), std::invalid_argument);
}

TEST(TypicalPulseSet, ExponentIsHalfTheSiteCount) {
    const auto lambda = lambda_continuum(linear_ctx(1.0), SpectralWindow(10.0, 1.0, 1), SiteIndexSet::centered(41));
    const auto eig = diagonalize(lambda);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto pulse = typical_pulse_set(eig, lambda.gamma, seed);
        EXPECT_NEAR(pulse.likelihood_exponent / 20.5, 1.0, 1e-10);
        EXPECT_EQ(pulse.seed, seed);
        EXPECT_EQ(pulse.sites, lambda.sites);
        const auto eta = eta_from_gamma_bar(eig, pulse.gamma_bar);
        for (int r = 0; r < eig.size(); ++r) {
            EXPECT_NEAR(std::abs(eta(r)), 1.0 / std::sqrt(2.0 * eig.theta(r)), 1e-10);
        }
    }
}

TEST(TypicalPulseSet, SingleSiteUnitLambda) {
    const auto eig = diagonalize(identity_lambda(1));
    const auto pulse = typical_pulse_set(eig, {0.0}, 99);
    EXPECT_NEAR(std::abs(pulse.gamma_bar(0)), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(TypicalPulseSet, DeterministicPerSeed) {
    const auto lambda = full_window_lambda(9);
    const auto eig = diagonalize(lambda);
    const auto a = typical_pulse_set(eig, lambda.gamma, 123);
    const auto b = typical_pulse_set(eig, lambda.gamma, 123);
    const auto c = typical_pulse_set(eig, lambda.gamma, 124);
    EXPECT_EQ(a.gamma_bar, b.gamma_bar);
    EXPECT_GT((a.gamma_bar - c.gamma_bar).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(TypicalPulseSet, RejectsNonPositiveTheta) {
    auto lambda = identity_lambda(2);
    lambda.entries(1, 1) = -1.0;
    const auto eig = diagonalize(lambda);
    EXPECT_THROW(typical_pulse_set(eig, {0.0}, 1), std::domain_error);
    EXPECT_THROW(random_pulse_set(eig, {0.0}, 1), std::domain_error);
}

TEST(AtypicalPulseSet, VacuumTypicalAndScaled) {
    const auto lambda = full_window_lambda(7);
    const auto eig = diagonalize(lambda);
    const auto vacuum = atypical_pulse_set(eig, lambda.gamma, Eigen::VectorXd::Zero(7), 3);
    EXPECT_EQ(vacuum.gamma_bar.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(vacuum.likelihood_exponent, 0.0);

    const Eigen::VectorXd typical_mag = (2.0 * eig.theta.array()).rsqrt().matrix();
    const auto same = atypical_pulse_set(eig, lambda.gamma, typical_mag, 3);
    const auto typical = typical_pulse_set(eig, lambda.gamma, 3);
    EXPECT_LT((same.gamma_bar - typical.gamma_bar).cwiseAbs().maxCoeff(), 1e-15);

    const auto doubled = atypical_pulse_set(eig, lambda.gamma, 2.0 * typical_mag, 3);
    EXPECT_NEAR(doubled.likelihood_exponent / (4.0 * 3.5), 1.0, 1e-10);

    EXPECT_THROW(atypical_pulse_set(eig, lambda.gamma, Eigen::VectorXd::Zero(3), 3), std::invalid_argument);
    EXPECT_THROW(atypical_pulse_set(eig, lambda.gamma, -typical_mag, 3), std::invalid_argument);
}

TEST(PulseSet, EtaRoundTripAndQuadraticFormIdentity) {
    const auto lambda = lambda_continuum(linear_ctx(0.7), SpectralWindow(8.0, 1.0, 1), SiteIndexSet::centered(15));
    const auto eig = diagonalize(lambda);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto pulse = random_pulse_set(eig, lambda.gamma, seed);
        const auto eta = eta_from_gamma_bar(eig, pulse.gamma_bar);
        EXPECT_LT((gamma_bar_from_eta(eig, eta) - pulse.gamma_bar).cwiseAbs().maxCoeff(), 1e-12);
        double diag = 0.0;
        for (int r = 0; r < eig.size(); ++r) diag += eig.theta(r) * std::norm(eta(r));
        EXPECT_NEAR(pulse.likelihood_exponent / diag, 1.0, 1e-9);
        EXPECT_GE(pulse.likelihood_exponent, 0.0);
        EXPECT_LT((pulse.physical_amplitudes() - pulse.gamma_bar * std::exp(-lambda.gamma.value))
                      .cwiseAbs().maxCoeff(), 1e-15);
    }
}

TEST(RandomPulseSet, ZeroMeanAndEtaCovariance) {
    const auto lambda = full_window_lambda(5, 0.6);
    const auto eig = diagonalize(lambda);
    const int M = 100000;
    const int R = eig.size();
    Eigen::VectorXcd mean_gamma = Eigen::VectorXcd::Zero(R);
    Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(R, R);
    for (int i = 0; i < M; ++i) {
        const auto pulse = random_pulse_set(eig, lambda.gamma, static_cast<std::uint64_t>(i));
        mean_gamma += pulse.gamma_bar;
        const auto eta = eta_from_gamma_bar(eig, pulse.gamma_bar);
        cov += eta * eta.adjoint();
    }
    mean_gamma /= M;
    cov /= M;
    // E|γ̄_s|² = (Λ⁻¹)_ss
    const Eigen::MatrixXcd inv = lambda.entries.inverse();
    for (int s = 0; s < R; ++s) {
        EXPECT_LT(std::abs(mean_gamma(s)), 5.0 * std::sqrt(inv(s, s).real() / M));
    }
    for (int r = 0; r < R; ++r) {
        for (int q = 0; q < R; ++q) {
            const double truth = r == q ? 1.0 / eig.theta(r) : 0.0;
            const double sigma = 1.0 / std::sqrt(eig.theta(r) * eig.theta(q) * M);
            EXPECT_LT(std::abs(cov(r, q) - truth), 5.0 * sigma) << r << "," << q;
        }
    }
}

TEST(RandomPulseSet, SingleModeExponentialIntensity) {
    const auto eig = diagonalize(identity_lambda(1));
    const int M = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    int above_one = 0;
    for (int i = 0; i < M; ++i) {
        const double I = std::norm(random_pulse_set(eig, {0.0}, static_cast<std::uint64_t>(i)).gamma_bar(0));
        sum += I;
        sum_sq += I * I;
        above_one += I > 1.0;
    }
    // Exp(1): mean 1, E[I²] = 2, P(I > 1) = e^{-1}
    EXPECT_NEAR(sum / M, 1.0, 5.0 / std::sqrt(M));
    EXPECT_NEAR(sum_sq / M, 2.0, 5.0 * std::sqrt(20.0 / M));
    const double p = std::exp(-1.0);
    EXPECT_NEAR(static_cast<double>(above_one) / M, p, 5.0 * std::sqrt(p * (1 - p) / M));
}

TEST(RandomPulseSet, BitwiseReproducible) {
    const auto lambda = full_window_lambda(9);
    const auto eig = diagonalize(lambda);
    const auto a = random_pulse_set(eig, lambda.gamma, 77);
    const auto b = random_pulse_set(eig, lambda.gamma, 77);
    EXPECT_EQ(a.gamma_bar, b.gamma_bar);
    EXPECT_EQ(a.likelihood_exponent, b.likelihood_exponent);
}

TEST(PulseSetJson, RoundTripAndValidation) {
    const auto lambda = full_window_lambda(5);
    const auto pulse = random_pulse_set(diagonalize(lambda), lambda.gamma, 2024);
    const auto j = to_json(pulse);
    EXPECT_EQ(j.at("sites").get<std::vector<int>>(), (std::vector<int>{-2, -1, 0, 1, 2}));
    EXPECT_EQ(j.at("gamma_bar").size(), 5u);
    const auto back = pulse_set_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back.gamma_bar, pulse.gamma_bar);
    EXPECT_EQ(back.sites, pulse.sites);
    EXPECT_EQ(back.seed, 2024u);
    EXPECT_EQ(back.gamma_scale.value, pulse.gamma_scale.value);
    EXPECT_EQ(back.likelihood_exponent, pulse.likelihood_exponent);

    auto gap = j;
    gap["sites"] = {0, 2, 3, 4, 5};
    EXPECT_THROW(pulse_set_from_json(gap), std::invalid_argument);
    auto short_amps = j;
    short_amps["gamma_bar"].erase(0);
    EXPECT_THROW(pulse_set_from_json(short_amps), std::invalid_argument);
}

TEST(Rng, SplitStreamsAreIndependentOfProgress) {
    Rng a(5);
    const Rng b(5);
    a.uniform();
    Rng sa = a.split(3);
    Rng sb = b.split(3);
    EXPECT_EQ(sa.uniform(), sb.uniform());
    Rng c = b.split(4);
    EXPECT_NE(b.split(3).uniform(), c.uniform());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}
