// Mode lattice, site functions and the transform C.

#include <cmath>
#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "pulsemix/modes.hpp"

using namespace pulsemix;

namespace {

// (1/√N) Σ_m e^{iκ_m x}/√L, straight from the definition
double w_by_mode_sum(double l, int N, double x) {
    const double L = N * l;
    const int n = (N - 1) / 2;
    std::complex<double> acc{0.0, 0.0};
    for (int m = -n; m <= n; ++m) acc += std::exp(std::complex<double>(0.0, 2.0 * kPi * m / L * x));
    return (acc / std::sqrt(N * L)).real();
}

} // namespace

TEST(SpectralWindow, DerivedQuantities) {
    const SpectralWindow w(5.0, 0.5, 7);
    EXPECT_EQ(w.half_width(), 3);
    EXPECT_DOUBLE_EQ(w.quant_length(), 3.5);
    EXPECT_DOUBLE_EQ(w.kappa(2), 2.0 * kPi * 2 / 3.5);
    EXPECT_DOUBLE_EQ(w.wavenumber(-1), 5.0 - 2.0 * kPi / 3.5);
    for (int m = -3; m <= 3; ++m) EXPECT_LT(std::abs(w.kappa(m)), kPi / 0.5);
}

TEST(SpectralWindow, RejectsInvalid) {
    EXPECT_THROW(SpectralWindow(0.0, 1.0, 4), std::invalid_argument);
    EXPECT_THROW(SpectralWindow(0.0, 1.0, 0), std::invalid_argument);
    EXPECT_THROW(SpectralWindow(0.0, 0.0, 3), std::invalid_argument);
    EXPECT_THROW(SpectralWindow(0.0, -1.0, 3), std::invalid_argument);
    EXPECT_THROW(SpectralWindow(0.0, 1.0, 3).kappa(2), std::out_of_range);
}

TEST(SiteIndexSet, FullAndCentered) {
    const SpectralWindow w(0.0, 1.0, 9);
    const auto full = SiteIndexSet::full(w);
    EXPECT_EQ(full.first(), -4);
    EXPECT_EQ(full.last(), 4);
    EXPECT_EQ(SiteIndexSet::centered(9), full);
    EXPECT_EQ(SiteIndexSet::centered(4).first(), -2);
    EXPECT_EQ(SiteIndexSet::centered(4).last(), 1);
    EXPECT_EQ(full.offset(-4), 0u);
    EXPECT_THROW(full.offset(5), std::out_of_range);
    EXPECT_THROW(SiteIndexSet(0, 0), std::invalid_argument);
}

TEST(Chi, ZeroModeIsConstant) {
    const SpectralWindow w(3.0, 0.7, 5);
    for (double z : {-3.0, 0.0, 1.234, 10.0}) {
        const auto v = chi(w, 0, z);
        EXPECT_NEAR(v.real(), 1.0 / std::sqrt(w.quant_length()), 1e-15);
        EXPECT_NEAR(v.imag(), 0.0, 1e-15);
    }
}

TEST(Chi, PeriodicOverQuantizationLength) {
    const SpectralWindow w(0.0, 1.0, 3);
    const auto a = chi(w, 1, 0.0);
    const auto b = chi(w, 1, w.quant_length());
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-14);
}

TEST(Chi, QuarterPointValue) {
    // κ_1 = 2π/3, z = 1/4 → phase π/6
    const SpectralWindow w(0.0, 1.0, 3);
    const auto expected = std::polar(1.0 / std::sqrt(3.0), kPi / 6.0);
    EXPECT_NEAR(std::abs(chi(w, 1, 0.25) - expected), 0.0, 1e-15);
    EXPECT_THROW(chi(w, 2, 0.0), std::out_of_range);
}

TEST(WSite, SingularPointsAndZeros) {
    const SpectralWindow w(0.0, 1.0, 3);
    EXPECT_NEAR(w_site(w, 0, 0.0), std::sqrt(3.0 / 3.0), 1e-14);
    EXPECT_NEAR(w_site(w, 0, 1.0), 0.0, 1e-14);
    // z - sl = L and 2L are also removable singularities
    EXPECT_NEAR(w_site(w, 0, 3.0), std::sqrt(3.0 / 3.0), 1e-12);
    EXPECT_NEAR(w_site(w, 1, 1.0 + 6.0), std::sqrt(3.0 / 3.0), 1e-12);

    const SpectralWindow w7(0.0, 0.4, 7);
    EXPECT_NEAR(w_site(w7, 2, 0.8), std::sqrt(7.0 / w7.quant_length()), 1e-12);
    EXPECT_NEAR(w_site(w7, 2, 0.8 + 1e-11), std::sqrt(7.0 / w7.quant_length()), 1e-9);
}

TEST(WSite, OffsetSiteValueMatchesModeSum) {
    // w(0.5 - 2) = (1/3) sin(-1.5π)/sin(-0.5π) = -1/3
    const SpectralWindow w(0.0, 1.0, 3);
    EXPECT_NEAR(w_by_mode_sum(1.0, 3, -1.5), -1.0 / 3.0, 1e-15);
    EXPECT_NEAR(w_site(w, 2, 0.5), -1.0 / 3.0, 1e-14);
}

TEST(WSite, BasisConsistencyWithTransform) {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    for (int N : {1, 3, 11, 21}) {
        const SpectralWindow w(2.0, 0.8, N);
        const auto C = transform_matrix(w);
        const int n = w.half_width();
        for (int trial = 0; trial < 100; ++trial) {
            const double z = dist(gen);
            for (int s = -n; s <= n; ++s) {
                std::complex<double> acc{0.0, 0.0};
                for (int m = -n; m <= n; ++m) acc += chi(w, m, z) * std::conj(C(s + n, m + n));
                EXPECT_NEAR(acc.real(), w_site(w, s, z), 1e-10);
                EXPECT_NEAR(acc.imag(), 0.0, 1e-10);
            }
        }
    }
}

TEST(WSite, Periodicity) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    const SpectralWindow w(0.0, 1.3, 9);
    for (int i = 0; i < 100; ++i) {
        const double z = dist(gen);
        EXPECT_NEAR(w_site(w, 0, z + w.quant_length()), w_site(w, 0, z), 1e-12);
    }
}

TEST(WSite, OrthonormalOverOnePeriod) {
    // trapezoid with 64N points; exact for the band-limited periodic integrand
    for (int N : {1, 3, 9, 21}) {
        const SpectralWindow w(0.0, 1.0, N);
        const int n = w.half_width();
        const int P = 64 * N;
        const double L = w.quant_length();
        const double h = L / P;
        for (int s = -n; s <= n; ++s) {
            for (int t = -n; t <= n; ++t) {
                double sum = 0.0;
                for (int i = 0; i < P; ++i) {
                    const double z = -0.5 * L + i * h;
                    sum += w_site(w, s, z) * w_site(w, t, z);
                }
                EXPECT_NEAR(sum * h, s == t ? 1.0 : 0.0, 1e-8) << "N=" << N << " s=" << s << " t=" << t;
            }
        }
    }
}

TEST(TransformMatrix, SingleModeIsOne) {
    const auto C = transform_matrix(SpectralWindow(0.0, 1.0, 1));
    ASSERT_EQ(C.rows(), 1);
    EXPECT_NEAR(std::abs(C(0, 0) - 1.0), 0.0, 1e-15);
}

TEST(TransformMatrix, ThreeModeEntriesAndUnitarity) {
    const auto C = transform_matrix(SpectralWindow(0.0, 1.0, 3));
    for (int s = -1; s <= 1; ++s) {
        for (int m = -1; m <= 1; ++m) {
            const auto expected = std::polar(1.0 / std::sqrt(3.0), 2.0 * kPi * s * m / 3.0);
            EXPECT_NEAR(std::abs(C(s + 1, m + 1) - expected), 0.0, 1e-15);
        }
    }
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_LT((C.adjoint() * C - I).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((C * C.adjoint() - I).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransformMatrix, UnitaryUpToLargeN) {
    for (int N : {1, 3, 27, 101, 501, 999}) {
        const auto C = transform_matrix(SpectralWindow(0.0, 1.0, N));
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
        EXPECT_LT((C.adjoint() * C - I).cwiseAbs().maxCoeff(), 1e-12) << "N=" << N;
        EXPECT_NEAR(C.cwiseAbs().minCoeff(), 1.0 / std::sqrt(N), 1e-15);
        EXPECT_NEAR(C.cwiseAbs().maxCoeff(), 1.0 / std::sqrt(N), 1e-15);
    }
}

TEST(SiteAmplitudes, ZeroSingleAndParseval) {
    const auto C1 = transform_matrix(SpectralWindow(0.0, 1.0, 1));
    Eigen::VectorXcd a1(1);
    a1 << std::complex<double>(0.3, -0.2);
    EXPECT_NEAR(std::abs(to_site_amplitudes(C1, a1)(0) - a1(0)), 0.0, 1e-15);

    const auto C = transform_matrix(SpectralWindow(0.0, 1.0, 15));
    EXPECT_EQ(to_site_amplitudes(C, Eigen::VectorXcd::Zero(15)).norm(), 0.0);

    std::mt19937_64 gen(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXcd alpha(15);
        for (int i = 0; i < 15; ++i) alpha(i) = {g(gen), g(gen)};
        const auto gamma = to_site_amplitudes(C, alpha);
        EXPECT_NEAR(gamma.squaredNorm(), alpha.squaredNorm(), 1e-12);
        EXPECT_LT((to_mode_amplitudes(C, gamma) - alpha).cwiseAbs().maxCoeff(), 1e-13);
    }
    EXPECT_THROW(to_site_amplitudes(C, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
    EXPECT_THROW(to_mode_amplitudes(C, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}
