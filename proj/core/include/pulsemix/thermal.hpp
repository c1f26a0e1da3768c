// thermal.hpp — Dispersion, thermal occupation, the scale factor Γ and the
// Λ kernel of the pulse-set density, in finite-N and continuum form.

#pragma once

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "pulsemix/modes.hpp"
#include "pulsemix/quadrature.hpp"

namespace pulsemix {

// ω(k): either v·|k| or a piecewise-linear table over strictly increasing k.
class Dispersion {
public:
    enum class Kind { linear, tabulated };

    static Dispersion linear(double slope);
    static Dispersion tabulated(std::vector<double> k, std::vector<double> omega);

    // throws std::domain_error outside the table
    double operator()(double k) const;

    Kind kind() const noexcept { return kind_; }
    double slope() const noexcept { return slope_; }
    const std::vector<double>& table_k() const noexcept { return k_; }
    const std::vector<double>& table_omega() const noexcept { return omega_; }

private:
    Dispersion() = default;

    Kind kind_{Kind::linear};
    double slope_{1.0};
    std::vector<double> k_;
    std::vector<double> omega_;
};

// Two columns (k, ω) separated by commas or whitespace; '#' starts a comment.
// A non-numeric first line is treated as a header.
Dispersion read_dispersion_table(std::istream& in);
Dispersion load_dispersion_table(const std::filesystem::path& path);

struct ThermalContext {
    double beta;
    double hbar;
    Dispersion dispersion;

    ThermalContext(double beta, Dispersion dispersion, double hbar = 1.0);

    // βħω(k)
    double reduced_energy(double k) const { return beta * hbar * dispersion(k); }
};

// βħω(k̃ + κ) > 0 for κ in [-π/l, π/l] and, for tables, coverage of that
// range; throws std::domain_error otherwise
void require_positive_energy(const ThermalContext& ctx, const SpectralWindow& window);

// ln(e^x - 1), stable for large x; x must be > 0
double log_expm1(double x);

// 1/(e^{βħω(k)} - 1); std::domain_error when βħω(k) <= 0
double mean_occupation(const ThermalContext& ctx, double k);

struct GammaValue {
    double value{0.0};
};

GammaValue gamma_discrete(const ThermalContext& ctx, const SpectralWindow& window);
GammaValue gamma_continuum(const ThermalContext& ctx, const SpectralWindow& window,
                           int quad_points = kDefaultQuadPoints);

// Hermitian Toeplitz kernel over a site set; entries(i, j) is Λ_{s_i s_j}.
struct LambdaMatrix {
    SiteIndexSet sites;
    Eigen::MatrixXcd entries;
    GammaValue gamma;

    int size() const noexcept { return sites.size(); }
    std::complex<double> operator()(int s, int s_prime) const {
        return entries(static_cast<Eigen::Index>(sites.offset(s)),
                       static_cast<Eigen::Index>(sites.offset(s_prime)));
    }
    // Λ_{s+d, s} for the first site s; d in 0..size()-1
    std::complex<double> lag(int d) const;
};

LambdaMatrix lambda_discrete(const ThermalContext& ctx, const SpectralWindow& window,
                             const SiteIndexSet& sites);
LambdaMatrix lambda_continuum(const ThermalContext& ctx, const SpectralWindow& window,
                              const SiteIndexSet& sites,
                              int quad_points = kDefaultQuadPoints);

// L → 3L, N → 3N at fixed l and k̃
SpectralWindow refine(const SpectralWindow& window);

} // namespace pulsemix
