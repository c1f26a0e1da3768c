// modes.hpp — Mode lattice of a spectral window, localized site functions,
// and the unitary transform between the two bases.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace pulsemix {

using complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// A contiguous block of N (odd) wavenumbers k̃ + κ_m, κ_m = 2πm/L, m = -n..n,
// with L = N·l. The same integer range labels the pulse sites s = -n..n.
class SpectralWindow {
public:
    SpectralWindow(double k_center, double lattice_const, int n_modes);

    double k_center() const noexcept { return k_center_; }
    double lattice_const() const noexcept { return lattice_const_; }
    int n_modes() const noexcept { return n_modes_; }
    int half_width() const noexcept { return (n_modes_ - 1) / 2; }
    double quant_length() const noexcept { return quant_length_; }

    // κ_m; throws std::out_of_range for |m| > n
    double kappa(int m) const;
    double wavenumber(int m) const { return k_center_ + kappa(m); }

    bool contains(int index) const noexcept {
        return index >= -half_width() && index <= half_width();
    }
    // storage offset of a symmetric index
    std::size_t offset(int index) const;

private:
    double k_center_;
    double lattice_const_;
    int n_modes_;
    double quant_length_;
};

// Consecutive pulse-site indices first, first+1, ..., first+count-1.
class SiteIndexSet {
public:
    SiteIndexSet(int first, int count);

    static SiteIndexSet full(const SpectralWindow& window);
    // count sites around zero; odd counts are symmetric, even counts lean negative
    static SiteIndexSet centered(int count);

    int first() const noexcept { return first_; }
    int last() const noexcept { return first_ + count_ - 1; }
    int size() const noexcept { return count_; }
    int operator[](int i) const noexcept { return first_ + i; }

    bool contains(int s) const noexcept { return s >= first_ && s <= last(); }
    std::size_t offset(int s) const;
    std::vector<int> to_vector() const;

    bool operator==(const SiteIndexSet&) const = default;

private:
    int first_;
    int count_;
};

// χ_m(z) = e^{iκ_m z}/√L
complex chi(const SpectralWindow& window, int m, double z);

// w_s(z) = w(z - s·l), w(z) = sin(πz/l) / (√(NL) sin(πz/L)); periodic in L.
double w_site(const SpectralWindow& window, int s, double z);

// C_sm = e^{2πi s m/N}/√N; rows are sites, columns modes, both offset by n.
Eigen::MatrixXcd transform_matrix(const SpectralWindow& window);

// γ = Cα
Eigen::VectorXcd to_site_amplitudes(const Eigen::MatrixXcd& transform,
                                    const Eigen::VectorXcd& alpha);
// α = C†γ
Eigen::VectorXcd to_mode_amplitudes(const Eigen::MatrixXcd& transform,
                                    const Eigen::VectorXcd& gamma);

} // namespace pulsemix
