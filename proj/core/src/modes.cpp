// modes.cpp — Mode lattice, site functions and the DFT-like transform.

#include "pulsemix/modes.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pulsemix {

SpectralWindow::SpectralWindow(double k_center, double lattice_const, int n_modes)
    : k_center_(k_center),
      lattice_const_(lattice_const),
      n_modes_(n_modes),
      quant_length_(static_cast<double>(n_modes) * lattice_const) {
    if (!std::isfinite(k_center)) {
        throw std::invalid_argument("SpectralWindow: k_center must be finite");
    }
    if (!(lattice_const > 0.0) || !std::isfinite(lattice_const)) {
        throw std::invalid_argument("SpectralWindow: lattice_const must be positive");
    }
    if (n_modes < 1 || n_modes % 2 == 0) {
        throw std::invalid_argument("SpectralWindow: n_modes must be odd and >= 1, got " +
                                    std::to_string(n_modes));
    }
}

double SpectralWindow::kappa(int m) const {
    if (!contains(m)) {
        throw std::out_of_range("SpectralWindow: mode index " + std::to_string(m) +
                                " outside -n..n");
    }
    return 2.0 * kPi * static_cast<double>(m) / quant_length_;
}

std::size_t SpectralWindow::offset(int index) const {
    if (!contains(index)) {
        throw std::out_of_range("SpectralWindow: index " + std::to_string(index) +
                                " outside -n..n");
    }
    return static_cast<std::size_t>(index + half_width());
}

SiteIndexSet::SiteIndexSet(int first, int count) : first_(first), count_(count) {
    if (count < 1) {
        throw std::invalid_argument("SiteIndexSet: site set must be nonempty");
    }
}

SiteIndexSet SiteIndexSet::full(const SpectralWindow& window) {
    return SiteIndexSet(-window.half_width(), window.n_modes());
}

SiteIndexSet SiteIndexSet::centered(int count) {
    if (count < 1) {
        throw std::invalid_argument("SiteIndexSet: site set must be nonempty");
    }
    return SiteIndexSet(-(count / 2), count);
}

std::size_t SiteIndexSet::offset(int s) const {
    if (!contains(s)) {
        throw std::out_of_range("SiteIndexSet: site " + std::to_string(s) + " not in set");
    }
    return static_cast<std::size_t>(s - first_);
}

std::vector<int> SiteIndexSet::to_vector() const {
    std::vector<int> out(static_cast<std::size_t>(count_));
    for (int i = 0; i < count_; ++i) out[static_cast<std::size_t>(i)] = first_ + i;
    return out;
}

complex chi(const SpectralWindow& window, int m, double z) {
    const double k = window.kappa(m);
    return std::polar(1.0 / std::sqrt(window.quant_length()), k * z);
}

double w_site(const SpectralWindow& window, int s, double z) {
    const double l = window.lattice_const();
    const double L = window.quant_length();
    const double n = static_cast<double>(window.n_modes());
    const double x = z - static_cast<double>(s) * l;
    const double norm = 1.0 / std::sqrt(n * L);

    const double denom = std::sin(kPi * x / L);
    if (std::abs(denom) < 1e-9) {
        // removable singularity: ratio of derivatives
        return norm * n * std::cos(kPi * x / l) / std::cos(kPi * x / L);
    }
    return norm * std::sin(kPi * x / l) / denom;
}

Eigen::MatrixXcd transform_matrix(const SpectralWindow& window) {
    const int N = window.n_modes();
    const int n = window.half_width();
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    Eigen::MatrixXcd C(N, N);
    for (int s = -n; s <= n; ++s) {
        for (int m = -n; m <= n; ++m) {
            // reduce s·m mod N before forming the phase
            const long long r = ((static_cast<long long>(s) * m) % N + N) % N;
            const double phase = 2.0 * kPi * static_cast<double>(r) / N;
            C(s + n, m + n) = std::polar(scale, phase);
        }
    }
    return C;
}

Eigen::VectorXcd to_site_amplitudes(const Eigen::MatrixXcd& transform,
                                    const Eigen::VectorXcd& alpha) {
    if (transform.cols() != alpha.size()) {
        throw std::invalid_argument("to_site_amplitudes: dimension mismatch");
    }
    return transform * alpha;
}

Eigen::VectorXcd to_mode_amplitudes(const Eigen::MatrixXcd& transform,
                                    const Eigen::VectorXcd& gamma) {
    if (transform.rows() != gamma.size()) {
        throw std::invalid_argument("to_mode_amplitudes: dimension mismatch");
    }
    return transform.adjoint() * gamma;
}

} // namespace pulsemix
