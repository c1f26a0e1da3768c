// thermal.cpp — Occupations, Γ and Λ.

#include "pulsemix/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pulsemix {

Dispersion Dispersion::linear(double slope) {
    if (!(slope > 0.0) || !std::isfinite(slope)) {
        throw std::invalid_argument("Dispersion: linear slope must be positive");
    }
    Dispersion d;
    d.kind_ = Kind::linear;
    d.slope_ = slope;
    return d;
}

Dispersion Dispersion::tabulated(std::vector<double> k, std::vector<double> omega) {
    if (k.size() != omega.size()) {
        throw std::invalid_argument("Dispersion: k and omega columns differ in length");
    }
    if (k.size() < 2) throw std::invalid_argument("Dispersion: table needs >= 2 rows");
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!std::isfinite(k[i]) || !std::isfinite(omega[i])) {
            throw std::invalid_argument("Dispersion: non-finite table entry");
        }
        if (i > 0 && !(k[i] > k[i - 1])) {
            throw std::invalid_argument("Dispersion: k must be strictly increasing");
        }
    }
    Dispersion d;
    d.kind_ = Kind::tabulated;
    d.k_ = std::move(k);
    d.omega_ = std::move(omega);
    return d;
}

double Dispersion::operator()(double k) const {
    if (kind_ == Kind::linear) return slope_ * std::abs(k);

    if (k < k_.front() || k > k_.back()) {
        throw std::domain_error("Dispersion: k = " + std::to_string(k) +
                                " outside tabulated range");
    }
    auto it = std::upper_bound(k_.begin(), k_.end(), k);
    if (it == k_.end()) return omega_.back();
    const auto hi = static_cast<std::size_t>(it - k_.begin());
    const auto lo = hi - 1;
    const double t = (k - k_[lo]) / (k_[hi] - k_[lo]);
    return omega_[lo] + t * (omega_[hi] - omega_[lo]);
}

Dispersion read_dispersion_table(std::istream& in) {
    std::vector<double> ks;
    std::vector<double> ws;
    std::string line;
    bool first_data_line = true;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::string a;
        std::string b;
        if (!(row >> a)) continue;
        if (!(row >> b)) {
            throw std::invalid_argument("dispersion table line " + std::to_string(line_no) +
                                        ": expected two columns");
        }
        try {
            std::size_t pa = 0;
            std::size_t pb = 0;
            const double k = std::stod(a, &pa);
            const double w = std::stod(b, &pb);
            if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing");
            ks.push_back(k);
            ws.push_back(w);
        } catch (const std::exception&) {
            if (first_data_line) {
                first_data_line = false;
                continue;
            }
            throw std::invalid_argument("dispersion table line " + std::to_string(line_no) +
                                        ": not numeric");
        }
        first_data_line = false;
    }
    return Dispersion::tabulated(std::move(ks), std::move(ws));
}

Dispersion load_dispersion_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open dispersion table " + path.string());
    return read_dispersion_table(in);
}

ThermalContext::ThermalContext(double beta_, Dispersion dispersion_, double hbar_)
    : beta(beta_), hbar(hbar_), dispersion(std::move(dispersion_)) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::invalid_argument("ThermalContext: beta must be positive");
    }
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw std::invalid_argument("ThermalContext: hbar must be positive");
    }
}

void require_positive_energy(const ThermalContext& ctx, const SpectralWindow& window) {
    const double lo = window.k_center() - kPi / window.lattice_const();
    const double hi = window.k_center() + kPi / window.lattice_const();
    auto check = [&](double k) {
        if (!(ctx.reduced_energy(k) > 0.0)) {
            throw std::domain_error("beta*hbar*omega(k) is not positive at k = " +
                                    std::to_string(k) + " inside the spectral window");
        }
    };
    const Dispersion& d = ctx.dispersion;
    if (d.kind() == Dispersion::Kind::linear) {
        // v|k| vanishes only at k = 0
        if (lo <= 0.0 && hi >= 0.0) check(0.0);
        return;
    }
    // piecewise linear: extremes sit at the window edges or table nodes
    check(lo);
    check(hi);
    for (double k : d.table_k()) {
        if (k > lo && k < hi) check(k);
    }
}

double log_expm1(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("log_expm1: argument must be positive, got " +
                                std::to_string(x));
    }
    if (x > 30.0) return x + std::log1p(-std::exp(-x));
    return std::log(std::expm1(x));
}

double mean_occupation(const ThermalContext& ctx, double k) {
    const double x = ctx.reduced_energy(k);
    if (!(x > 0.0)) {
        throw std::domain_error("mean_occupation: beta*hbar*omega(k) must be positive at k = " +
                                std::to_string(k));
    }
    return 1.0 / std::expm1(x);
}

namespace {

// ln(e^{βħω(k̃+κ)} - 1)
double log_inverse_occupation(const ThermalContext& ctx, double k) {
    const double x = ctx.reduced_energy(k);
    if (!(x > 0.0)) {
        throw std::domain_error("beta*hbar*omega(k) must be positive at k = " +
                                std::to_string(k));
    }
    return log_expm1(x);
}

QuadratureRule window_rule(const SpectralWindow& window, int quad_points) {
    const double edge = kPi / window.lattice_const();
    return composite_gauss_legendre(-edge, edge, quad_points);
}

void require_sites_in_window(const SpectralWindow& window, const SiteIndexSet& sites) {
    if (!window.contains(sites.first()) || !window.contains(sites.last())) {
        throw std::out_of_range("lambda_discrete: site set [" + std::to_string(sites.first()) +
                                ", " + std::to_string(sites.last()) + "] exceeds window -n..n");
    }
}

} // namespace

GammaValue gamma_discrete(const ThermalContext& ctx, const SpectralWindow& window) {
    const int n = window.half_width();
    double sum = 0.0;
    for (int m = -n; m <= n; ++m) sum += log_inverse_occupation(ctx, window.wavenumber(m));
    return {sum / (2.0 * window.n_modes())};
}

GammaValue gamma_continuum(const ThermalContext& ctx, const SpectralWindow& window,
                           int quad_points) {
    // nodes never land on a zero of ω, so test the whole band first
    require_positive_energy(ctx, window);
    const QuadratureRule rule = window_rule(window, quad_points);
    const double k0 = window.k_center();
    const double integral =
        rule.integrate([&](double kappa) { return log_inverse_occupation(ctx, k0 + kappa); });
    return {window.lattice_const() / 2.0 * integral / (2.0 * kPi)};
}

std::complex<double> LambdaMatrix::lag(int d) const {
    if (d < 0 || d >= size()) throw std::out_of_range("LambdaMatrix::lag: lag out of range");
    return entries(d, 0);
}

LambdaMatrix lambda_discrete(const ThermalContext& ctx, const SpectralWindow& window,
                             const SiteIndexSet& sites) {
    require_sites_in_window(window, sites);
    const GammaValue gamma = gamma_discrete(ctx, window);
    const int N = window.n_modes();
    const int n = window.half_width();

    // e^{-2Γ}(e^{βħω_m} - 1), formed in log space
    Eigen::VectorXd weight(N);
    for (int m = -n; m <= n; ++m) {
        weight(m + n) = std::exp(log_inverse_occupation(ctx, window.wavenumber(m)) -
                                 2.0 * gamma.value);
    }

    // rows s ∈ sites of C_sm = e^{2πi s m/N}/√N
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    Eigen::MatrixXcd rows(sites.size(), N);
    for (int i = 0; i < sites.size(); ++i) {
        for (int m = -n; m <= n; ++m) {
            const long long r = ((static_cast<long long>(sites[i]) * m) % N + N) % N;
            rows(i, m + n) = std::polar(scale, 2.0 * kPi * static_cast<double>(r) / N);
        }
    }
    // Λ = C* diag(weight) Cᵀ on the selected rows
    Eigen::MatrixXcd entries = rows.conjugate() * weight.asDiagonal() * rows.transpose();
    return {sites, std::move(entries), gamma};
}

LambdaMatrix lambda_continuum(const ThermalContext& ctx, const SpectralWindow& window,
                              const SiteIndexSet& sites, int quad_points) {
    const GammaValue gamma = gamma_continuum(ctx, window, quad_points);
    const QuadratureRule rule = window_rule(window, quad_points);
    const double l = window.lattice_const();
    const double k0 = window.k_center();

    std::vector<double> weight(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        weight[i] = rule.weights[i] *
                    std::exp(log_inverse_occupation(ctx, k0 + rule.nodes[i]) - 2.0 * gamma.value);
    }

    // one integral per lag d = s - s'
    const int count = sites.size();
    std::vector<std::complex<double>> lags(static_cast<std::size_t>(count));
    for (int d = 0; d < count; ++d) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < rule.size(); ++i) {
            acc += weight[i] * std::polar(1.0, -static_cast<double>(d) * rule.nodes[i] * l);
        }
        lags[static_cast<std::size_t>(d)] = acc * (l / (2.0 * kPi));
    }

    Eigen::MatrixXcd entries(count, count);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j) {
            const int d = i - j;
            entries(i, j) = d >= 0 ? lags[static_cast<std::size_t>(d)]
                                   : std::conj(lags[static_cast<std::size_t>(-d)]);
        }
    }
    return {sites, std::move(entries), gamma};
}

SpectralWindow refine(const SpectralWindow& window) {
    if (window.n_modes() > std::numeric_limits<int>::max() / 3) {
        throw std::overflow_error("refine: mode count would overflow");
    }
    return SpectralWindow(window.k_center(), window.lattice_const(), 3 * window.n_modes());
}

} // namespace pulsemix
