// verify.cpp — Invariant suite and Monte-Carlo moment verification.

#include "pulsemix/verify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "pulsemix/fields.hpp"
#include "pulsemix/sampler.hpp"

namespace pulsemix {

bool InvariantReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const CheckResult* InvariantReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

namespace {

CheckResult below(std::string name, double measured, double bound, std::string note = {}) {
    const bool pass = std::isfinite(measured) && measured < bound;
    return {std::move(name), measured, bound, pass, std::move(note)};
}

CheckResult skipped(std::string name, std::string why) {
    return {std::move(name), 0.0, 0.0, true, "skipped: " + std::move(why)};
}

double max_unitarity_defect(const Eigen::MatrixXcd& C) {
    const auto n = C.rows();
    return (C.adjoint() * C - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

// Gram matrix of the site functions by the periodic trapezoid rule
double max_orthonormality_defect(const SpectralWindow& window, const SiteIndexSet& sites) {
    const int points = 64 * window.n_modes();
    const double L = window.quant_length();
    const double h = L / points;
    Eigen::MatrixXd values(points, sites.size());
    for (int i = 0; i < points; ++i) {
        const double z = -0.5 * L + i * h;
        for (int j = 0; j < sites.size(); ++j) values(i, j) = w_site(window, sites[j], z);
    }
    const Eigen::MatrixXd gram = h * values.transpose() * values;
    return (gram - Eigen::MatrixXd::Identity(sites.size(), sites.size())).cwiseAbs().maxCoeff();
}

double max_cardinal_defect(const SpectralWindow& window, const SiteIndexSet& sites) {
    const double root_l = std::sqrt(window.lattice_const());
    double worst = 0.0;
    for (int s : sites.to_vector()) {
        for (int t : sites.to_vector()) {
            const double value =
                wannier(window, s, t * window.lattice_const(), Prefactor::normalized) * root_l;
            worst = std::max(worst, std::abs(value - (s == t ? 1.0 : 0.0)));
        }
    }
    return worst;
}

} // namespace

std::vector<CheckResult> check_lambda(const LambdaMatrix& lambda) {
    const Eigen::MatrixXcd& A = lambda.entries;
    const double scale = std::max(A.cwiseAbs().maxCoeff(), 1e-300);
    std::vector<CheckResult> out;

    out.push_back(below("lambda_hermitian", (A - A.adjoint()).cwiseAbs().maxCoeff() / scale,
                        1e-12, "max |L - L^H| / max |L|"));

    double toeplitz = 0.0;
    for (Eigen::Index i = 1; i < A.rows(); ++i) {
        for (Eigen::Index j = 1; j < A.cols(); ++j) {
            toeplitz = std::max(toeplitz, std::abs(A(i, j) - A(i - 1, j - 1)));
        }
    }
    out.push_back(below("lambda_toeplitz", toeplitz / scale, 1e-12,
                        "max |L(i,j) - L(i-1,j-1)| / max |L|"));

    const Eigen::MatrixXcd sym = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    const double min_eig =
        solver.info() == Eigen::Success ? solver.eigenvalues().minCoeff() : std::nan("");
    out.push_back({"lambda_positive_definite", min_eig, 0.0,
                   std::isfinite(min_eig) && min_eig > 0.0, "smallest eigenvalue > 0"});
    return out;
}

InvariantReport verify_invariants(const ThermalContext& ctx, const SpectralWindow& window,
                                  const SiteIndexSet& sites, const InvariantOptions& options) {
    InvariantReport report;
    auto& checks = report.checks;
    const bool full = sites == SiteIndexSet::full(window);

    checks.push_back(below("transform_unitarity", max_unitarity_defect(transform_matrix(window)),
                           1e-12, "max |C^H C - I|"));
    checks.push_back(below("site_orthonormality", max_orthonormality_defect(window, sites), 1e-8,
                           "trapezoid, 64N points over one period"));

    const LambdaMatrix lambda = lambda_discrete(ctx, window, sites);
    for (auto& c : check_lambda(lambda)) checks.push_back(std::move(c));

    if (full) {
        const std::complex<double> det = lambda.entries.partialPivLu().determinant();
        checks.push_back(below("lambda_determinant", std::abs(det - 1.0), 1e-8, "|det L - 1|"));
    } else {
        checks.push_back(skipped("lambda_determinant", "site subset"));
    }

    std::optional<EigenSystem> eig;
    try {
        eig = diagonalize(lambda);
    } catch (const std::exception& e) {
        checks.push_back({"diagonalize", 0.0, 0.0, false, e.what()});
    }
    const bool have_eig = eig.has_value();

    if (full && have_eig) {
        const int n = window.half_width();
        std::vector<double> oracle;
        for (int m = -n; m <= n; ++m) {
            oracle.push_back(std::exp(log_expm1(ctx.reduced_energy(window.wavenumber(m))) -
                                      2.0 * lambda.gamma.value));
        }
        std::sort(oracle.begin(), oracle.end());
        double worst = 0.0;
        for (std::size_t r = 0; r < oracle.size(); ++r) {
            worst = std::max(worst,
                             std::abs(eig->theta(static_cast<Eigen::Index>(r)) - oracle[r]) / oracle[r]);
        }
        checks.push_back(below("eigenvalue_oracle", worst, 1e-9,
                               "max relative |theta_r - e^{-2G}(e^{bhw_m}-1)|"));
    } else if (!full) {
        checks.push_back(skipped("eigenvalue_oracle", "site subset"));
    }

    if (have_eig) {
        try {
            const PulseSet typical = typical_pulse_set(*eig, lambda.gamma, options.seed);
            const double target = 0.5 * sites.size();
            checks.push_back(below("typical_exponent",
                                   std::abs(typical.likelihood_exponent - target) / target, 1e-10,
                                   "relative |exponent - |S|/2|"));
        } catch (const std::exception& e) {
            checks.push_back({"typical_exponent", 0.0, 0.0, false, e.what()});
        }
    }

    checks.push_back(below("cardinal_interpolation", max_cardinal_defect(window, sites), 1e-12,
                           "max |sqrt(l) W_s(s'l) - delta|, normalized prefactor"));

    const double cont = gamma_continuum(ctx, window, options.quad_points).value;
    const double err0 = std::abs(gamma_discrete(ctx, window).value - cont);
    const double err1 = std::abs(gamma_discrete(ctx, refine(window)).value - cont);
    const double floor = 1e-12 * std::max(1.0, std::abs(cont));
    CheckResult conv{"refinement_convergence", err1, std::max(0.5 * err0, floor),
                     err1 <= std::max(0.5 * err0, floor),
                     "|G(3N) - G_cont| <= |G(N) - G_cont| / 2"};
    checks.push_back(std::move(conv));
    return report;
}

MomentReport verify_moments(const ThermalContext& ctx, const SpectralWindow& window,
                            std::int64_t samples, std::uint64_t rng_seed,
                            const MomentOptions& options) {
    if (samples < 1000) throw std::invalid_argument("verify_moments: need at least 1000 samples");
    if (options.chunks < 1) throw std::invalid_argument("verify_moments: chunks must be >= 1");

    const SiteIndexSet sites = SiteIndexSet::full(window);
    const LambdaMatrix lambda = lambda_discrete(ctx, window, sites);
    const EigenSystem eig = diagonalize(lambda);
    const EtaSampler sampler(eig);
    const Eigen::MatrixXcd C = transform_matrix(window);
    // α = C†γ̄ e^{-Γ} = e^{-Γ} C† U* η
    const Eigen::MatrixXcd eta_to_alpha =
        std::exp(-lambda.gamma.value) * C.adjoint() * eig.U.conjugate();

    const int N = window.n_modes();
    const int chunks = options.chunks;
    std::vector<Eigen::VectorXcd> sum1(static_cast<std::size_t>(chunks), Eigen::VectorXcd::Zero(N));
    std::vector<Eigen::MatrixXcd> sum2(static_cast<std::size_t>(chunks),
                                       Eigen::MatrixXcd::Zero(N, N));

    const Rng root(rng_seed);
    auto run_chunk = [&](int c) {
        const std::int64_t begin = samples * c / chunks;
        const std::int64_t end = samples * (c + 1) / chunks;
        Rng rng = root.split(static_cast<std::uint64_t>(c));
        EtaVector eta;
        Eigen::VectorXcd alpha(N);
        auto& s1 = sum1[static_cast<std::size_t>(c)];
        auto& s2 = sum2[static_cast<std::size_t>(c)];
        for (std::int64_t i = begin; i < end; ++i) {
            sampler.draw_thermal(rng, eta);
            alpha.noalias() = eta_to_alpha * eta.eta;
            s1 += alpha;
            s2.noalias() += alpha * alpha.adjoint();
        }
    };

    int threads = options.threads > 0 ? options.threads
                                      : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, chunks);
    if (threads == 1) {
        for (int c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int c = t; c < chunks; c += threads) run_chunk(c);
            });
        }
    }

    Eigen::VectorXcd total1 = Eigen::VectorXcd::Zero(N);
    Eigen::MatrixXcd total2 = Eigen::MatrixXcd::Zero(N, N);
    for (int c = 0; c < chunks; ++c) {
        total1 += sum1[static_cast<std::size_t>(c)];
        total2 += sum2[static_cast<std::size_t>(c)];
    }

    MomentReport report;
    report.sample_count = samples;
    const double M = static_cast<double>(samples);
    report.first_moments = total1 / M;
    report.estimated = total2 / M;
    report.exact.resize(N);
    const int n = window.half_width();
    for (int m = -n; m <= n; ++m) report.exact(m + n) = mean_occupation(ctx, window.wavenumber(m));

    const double root_m = std::sqrt(M);
    for (int a = 0; a < N; ++a) {
        const double first_bound = 5.0 * std::sqrt(report.exact(a) / M);
        report.max_first_moment_ratio =
            std::max(report.max_first_moment_ratio, std::abs(report.first_moments(a)) / first_bound);
        for (int b = 0; b < N; ++b) {
            const double truth = a == b ? report.exact(a) : 0.0;
            const double err = std::abs(report.estimated(a, b) - truth);
            const double bound =
                5.0 * std::sqrt((report.exact(a) + 1.0) * (report.exact(b) + 1.0)) / root_m;
            report.max_abs_error = std::max(report.max_abs_error, err);
            report.max_bound_ratio = std::max(report.max_bound_ratio, err / bound);
        }
    }
    report.pass = report.max_bound_ratio < 1.0 && report.max_first_moment_ratio < 1.0;
    return report;
}

nlohmann::json to_json(const CheckResult& check) {
    nlohmann::json j{{"name", check.name},
                     {"measured", check.measured},
                     {"bound", check.bound},
                     {"pass", check.pass}};
    if (!check.note.empty()) j["note"] = check.note;
    return j;
}

nlohmann::json to_json(const InvariantReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) checks.push_back(to_json(c));
    return {{"checks", std::move(checks)}, {"pass", report.all_passed()}};
}

nlohmann::json to_json(const MomentReport& report) {
    nlohmann::json estimated = nlohmann::json::array();
    for (Eigen::Index a = 0; a < report.estimated.rows(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index b = 0; b < report.estimated.cols(); ++b) {
            row.push_back({report.estimated(a, b).real(), report.estimated(a, b).imag()});
        }
        estimated.push_back(std::move(row));
    }
    nlohmann::json first = nlohmann::json::array();
    for (Eigen::Index a = 0; a < report.first_moments.size(); ++a) {
        first.push_back({report.first_moments(a).real(), report.first_moments(a).imag()});
    }
    return {{"estimated", std::move(estimated)},
            {"exact", std::vector<double>(report.exact.data(),
                                          report.exact.data() + report.exact.size())},
            {"first_moments", std::move(first)},
            {"sample_count", report.sample_count},
            {"max_abs_error", report.max_abs_error},
            {"max_bound_ratio", report.max_bound_ratio},
            {"max_first_moment_ratio", report.max_first_moment_ratio},
            {"pass", report.pass}};
}

} // namespace pulsemix
