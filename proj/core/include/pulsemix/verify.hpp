// verify.hpp — Runnable checks: Monte-Carlo equivalence of the pulse-set
// mixture with exact thermal second moments, and the invariant suite.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "pulsemix/modes.hpp"
#include "pulsemix/thermal.hpp"

namespace pulsemix {

struct CheckResult {
    std::string name;
    double measured{0.0};
    double bound{0.0};
    bool pass{false};
    std::string note;
};

struct InvariantReport {
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

struct InvariantOptions {
    std::uint64_t seed{0};
    int quad_points{kDefaultQuadPoints};
};

// hermitian, toeplitz and positive-definite checks on an arbitrary Λ
std::vector<CheckResult> check_lambda(const LambdaMatrix& lambda);

// Failures are report entries, never exceptions; construction errors on the
// inputs themselves still propagate.
InvariantReport verify_invariants(const ThermalContext& ctx, const SpectralWindow& window,
                                  const SiteIndexSet& sites, const InvariantOptions& options = {});

struct MomentReport {
    Eigen::MatrixXcd estimated;       // E[α_m α*_m']
    Eigen::VectorXd exact;            // ⟨n_m⟩
    Eigen::VectorXcd first_moments;   // E[α_m]
    std::int64_t sample_count{0};
    double max_abs_error{0.0};        // max |estimated - diag(exact)|
    double max_bound_ratio{0.0};      // max |error| / (5σ bound), second moments
    double max_first_moment_ratio{0.0};
    bool pass{false};
};

struct MomentOptions {
    int chunks{16};   // fixes the random sub-streams; results do not depend on threads
    int threads{0};   // 0: hardware concurrency
};

// Draws `samples` random pulse sets on the full finite window, maps
// γ = γ̄e^{-Γ} → α = C†γ and compares moments with δ_mm'⟨n_m⟩.
// Second-moment bound per entry: 5·√((⟨n_m⟩+1)(⟨n_m'⟩+1)/M);
// first-moment bound: 5·√(⟨n_m⟩/M).
MomentReport verify_moments(const ThermalContext& ctx, const SpectralWindow& window,
                            std::int64_t samples, std::uint64_t rng_seed,
                            const MomentOptions& options = {});

nlohmann::json to_json(const CheckResult& check);
nlohmann::json to_json(const InvariantReport& report);
nlohmann::json to_json(const MomentReport& report);

} // namespace pulsemix
