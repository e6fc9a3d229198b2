#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlcm/core.hpp"
#include "rlcm/identifiability.hpp"
#include "rlcm/models.hpp"

namespace rlcm {

/// N response patterns over J items.
class ResponseData {
public:
    ResponseData(int J, std::vector<Code> patterns);

    int items() const { return J_; }
    std::size_t subjects() const { return patterns_.size(); }
    std::span<const Code> patterns() const { return patterns_; }

    /// Distinct patterns in increasing code order with their multiplicities.
    struct Aggregated {
        std::vector<Code> patterns;
        std::vector<double> counts;
    };
    Aggregated aggregate() const;

private:
    int J_;
    std::vector<Code> patterns_;
};

/// alpha ~ p, then independent Bernoulli(theta_{j,alpha}). Deterministic in seed.
ResponseData simulate(const ThetaMatrix& theta, const ProportionVector& p, std::size_t N, std::uint64_t seed);

/// gamma_r = fraction of subjects with R_i >= r.
std::vector<double> empirical_gamma(const ResponseData& data);

inline constexpr double kThetaClamp = 1e-12;
inline constexpr double kProportionFloor = 1e-10;

/// sum_i log sum_alpha pi_{R_i,alpha} p_alpha, with theta clamped inside the logs.
double loglik(const ResponseData& data, const ThetaMatrix& theta, const ProportionVector& p);

struct EmConfig {
    int max_iters = 2000;
    double tol = 1e-7;
    int restarts = 10;
    std::uint64_t seed = 1234567;
    // Used for the first restart when set; remaining restarts are seeded draws.
    std::optional<std::vector<ItemParams>> initial_params;
    std::optional<ProportionVector> initial_p;
};

struct FitResult {
    ThetaMatrix theta_hat;
    ProportionVector p_hat;
    std::vector<ItemParams> item_params_hat;
    std::vector<double> loglik_trace;
    bool converged = false;
    int iterations = 0;
    int restarts_used = 0;
    // Final loglik of every restart, in order.
    std::vector<double> restart_logliks;

    double final_loglik() const { return loglik_trace.back(); }
};

/// Restricted EM over the given per-item families. See the README for the
/// M-step of each family.
FitResult em_fit(const ResponseData& data, const QMatrix& Q, const std::vector<Family>& families,
                 const EmConfig& config = {});

/// Posterior-weighted sufficient statistics for one item: for each class,
/// total weight n[a] and weight of positive responses y[a].
struct ItemStats {
    std::vector<double> n;
    std::vector<double> y;
};

/// One weighted M-step for a single item, exposed for testing. `start` provides
/// the family and the starting point for iterative families.
ItemParams m_step_item(Code q_row, int K, const ItemParams& start, const ItemStats& stats);

struct ExperimentRow {
    std::size_t N = 0;
    std::vector<double> errors;                    // per replication
    double median_error = 0.0;
    std::vector<double> median_item_errors;        // per item, max-abs theta row error
    double median_p_error = 0.0;
    std::vector<double> best_logliks;              // per replication
};

struct ExperimentTable {
    Verdict verdict = Verdict::NotCoveredBySufficientConditions;
    std::vector<std::string> warnings;
    std::vector<ExperimentRow> rows;
};

/// For each N: simulate `replications` datasets, fit, and record the max-abs
/// error of (theta, p). Replications run in parallel with fixed per-replication seeds.
ExperimentTable consistency_experiment(const QMatrix& Q, const std::vector<ItemParams>& true_params,
                                       const ProportionVector& true_p, const std::vector<std::size_t>& n_grid,
                                       int replications, std::uint64_t seed, const EmConfig& config = {});

}  // namespace rlcm
