#pragma once

#include <span>

#include "lvct/gem.hpp"
#include "lvct/table.hpp"

namespace lvct {

/// log(theta) = alpha1 - alpha2; the shared delta cancels.
inline double log_odds_ratio(double alpha1, double alpha2)
{
    return alpha1 - alpha2;
}

struct TestResult {
    double t_stat = 0.0;
    bool reject = false;
};

/// T = log_or / se; two-sided rejection when |T| > z_{level/2}.
/// Throws std::invalid_argument when se_log_or <= 0.
TestResult test_independence(double log_or, double se_log_or, double level);

struct PooledResult {
    double alpha1_hat = 0.0;
    double alpha2_hat = 0.0;
    double sigma2_hat = 0.0;
    double pi1_hat = 0.0;
    double pi2_hat = 0.0;
    double se_alpha1 = 0.0;
    double se_alpha2 = 0.0;
    double log_or = 0.0;
    double se_log_or = 0.0;
    double t_stat = 0.0;
    bool reject = false;
    std::size_t k = 0;
};

/// Sample-size weighted pooling over k tables.
///
/// alpha_j and pi_j are averaged with weights n_ji, sigma2 with n1i + n2i.
/// Var(alpha_j) = sum n_ji^2 Var(alpha_ji) / (sum n_ji)^2, and the pooled
/// log odds ratio is alpha1 - alpha2 with the two variances added. Weights
/// enter as normalized fractions, so k = 1 reproduces the single fit exactly.
PooledResult pool_fits(std::span<const FitResult> fits, const TableSet& tables, double level = 0.05);

}  // namespace lvct
