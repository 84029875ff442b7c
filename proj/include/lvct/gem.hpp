#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lvct/latent.hpp"
#include "lvct/sampler.hpp"
#include "lvct/table.hpp"

namespace lvct {

enum class Estimator { mh, quadrature };

const char* to_string(Estimator e);
Estimator parse_estimator(const std::string& s);

struct FitConfig {
    double epsilon = 0.1;  // degenerate-cell correction
    int max_iters = 100;
    double tol = 1e-4;
    double sigma2_floor = 1e-3;
    Estimator estimator = Estimator::mh;
    SamplerConfig sampler;
    QuadratureSpec quadrature;
    double level = 0.05;
};

void validate(const FitConfig& c);

struct SamplerDiagnostics {
    double acceptance_rate = 0.0;
    double step = 0.0;
    std::size_t samples = 0;  // retained draws in the final E-step
};

struct FitResult {
    std::string label;
    double alpha1_hat = 0.0;
    double alpha2_hat = 0.0;
    double sigma2_hat = 1.0;
    double pi1_hat = 0.5;
    double pi2_hat = 0.5;
    double se_alpha1 = 0.0;
    double se_alpha2 = 0.0;
    double log_or = 0.0;
    double se_log_or = 0.0;
    double t_stat = 0.0;
    bool reject = false;
    int iters = 0;
    bool converged = false;
    double delta_bar = 0.0;
    std::optional<SamplerDiagnostics> diagnostics;  // mh estimator only
};

/// Closed-form maximization given the posterior mean of delta:
/// alpha_j = log(y~_j / (n_j - y~_j)) - delta_bar with corrected counts y~,
/// sigma2 = max(delta_bar^2, sigma2_floor).
ModelParams m_step(const ContingencyTable& t, double delta_bar, double epsilon,
                   double sigma2_floor = 1e-3);

/// Posterior expectations needed by one fit, from a single draw set or grid.
struct PosteriorSummary {
    double delta_bar = 0.0;
    double pi1 = 0.0;
    double pi2 = 0.0;
    double var1 = 0.0;  // E[n1 p1(delta)(1 - p1(delta))]
    double var2 = 0.0;
    std::optional<SamplerDiagnostics> diagnostics;
};

/// Uses c.estimator; the mh path draws with a generator seeded by `seed`.
PosteriorSummary summarize_posterior(const ContingencyTable& t, const ModelParams& p,
                                     const FitConfig& c, std::uint64_t seed);

/// Generalized EM. Each E-step replaces delta by its posterior mean under the
/// current parameters and the M-step applies m_step, until the largest
/// parameter change falls below tol. The mh estimator reuses the same random
/// stream (c.sampler.seed) in every iteration; when an iteration's change is
/// still above tol but within 3 Monte-Carlo standard errors of delta_bar, the
/// retained draw count doubles (up to 64 times the configured M). pi-hats and
/// the information based variances are evaluated at the final parameters.
FitResult fit_table(const ContingencyTable& t, const FitConfig& c);

/// Fits every table with sampler seed stream_seed(c.sampler.seed, index).
/// Results come back in input order whatever the worker count
/// (0 = hardware concurrency).
std::vector<FitResult> fit_table_set(const TableSet& s, const FitConfig& c, unsigned workers = 0);

/// (pi1, pi2) = posterior expectations of p1(delta), p2(delta).
std::pair<double, double> estimate_pi(const ContingencyTable& t, const ModelParams& p,
                                      const FitConfig& c);

/// (Var alpha1, Var alpha2) = E[n_j p_j(delta)(1 - p_j(delta))] under f(delta | y1, y2).
/// This is the expected information itself, not its inverse.
std::pair<double, double> estimate_alpha_variance(const ContingencyTable& t, const ModelParams& p,
                                                  const FitConfig& c);

}  // namespace lvct
