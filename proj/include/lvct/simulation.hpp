#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lvct/gem.hpp"
#include "lvct/inference.hpp"
#include "lvct/rng.hpp"
#include "lvct/table.hpp"

namespace lvct {

struct GeneratorConfig {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double sigma = 1.0;
    std::vector<Count> n1{20, 10, 30, 5, 15};
    std::vector<Count> n2{6, 20, 15, 25, 10};
    std::size_t replications = 10000;
    std::uint64_t seed = 0;
};

void validate(const GeneratorConfig& c);

/// Binomial(n, p) by inversion of a single uniform u in (0, 1).
Count binomial_inverse(Count n, double p, double u);

/// delta ~ N(0, sigma^2) shared by both arms, then y_j ~ Binomial(n_j, p_j(delta)).
/// Consumes exactly three uniforms from rng.
ContingencyTable generate_table(double alpha1, double alpha2, double sigma, Count n1, Count n2,
                                Rng& rng);

/// The k tables of one replication, drawn from stream_seed(c.seed, replication).
TableSet generate_replication(const GeneratorConfig& c, std::size_t replication);

struct HistogramBin {
    double lower = 0.0;
    std::size_t count = 0;
};

struct CorrelationStudyResult {
    std::vector<std::size_t> replication;  // index of each retained correlation
    std::vector<double> correlations;
    std::size_t dropped = 0;  // replications with constant rates in an arm
    std::vector<std::pair<double, double>> quantiles;  // (probability, value)
    std::vector<HistogramBin> histogram;  // 40 bins of width 0.05 over [-1, 1]
};

/// Nearest-rank empirical quantile: sorted[ceil(p * N) - 1].
double nearest_rank_quantile(const std::vector<double>& sorted, double p);

/// Fixed-width histogram over [-1, 1]; 1.0 falls in the last bin.
std::vector<HistogramBin> correlation_histogram(const std::vector<double>& values, double width = 0.05);

/// Throws std::runtime_error when every replication is degenerate.
CorrelationStudyResult correlation_study(const GeneratorConfig& c, unsigned workers = 0);

struct Replication {
    std::vector<FitResult> fits;
    PooledResult pooled;
};

struct PerformanceSummary {
    double mean_pi1 = 0.0;  // mean pooled pi-hat over replications
    double mean_pi2 = 0.0;
    double mean_log_or = 0.0;
    double pooled_rejection_rate = 0.0;
    double table_rejection_rate = 0.0;
    // Fraction of replications whose pooled se is below the smallest per-table se.
    double pooled_se_below_min_alpha1 = 0.0;
    double pooled_se_below_min_alpha2 = 0.0;
    double pooled_se_below_min_log_or = 0.0;
    std::size_t non_converged_fits = 0;
};

struct PerformanceStudyResult {
    std::vector<Replication> replications;
    PerformanceSummary summary;
};

PerformanceSummary summarize_performance(const std::vector<Replication>& reps);

/// Per replication: generate k tables, fit each, pool. Table fits in
/// replication r use sampler seed stream_seed(mix_seed(stream_seed(c.seed, r)), i).
PerformanceStudyResult performance_study(const GeneratorConfig& c, const FitConfig& f,
                                         unsigned workers = 0);

}  // namespace lvct
