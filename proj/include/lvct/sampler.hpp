#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lvct/latent.hpp"
#include "lvct/rng.hpp"

namespace lvct {

struct SamplerConfig {
    std::size_t samples = 10000;  // retained draws M
    std::size_t burn_in = 2000;
    std::size_t thin = 1;
    double initial_step = 1.0;
    double target_lo = 0.2;
    double target_hi = 0.5;
    std::uint64_t seed = 0;
};

void validate(const SamplerConfig& c);

struct SampleSet {
    std::vector<double> draws;
    double acceptance_rate = 0.0;  // post burn-in
    double final_step = 0.0;
};

/// Random-walk Metropolis-Hastings on log_posterior_kernel, starting at
/// delta = 0. During burn-in the step is scaled by 1.1 every 50 proposals
/// to steer the window acceptance into (target_lo, target_hi); it is frozen
/// afterwards. Every thin-th post burn-in state is kept.
SampleSet sample_posterior(const ContingencyTable& t, const ModelParams& p, const SamplerConfig& c);

/// Same, drawing from a caller-owned generator (c.seed is ignored).
SampleSet sample_posterior(const ContingencyTable& t, const ModelParams& p, const SamplerConfig& c,
                           Rng& rng);

double posterior_mean(const SampleSet& s);

/// (1/M) sum g(delta_i).
template <typename G>
double monte_carlo_expectation(const SampleSet& s, G&& g)
{
    double acc = 0.0;
    for (double d : s.draws)
        acc += g(d);
    return acc / static_cast<double>(s.draws.size());
}

/// Effective sample size from Geyer's initial positive sequence of
/// autocorrelations. Returns the series length when its variance is zero.
double effective_sample_size(std::span<const double> series);

/// sd(series) / sqrt(ESS).
double monte_carlo_standard_error(std::span<const double> series);

/// Monte-Carlo standard error of the sample mean of g over the draws.
template <typename G>
double monte_carlo_standard_error(const SampleSet& s, G&& g)
{
    std::vector<double> v;
    v.reserve(s.draws.size());
    for (double d : s.draws)
        v.push_back(g(d));
    return monte_carlo_standard_error(v);
}

}  // namespace lvct
