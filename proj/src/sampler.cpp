#include "lvct/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lvct {

namespace {

constexpr std::size_t kAdaptWindow = 50;
constexpr double kAdaptFactor = 1.1;

}  // namespace

void validate(const SamplerConfig& c)
{
    if (c.samples == 0)
        throw std::invalid_argument("samples must be >= 1");
    if (c.thin == 0)
        throw std::invalid_argument("thin must be >= 1");
    if (!(c.initial_step > 0.0))
        throw std::invalid_argument("initial step must be positive");
    if (!(c.target_lo > 0.0 && c.target_lo < c.target_hi && c.target_hi < 1.0))
        throw std::invalid_argument("target acceptance must satisfy 0 < lo < hi < 1");
}

SampleSet sample_posterior(const ContingencyTable& t, const ModelParams& p, const SamplerConfig& c)
{
    Rng rng(c.seed);
    return sample_posterior(t, p, c, rng);
}

SampleSet sample_posterior(const ContingencyTable& t, const ModelParams& p, const SamplerConfig& c,
                           Rng& rng)
{
    validate(p);
    validate(c);

    SampleSet out;
    out.draws.reserve(c.samples);

    double state = 0.0;
    double log_k = log_posterior_kernel(t, p, state);
    double step = c.initial_step;

    std::size_t window_accepted = 0;
    std::size_t kept_accepted = 0;
    const std::size_t total = c.burn_in + c.samples * c.thin;

    for (std::size_t i = 0; i < total; ++i) {
        const double proposal = state + step * rng.normal();
        const double log_kp = log_posterior_kernel(t, p, proposal);
        const double log_u = std::log(rng.uniform());
        const bool accept = log_u < log_kp - log_k;
        if (accept) {
            state = proposal;
            log_k = log_kp;
        }

        if (i < c.burn_in) {
            window_accepted += accept ? 1 : 0;
            if ((i + 1) % kAdaptWindow == 0) {
                const double rate = static_cast<double>(window_accepted) / kAdaptWindow;
                if (rate < c.target_lo)
                    step /= kAdaptFactor;
                else if (rate > c.target_hi)
                    step *= kAdaptFactor;
                window_accepted = 0;
            }
            continue;
        }

        kept_accepted += accept ? 1 : 0;
        if ((i - c.burn_in + 1) % c.thin == 0)
            out.draws.push_back(state);
    }

    out.acceptance_rate = static_cast<double>(kept_accepted) / static_cast<double>(c.samples * c.thin);
    out.final_step = step;
    return out;
}

double posterior_mean(const SampleSet& s)
{
    if (s.draws.empty())
        throw std::invalid_argument("posterior_mean of empty sample set");
    return monte_carlo_expectation(s, [](double d) { return d; });
}

double effective_sample_size(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n < 4)
        return static_cast<double>(n);
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(n);

    auto autocov = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i)
            acc += (x[i] - mean) * (x[i + lag] - mean);
        return acc / static_cast<double>(n);
    };

    const double c0 = autocov(0);
    if (!(c0 > 0.0))
        return static_cast<double>(n);

    // Sum of consecutive autocorrelation pairs while the pair sum stays positive.
    double tau = -1.0;
    for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
        const double pair = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
        if (pair <= 0.0)
            break;
        tau += 2.0 * pair;
    }
    tau = std::max(tau, 1.0 / static_cast<double>(n));
    return static_cast<double>(n) / tau;
}

double monte_carlo_standard_error(std::span<const double> x)
{
    const std::size_t n = x.size();
    if (n < 2)
        return 0.0;
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x)
        ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return sd / std::sqrt(effective_sample_size(x));
}

}  // namespace lvct
