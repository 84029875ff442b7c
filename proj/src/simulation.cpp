#include "lvct/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "lvct/latent.hpp"
#include "lvct/parallel.hpp"

namespace lvct {

void validate(const GeneratorConfig& c)
{
    if (!(c.sigma > 0.0))
        throw std::invalid_argument("sigma must be positive");
    if (c.n1.empty() || c.n1.size() != c.n2.size())
        throw std::invalid_argument("n1 and n2 must be non-empty and of equal length");
    for (std::size_t i = 0; i < c.n1.size(); ++i)
        if (c.n1[i] < 1 || c.n2[i] < 1)
            throw std::invalid_argument("table sizes must be >= 1");
    if (c.replications < 1)
        throw std::invalid_argument("replications must be >= 1");
    if (!std::isfinite(c.alpha1) || !std::isfinite(c.alpha2))
        throw std::invalid_argument("alpha must be finite");
}

Count binomial_inverse(Count n, double p, double u)
{
    if (p <= 0.0)
        return 0;
    if (p >= 1.0)
        return n;

    // Masses relative to the mode, extended until terms are negligible; the
    // CDF of that window is inverted from its lower end.
    const double q = 1.0 - p;
    const auto mode = std::min<Count>(n, static_cast<Count>(std::floor((n + 1) * p)));
    constexpr double negligible = 1e-20;

    std::vector<double> below;  // pmf(mode - 1), pmf(mode - 2), ...
    double v = 1.0;
    for (Count k = mode; k > 0; --k) {
        v *= (static_cast<double>(k) * q) / (static_cast<double>(n - k + 1) * p);
        if (v < negligible)
            break;
        below.push_back(v);
    }
    std::vector<double> above;  // pmf(mode + 1), ...
    v = 1.0;
    for (Count k = mode; k < n; ++k) {
        v *= (static_cast<double>(n - k) * p) / (static_cast<double>(k + 1) * q);
        if (v < negligible)
            break;
        above.push_back(v);
    }

    double total = 1.0;
    for (double b : below)
        total += b;
    for (double a : above)
        total += a;

    const double target = u * total;
    double cdf = 0.0;
    const Count lowest = mode - static_cast<Count>(below.size());
    for (auto it = below.rbegin(); it != below.rend(); ++it) {
        cdf += *it;
        if (cdf >= target)
            return lowest + static_cast<Count>(it - below.rbegin());
    }
    cdf += 1.0;
    if (cdf >= target)
        return mode;
    for (std::size_t j = 0; j < above.size(); ++j) {
        cdf += above[j];
        if (cdf >= target)
            return mode + static_cast<Count>(j) + 1;
    }
    return mode + static_cast<Count>(above.size());
}

ContingencyTable generate_table(double alpha1, double alpha2, double sigma, Count n1, Count n2,
                                Rng& rng)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be positive");
    const double delta = sigma * rng.normal();
    ContingencyTable t;
    t.n1 = n1;
    t.n2 = n2;
    t.y1 = binomial_inverse(n1, success_prob(alpha1, delta), rng.uniform());
    t.y2 = binomial_inverse(n2, success_prob(alpha2, delta), rng.uniform());
    return t;
}

TableSet generate_replication(const GeneratorConfig& c, std::size_t replication)
{
    Rng rng(stream_seed(c.seed, replication));
    TableSet s;
    s.name = "replication-" + std::to_string(replication);
    s.tables.reserve(c.n1.size());
    for (std::size_t i = 0; i < c.n1.size(); ++i) {
        auto t = generate_table(c.alpha1, c.alpha2, c.sigma, c.n1[i], c.n2[i], rng);
        t.label = std::to_string(i + 1);
        s.tables.push_back(std::move(t));
    }
    return s;
}

double nearest_rank_quantile(const std::vector<double>& sorted, double p)
{
    if (sorted.empty())
        throw std::invalid_argument("quantile of empty sample");
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(p * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

std::vector<HistogramBin> correlation_histogram(const std::vector<double>& values, double width)
{
    const auto bins = static_cast<std::size_t>(std::llround(2.0 / width));
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b)
        out[b].lower = -1.0 + width * static_cast<double>(b);
    for (double v : values) {
        const double pos = std::floor((v + 1.0) / width);
        const auto b = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
        ++out[b].count;
    }
    return out;
}

CorrelationStudyResult correlation_study(const GeneratorConfig& c, unsigned workers)
{
    validate(c);
    if (c.n1.size() < 2)
        throw std::invalid_argument("correlation study needs k >= 2 tables");

    std::vector<std::optional<double>> per_rep(c.replications);
    parallel_for(c.replications, workers, [&](std::size_t r) {
        const auto s = generate_replication(c, r);
        std::vector<double> r1, r2;
        for (const auto& t : s.tables) {
            auto [a, b] = empirical_rates(t);
            r1.push_back(a);
            r2.push_back(b);
        }
        per_rep[r] = pearson_correlation(r1, r2);
    });

    CorrelationStudyResult out;
    for (std::size_t r = 0; r < per_rep.size(); ++r) {
        if (per_rep[r]) {
            out.replication.push_back(r);
            out.correlations.push_back(*per_rep[r]);
        } else {
            ++out.dropped;
        }
    }
    if (out.correlations.empty())
        throw std::runtime_error("every replication had constant rates; correlation undefined");

    auto sorted = out.correlations;
    std::sort(sorted.begin(), sorted.end());
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95})
        out.quantiles.emplace_back(p, nearest_rank_quantile(sorted, p));
    out.histogram = correlation_histogram(out.correlations);
    return out;
}

PerformanceSummary summarize_performance(const std::vector<Replication>& reps)
{
    PerformanceSummary s;
    if (reps.empty())
        return s;
    std::size_t table_fits = 0, table_rejects = 0;
    std::size_t below1 = 0, below2 = 0, below_or = 0, pooled_rejects = 0;
    for (const auto& rep : reps) {
        s.mean_pi1 += rep.pooled.pi1_hat;
        s.mean_pi2 += rep.pooled.pi2_hat;
        s.mean_log_or += rep.pooled.log_or;
        pooled_rejects += rep.pooled.reject ? 1 : 0;
        constexpr double inf = std::numeric_limits<double>::infinity();
        double min1 = inf, min2 = inf, min_or = inf;
        for (const auto& f : rep.fits) {
            ++table_fits;
            table_rejects += f.reject ? 1 : 0;
            s.non_converged_fits += f.converged ? 0 : 1;
            min1 = std::min(min1, f.se_alpha1);
            min2 = std::min(min2, f.se_alpha2);
            min_or = std::min(min_or, f.se_log_or);
        }
        below1 += rep.pooled.se_alpha1 < min1 ? 1 : 0;
        below2 += rep.pooled.se_alpha2 < min2 ? 1 : 0;
        below_or += rep.pooled.se_log_or < min_or ? 1 : 0;
    }
    const auto n = static_cast<double>(reps.size());
    s.mean_pi1 /= n;
    s.mean_pi2 /= n;
    s.mean_log_or /= n;
    s.pooled_rejection_rate = static_cast<double>(pooled_rejects) / n;
    s.table_rejection_rate = table_fits ? static_cast<double>(table_rejects) / table_fits : 0.0;
    s.pooled_se_below_min_alpha1 = static_cast<double>(below1) / n;
    s.pooled_se_below_min_alpha2 = static_cast<double>(below2) / n;
    s.pooled_se_below_min_log_or = static_cast<double>(below_or) / n;
    return s;
}

PerformanceStudyResult performance_study(const GeneratorConfig& c, const FitConfig& f,
                                         unsigned workers)
{
    validate(c);
    validate(f);

    PerformanceStudyResult out;
    out.replications.resize(c.replications);
    parallel_for(c.replications, workers, [&](std::size_t r) {
        const auto tables = generate_replication(c, r);
        FitConfig local = f;
        local.sampler.seed = mix_seed(stream_seed(c.seed, r));
        auto& rep = out.replications[r];
        rep.fits = fit_table_set(tables, local, 1);
        rep.pooled = pool_fits(rep.fits, tables, f.level);
    });
    out.summary = summarize_performance(out.replications);
    return out;
}

}  // namespace lvct
