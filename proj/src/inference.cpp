#include "lvct/inference.hpp"

#include <cmath>
#include <stdexcept>

#include "lvct/normal.hpp"

namespace lvct {

TestResult test_independence(double log_or, double se_log_or, double level)
{
    if (!(se_log_or > 0.0))
        throw std::invalid_argument("standard error of log odds ratio must be positive");
    TestResult r;
    r.t_stat = log_or / se_log_or;
    r.reject = std::abs(r.t_stat) > critical_value(level);
    return r;
}

PooledResult pool_fits(std::span<const FitResult> fits, const TableSet& tables, double level)
{
    if (fits.empty())
        throw std::invalid_argument("pool_fits needs at least one fit");
    if (fits.size() != tables.tables.size())
        throw std::invalid_argument("pool_fits: fits and tables differ in length");

    double w1 = 0.0, w2 = 0.0, w = 0.0;
    for (const auto& t : tables.tables) {
        w1 += static_cast<double>(t.n1);
        w2 += static_cast<double>(t.n2);
        w += static_cast<double>(t.n1 + t.n2);
    }

    PooledResult out;
    out.k = fits.size();
    double var1 = 0.0, var2 = 0.0;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const auto& fi = fits[i];
        const auto& t = tables.tables[i];
        const double f1 = static_cast<double>(t.n1) / w1;
        const double f2 = static_cast<double>(t.n2) / w2;
        const double f = static_cast<double>(t.n1 + t.n2) / w;
        out.alpha1_hat += f1 * fi.alpha1_hat;
        out.alpha2_hat += f2 * fi.alpha2_hat;
        out.pi1_hat += f1 * fi.pi1_hat;
        out.pi2_hat += f2 * fi.pi2_hat;
        out.sigma2_hat += f * fi.sigma2_hat;
        var1 += f1 * f1 * (fi.se_alpha1 * fi.se_alpha1);
        var2 += f2 * f2 * (fi.se_alpha2 * fi.se_alpha2);
    }
    out.se_alpha1 = std::sqrt(var1);
    out.se_alpha2 = std::sqrt(var2);
    out.log_or = log_odds_ratio(out.alpha1_hat, out.alpha2_hat);
    out.se_log_or = std::sqrt(var1 + var2);
    const auto test = test_independence(out.log_or, out.se_log_or, level);
    out.t_stat = test.t_stat;
    out.reject = test.reject;
    return out;
}

}  // namespace lvct
