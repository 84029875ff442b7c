#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lvct/latent.hpp"
#include "lvct/table.hpp"

namespace oracle {

// Midpoint rule with a million cells on a fixed wide interval; shares no
// code with the library grid.
template <typename G>
double riemann_expectation(const lvct::ContingencyTable& t, const lvct::ModelParams& p, G&& g,
                           double lo = -40.0, double hi = 40.0, int cells = 1000000)
{
    const double h = (hi - lo) / cells;
    auto logk = [&](double d) {
        const double x1 = p.alpha1 + d, x2 = p.alpha2 + d;
        const double l1 = x1 > 0 ? x1 + std::log(1.0 + std::exp(-x1)) : std::log(1.0 + std::exp(x1));
        const double l2 = x2 > 0 ? x2 + std::log(1.0 + std::exp(-x2)) : std::log(1.0 + std::exp(x2));
        return double(t.y1) * x1 - double(t.n1) * l1 + double(t.y2) * x2 - double(t.n2) * l2 -
               d * d / (2.0 * p.sigma2);
    };
    double peak = -INFINITY;
    for (int i = 0; i < cells; i += 100)
        peak = std::max(peak, logk(lo + (i + 0.5) * h));
    double num = 0.0, den = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double d = lo + (i + 0.5) * h;
        const double w = std::exp(logk(d) - peak);
        num += w * g(d);
        den += w;
    }
    return num / den;
}

inline double logistic(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

inline double corrected_logit(lvct::Count y, lvct::Count n, double eps)
{
    double c = double(y);
    if (y == 0)
        c = eps;
    else if (y == n)
        c = double(n) - eps;
    return std::log(c / (double(n) - c));
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace oracle
