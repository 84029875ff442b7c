#include "lvct/latent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace lvct {

namespace {

double log_choose(Count n, Count k)
{
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

// y*x - n*log(1+e^x): the binomial log kernel of one arm at logit x.
double arm_term(Count y, Count n, double x)
{
    return static_cast<double>(y) * x - static_cast<double>(n) * log1p_exp(x);
}

}  // namespace

void validate(const ModelParams& p)
{
    if (!std::isfinite(p.alpha1) || !std::isfinite(p.alpha2))
        throw std::invalid_argument("alpha must be finite");
    if (!(p.sigma2 > 0.0) || !std::isfinite(p.sigma2))
        throw std::invalid_argument("sigma2 must be positive");
}

void validate(const QuadratureSpec& q)
{
    if (q.nodes < 3 || q.nodes % 2 == 0)
        throw std::invalid_argument("quadrature nodes must be odd and >= 3");
    if (!(q.half_width_sd > 0.0))
        throw std::invalid_argument("quadrature half width must be positive");
}

double log1p_exp(double x)
{
    if (x > 0.0)
        return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double success_prob(double alpha, double delta)
{
    const double x = alpha + delta;
    if (x >= 0.0)
        return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_normal_density(double delta, double sigma2)
{
    return -0.5 * delta * delta / sigma2 - 0.5 * std::log(2.0 * std::numbers::pi * sigma2);
}

double log_likelihood(const ContingencyTable& t, const ModelParams& p, double delta)
{
    return log_choose(t.n1, t.y1) + arm_term(t.y1, t.n1, p.alpha1 + delta) +
           log_choose(t.n2, t.y2) + arm_term(t.y2, t.n2, p.alpha2 + delta) +
           log_normal_density(delta, p.sigma2);
}

double log_posterior_kernel(const ContingencyTable& t, const ModelParams& p, double delta)
{
    // Arm terms are summed first; swapping arms gives a bitwise-identical value.
    return (arm_term(t.y1, t.n1, p.alpha1 + delta) + arm_term(t.y2, t.n2, p.alpha2 + delta)) -
           0.5 * delta * delta / p.sigma2;
}

double posterior_mode(const ContingencyTable& t, const ModelParams& p)
{
    constexpr int steps = 4000;
    constexpr double lo = -20.0, step = 0.01;
    double best = lo;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double d = lo + step * i;
        const double v = log_posterior_kernel(t, p, d);
        if (v > best_val) {
            best_val = v;
            best = d;
        }
    }

    // Golden-section maximization on the bracket around the best scan point.
    constexpr double inv_phi = 0.6180339887498949;
    double a = best - step, b = best + step;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = log_posterior_kernel(t, p, c);
    double fd = log_posterior_kernel(t, p, d);
    for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = log_posterior_kernel(t, p, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = log_posterior_kernel(t, p, d);
        }
    }
    return 0.5 * (a + b);
}

PosteriorGrid::PosteriorGrid(const ContingencyTable& t, const ModelParams& p,
                             const QuadratureSpec& q)
{
    validate(p);
    validate(q);
    mode_ = posterior_mode(t, p);
    const double w = q.half_width_sd * std::sqrt(p.sigma2) + 5.0;
    const auto n = static_cast<std::size_t>(q.nodes);
    const double h = 2.0 * w / static_cast<double>(n - 1);
    const double lo = mode_ - w;

    nodes_.resize(n);
    weights_.resize(n);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        nodes_[i] = lo + h * static_cast<double>(i);
        const double lk = log_posterior_kernel(t, p, nodes_[i]);
        if (!std::isfinite(lk))
            throw std::runtime_error("non-finite posterior kernel on quadrature grid");
        weights_[i] = lk;
        max_log = std::max(max_log, lk);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::exp(weights_[i] - max_log);
        if (i == 0 || i == n - 1)
            v *= 0.5;
        weights_[i] = v;
        total += v;
    }
    for (auto& v : weights_)
        v /= total;
}

}  // namespace lvct
