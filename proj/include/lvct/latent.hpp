#pragma once

#include <vector>

#include "lvct/table.hpp"

namespace lvct {

/// Logit intercepts for the two arms and the variance of the shared
/// latent shock delta ~ N(0, sigma2).
struct ModelParams {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double sigma2 = 1.0;
};

/// Throws std::invalid_argument on non-finite alphas or sigma2 <= 0.
void validate(const ModelParams& p);

struct QuadratureSpec {
    double half_width_sd = 10.0;
    int nodes = 4001;
};

void validate(const QuadratureSpec& q);

/// log(1 + e^x) without overflow.
double log1p_exp(double x);

/// e^(alpha+delta) / (1 + e^(alpha+delta)), stable for large |alpha+delta|.
double success_prob(double alpha, double delta);

/// log N(delta; 0, sigma2).
double log_normal_density(double delta, double sigma2);

/// Full joint log likelihood: two binomial terms with their coefficients
/// plus the N(0, sigma2) density of delta.
double log_likelihood(const ContingencyTable& t, const ModelParams& p, double delta);

/// log f(delta | y1, y2) up to a delta-free constant.
double log_posterior_kernel(const ContingencyTable& t, const ModelParams& p, double delta);

/// Posterior mode: scan [-20, 20] at step 0.01, then golden-section refine.
double posterior_mode(const ContingencyTable& t, const ModelParams& p);

/// Normalized trapezoid rule for f(delta | y1, y2) on
/// [mode - w, mode + w], w = half_width_sd * sqrt(sigma2) + 5.
/// Weights are non-negative and sum to 1.
class PosteriorGrid {
public:
    PosteriorGrid(const ContingencyTable& t, const ModelParams& p, const QuadratureSpec& q = {});

    template <typename G>
    double expectation(G&& g) const
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            acc += weights_[i] * g(nodes_[i]);
        return acc;
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    double mode() const { return mode_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    double mode_ = 0.0;
};

/// Integral of g against f(delta | y1, y2) by quadrature.
template <typename G>
double posterior_expectation_quadrature(const ContingencyTable& t, const ModelParams& p, G&& g,
                                        const QuadratureSpec& q = {})
{
    return PosteriorGrid(t, p, q).expectation(g);
}

}  // namespace lvct
