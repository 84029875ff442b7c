#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "lvct/datasets.hpp"
#include "lvct/gem.hpp"
#include "lvct/inference.hpp"

using namespace lvct;

namespace {

FitResult fake_fit(double a1, double se1, double a2, double se2)
{
    FitResult f;
    f.alpha1_hat = a1;
    f.alpha2_hat = a2;
    f.se_alpha1 = se1;
    f.se_alpha2 = se2;
    f.pi1_hat = 1 / (1 + std::exp(-a1));
    f.pi2_hat = 1 / (1 + std::exp(-a2));
    f.sigma2_hat = 0.5;
    f.log_or = a1 - a2;
    f.se_log_or = std::hypot(se1, se2);
    return f;
}

}  // namespace

TEST_CASE("log odds ratio")
{
    CHECK(log_odds_ratio(0.5, 0.5) == 0.0);
    CHECK(log_odds_ratio(-3.4002, 2.9968) == doctest::Approx(-6.397));
    CHECK(log_odds_ratio(1.2, -0.4) == -log_odds_ratio(-0.4, 1.2));
}

TEST_CASE("independence test")
{
    auto r = test_independence(-6.397, 0.4382, 0.05);
    CHECK(r.t_stat == doctest::Approx(-14.598).epsilon(1e-4));
    CHECK(r.reject);
    r = test_independence(0.0, 3.0, 0.05);
    CHECK(r.t_stat == 0.0);
    CHECK_FALSE(r.reject);
    r = test_independence(0.5189, 1.4854, 0.05);
    CHECK(r.t_stat == doctest::Approx(0.3493).epsilon(1e-3));
    CHECK_FALSE(r.reject);
    CHECK(test_independence(1.96, 1.0, 0.05).reject);
    CHECK_FALSE(test_independence(1.959, 1.0, 0.05).reject);
    CHECK_THROWS_AS(test_independence(1.0, 0.0, 0.05), std::invalid_argument);
}

TEST_CASE("pooling with printed per-trial values")
{
    const std::vector<double> a1{-2.9205, -2.2995, -2.8231, -2.6189, -2.6944};
    const std::vector<double> se1{1.3752, 1.909, 2.3795, 2.5543, 2.5528};
    const std::vector<Count> n1{39, 44, 107, 103, 110};
    TableSet s{"l", {}};
    std::vector<FitResult> fits;
    for (std::size_t i = 0; i < 5; ++i) {
        s.tables.push_back({1, n1[i], 1, 50});
        fits.push_back(fake_fit(a1[i], se1[i], -3.2, 1.0));
    }
    const auto p = pool_fits(fits, s);
    CHECK(std::abs(p.alpha1_hat + 2.688) < 5e-4);
    CHECK(std::abs(p.se_alpha1 - 1.1713) < 5e-4);
    CHECK(p.k == 5);
    CHECK(p.log_or == p.alpha1_hat - p.alpha2_hat);
    CHECK(p.se_log_or * p.se_log_or ==
          doctest::Approx(p.se_alpha1 * p.se_alpha1 + p.se_alpha2 * p.se_alpha2).epsilon(1e-12));
}

TEST_CASE("pool of one equals the fit")
{
    std::mt19937_64 gen(8);
    FitConfig c;
    c.estimator = Estimator::quadrature;
    for (int rep = 0; rep < 50; ++rep) {
        ContingencyTable t;
        t.n1 = 1 + Count(gen() % 80);
        t.n2 = 1 + Count(gen() % 80);
        t.y1 = Count(gen() % (t.n1 + 1));
        t.y2 = Count(gen() % (t.n2 + 1));
        const auto f = fit_table(t, c);
        const auto p = pool_fits(std::vector<FitResult>{f}, TableSet{"one", {t}});
        CHECK(p.alpha1_hat == f.alpha1_hat);
        CHECK(p.alpha2_hat == f.alpha2_hat);
        CHECK(p.sigma2_hat == f.sigma2_hat);
        CHECK(p.pi1_hat == f.pi1_hat);
        CHECK(p.pi2_hat == f.pi2_hat);
        CHECK(p.se_alpha1 == f.se_alpha1);
        CHECK(p.se_alpha2 == f.se_alpha2);
        CHECK(p.log_or == f.log_or);
        CHECK(p.se_log_or == f.se_log_or);
        CHECK(p.t_stat == f.t_stat);
        CHECK(p.reject == f.reject);
    }
}

TEST_CASE("equal weights give arithmetic means and v/k")
{
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> a(-3, 3);
    for (int k : {2, 3, 7}) {
        TableSet s{"e", {}};
        std::vector<FitResult> fits;
        double sum = 0;
        for (int i = 0; i < k; ++i) {
            s.tables.push_back({3, 12, 4, 12});
            fits.push_back(fake_fit(a(gen), 2.0, a(gen), 2.0));
            sum += fits.back().alpha1_hat;
        }
        const auto p = pool_fits(fits, s);
        CHECK(p.alpha1_hat == doctest::Approx(sum / k).epsilon(1e-12));
        CHECK(p.se_alpha1 * p.se_alpha1 == doctest::Approx(4.0 / k).epsilon(1e-12));
    }
}

TEST_CASE("pooling is permutation invariant and bounded")
{
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> a(-3, 3), se(0.2, 3);
    for (int rep = 0; rep < 100; ++rep) {
        const int k = 2 + int(gen() % 6);
        TableSet s{"p", {}};
        std::vector<FitResult> fits;
        double max_var = 0;
        for (int i = 0; i < k; ++i) {
            s.tables.push_back({1, 1 + Count(gen() % 100), 1, 1 + Count(gen() % 100)});
            fits.push_back(fake_fit(a(gen), se(gen), a(gen), se(gen)));
            max_var = std::max(max_var, fits.back().se_alpha1 * fits.back().se_alpha1);
        }
        const auto p = pool_fits(fits, s);
        CHECK(p.se_alpha1 * p.se_alpha1 <= max_var * (1 + 1e-12));

        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), gen);
        TableSet s2{"p", {}};
        std::vector<FitResult> f2;
        for (auto i : order) {
            s2.tables.push_back(s.tables[i]);
            f2.push_back(fits[i]);
        }
        const auto q = pool_fits(f2, s2);
        CHECK(q.alpha1_hat == doctest::Approx(p.alpha1_hat).epsilon(1e-12));
        CHECK(q.se_log_or == doctest::Approx(p.se_log_or).epsilon(1e-12));
        CHECK(q.pi2_hat == doctest::Approx(p.pi2_hat).epsilon(1e-12));
    }
}

TEST_CASE("pooling errors")
{
    TableSet s{"x", {{1, 2, 1, 2}}};
    CHECK_THROWS_AS(pool_fits(std::vector<FitResult>{}, TableSet{"x", {}}), std::invalid_argument);
    CHECK_THROWS_AS(pool_fits(std::vector<FitResult>(2), s), std::invalid_argument);
}
