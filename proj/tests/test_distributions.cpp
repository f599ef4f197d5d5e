#include "ostat/distributions.hpp"
#include "ostat/theta.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace ostat;

namespace {

// 2*count log-spaced probabilities covering [floor_u, 1-floor_u] through
// both tails.
std::vector<double> two_tail_grid(std::size_t count, double floor_u = 1e-12) {
    std::vector<double> us;
    const double lo = std::log(floor_u), hi = std::log(0.5);
    for (std::size_t k = 0; k < count; ++k) {
        const double u = std::exp(lo + (hi - lo) * k / (count - 1));
        us.push_back(u);
        us.push_back(1.0 - u);
    }
    std::sort(us.begin(), us.end());
    return us;
}

std::vector<DistributionModel> all_models() {
    return {DistributionModel::uniform01(),    DistributionModel::normal(0.0, 1.0),
            DistributionModel::normal(1.5, 0.5), DistributionModel::exponential(1.0),
            DistributionModel::laplace(0.0, 1.0), DistributionModel::gen_exp(2.0)};
}

} // namespace

TEST_SUITE("distributions") {

TEST_CASE("cdf examples") {
    CHECK(DistributionModel::normal(0, 1).cdf(0.0) == 0.5);
    CHECK(DistributionModel::exponential(1.0).cdf(std::log(2.0)) ==
          doctest::Approx(0.5).epsilon(1e-15));
    // high-precision quadrature oracle for the normal integral
    const double x = 1.959964;
    CHECK(DistributionModel::normal(0, 1).cdf(x) == doctest::Approx(0.975).epsilon(1e-6));
    CHECK(DistributionModel::normal(0, 1).cdf(x) ==
          doctest::Approx(oracle::normal_cdf_quadrature(x)).epsilon(1e-13));
}

TEST_CASE("quantile examples") {
    CHECK(DistributionModel::uniform01().quantile(0.3) == 0.3);
    CHECK(DistributionModel::normal(0, 1).quantile(0.5) == 0.0);
    CHECK(DistributionModel::exponential(1.0).quantile(1.0 - std::exp(-1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal quantile against frozen high-precision values") {
    const auto N = DistributionModel::normal(0, 1);
    const struct {
        double u, x;
    } cases[] = {
        {1e-300, -37.047096299361199237},
        {1e-16, -8.2220822161304356},
        {1e-12, -7.0344838253011319},
        {1e-6, -4.7534243088228989},
        {0.00135, -2.9999769927033931},
        {0.25, -0.67448975019608174},
        {0.975, 1.9599639845400542},
    };
    for (const auto& c : cases) CHECK(N.quantile(c.u) == doctest::Approx(c.x).epsilon(1e-9));
    // location/scale transform
    const auto M = DistributionModel::normal(2.0, 3.0);
    CHECK(M.quantile(0.25) == doctest::Approx(2.0 - 3.0 * 0.67448975019608174).epsilon(1e-12));
}

TEST_CASE("round trip cdf(quantile(u)) over both tails") {
    for (const auto& model : all_models()) {
        const std::size_t count = model.family() == Family::GenExp ? 1000 : 5000;
        double worst = 0.0;
        for (double u : two_tail_grid(count))
            worst = std::max(worst, std::abs(model.cdf(model.quantile(u)) - u));
        INFO(model.name());
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("quantile(cdf(x)) = x on the central range") {
    for (const auto& model : all_models()) {
        const double lo = model.quantile(5e-7), hi = model.quantile(1.0 - 5e-7);
        double worst = 0.0;
        for (int k = 1; k < 400; ++k) {
            const double x = lo + (hi - lo) * k / 400.0;
            worst = std::max(worst, std::abs(model.quantile(model.cdf(x)) - x));
        }
        INFO(model.name());
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("quantile strictly increasing") {
    for (const auto& model : all_models()) {
        const std::size_t count = model.family() == Family::GenExp ? 1000 : 5000;
        const auto grid = two_tail_grid(count);
        double prev = -std::numeric_limits<double>::infinity();
        bool strict = true;
        for (double u : grid) {
            const double q = model.quantile(u);
            strict = strict && q > prev;
            prev = q;
        }
        INFO(model.name());
        CHECK(strict);
    }
}

TEST_CASE("cdf is nondecreasing with limits 0 and 1") {
    for (const auto& model : all_models()) {
        INFO(model.name());
        const double lo = model.quantile(1e-12) - 4.0;
        const double hi = model.quantile(1.0 - 1e-12) + 4.0;
        double prev = 0.0;
        for (int k = 0; k <= 500; ++k) {
            const double f = model.cdf(lo + (hi - lo) * k / 500.0);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
            CHECK(f >= prev);
            prev = f;
        }
        CHECK(model.cdf(lo) <= 1e-10);
        CHECK(model.cdf(hi) >= 1.0 - 1e-10);
    }
}

TEST_CASE("density integrates to one") {
    for (const auto& model : all_models()) {
        INFO(model.name());
        CHECK(oracle::density_mass(model) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("log_density examples") {
    CHECK(DistributionModel::laplace(0, 1).log_density(0.0) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-15));
    const auto G2 = DistributionModel::gen_exp(2.0);
    CHECK(G2.log_density(0.0) - G2.log_density(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    const auto N = DistributionModel::normal(0, 1);
    for (double x : {0.3, 1.7, 4.0}) CHECK(N.log_density(x) == N.log_density(-x));
}

TEST_CASE("genexp matches closed-form relatives") {
    // p = 1 is the standard Laplace; p = 2 is a normal with sd 1/sqrt(2)
    const auto G1 = DistributionModel::gen_exp(1.0);
    const auto L = DistributionModel::laplace(0, 1);
    const auto G2 = DistributionModel::gen_exp(2.0);
    const auto N2 = DistributionModel::normal(0.0, 0.7071067811865476);
    for (double x = -8.0; x <= 8.0; x += 0.41) {
        CHECK(G1.cdf(x) == doctest::Approx(L.cdf(x)).epsilon(1e-11));
        CHECK(G2.cdf(x) == doctest::Approx(N2.cdf(x)).epsilon(1e-11));
        CHECK(G1.log_density(x) == doctest::Approx(L.log_density(x)).epsilon(1e-11));
    }
    for (double u : {1e-9, 0.02, 0.5, 0.77, 1.0 - 1e-9})
        CHECK(G1.quantile(u) == doctest::Approx(L.quantile(u)).epsilon(1e-9));
}

TEST_CASE("genexp normalizer against the gamma function") {
    for (double p : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        const auto G = DistributionModel::gen_exp(p);
        CHECK(std::exp(G.log_density(0.0)) ==
              doctest::Approx(oracle::genexp_normalizer(p)).epsilon(1e-10));
    }
}

TEST_CASE("deep tail quantile branch stays consistent and monotone") {
    const auto G = DistributionModel::gen_exp(2.0);
    double prev = -std::numeric_limits<double>::infinity();
    for (double u : {1e-20, 1e-18, 1e-16, 5e-15, 2e-14, 1e-13, 1e-12}) {
        const double x = G.quantile(u);
        CHECK(x > prev);
        prev = x;
        const double back = G.cdf(x);
        CHECK(std::abs(back - u) / u < 0.05);  // one-term tail inversion
    }
}

TEST_CASE("tail classification table") {
    CHECK(classify_tail(DistributionModel::normal(0, 1)) == TailClass::SuperExponential);
    CHECK(classify_tail(DistributionModel::uniform01()) == TailClass::SuperExponential);
    CHECK(classify_tail(DistributionModel::gen_exp(2.0)) == TailClass::SuperExponential);
    CHECK(classify_tail(DistributionModel::gen_exp(1.0)) == TailClass::ExponentialTail);
    CHECK(classify_tail(DistributionModel::exponential(1.0)) == TailClass::ExponentialTail);
    CHECK(classify_tail(DistributionModel::laplace(0, 1)) == TailClass::ExponentialTail);
}

TEST_CASE("survival ratio guard backs the classification table") {
    // ratio (1-F(t+1))/(1-F(t)) at ever deeper t, via log_survival
    const auto ratio = [](const DistributionModel& m, double t) {
        return std::exp(m.log_survival(t + 1.0) - m.log_survival(t));
    };
    const double ts[] = {5.0, 10.0, 20.0, 40.0};

    for (const auto& m : {DistributionModel::normal(0, 1), DistributionModel::gen_exp(2.0)}) {
        INFO(m.name());
        double prev = 1.0;
        for (double t : ts) {
            const double r = ratio(m, t);
            CHECK(r < 1.0);
            CHECK(r < prev);
            prev = r;
        }
        CHECK(prev < 1e-8);  // vanishing, not merely below 1
        // left tail by symmetry: F(-t-1)/F(-t) equals the right-tail ratio
        CHECK(m.cdf(-6.0) / m.cdf(-5.0) == doctest::Approx(ratio(m, 5.0)).epsilon(1e-9));
    }
    for (const auto& m : {DistributionModel::exponential(1.0), DistributionModel::laplace(0, 1)}) {
        INFO(m.name());
        for (double t : ts) CHECK(ratio(m, t) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    }
}

TEST_CASE("quantile tail bound consistency with the calibrated constant") {
    // |F^-1(u)| <= c * max{(log 1/u)^(1/p), (log 1/(1-u))^(1/p)} down to 1e-12,
    // with c calibrated on the default grid.
    const struct {
        DistributionModel model;
        double p;
    } cases[] = {{DistributionModel::normal(0, 1), 2.0}, {DistributionModel::gen_exp(2.0), 2.0}};
    for (const auto& c : cases) {
        const double cal = check_quantile_tail_bound(c.model, c.p).c;
        INFO(c.model.name());
        for (double u : two_tail_grid(300)) {
            const double bound = std::max(std::pow(-std::log(u), 1.0 / c.p),
                                          std::pow(-std::log1p(-u), 1.0 / c.p));
            CHECK(std::abs(c.model.quantile(u)) <= cal * bound * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("domain errors") {
    const auto N = DistributionModel::normal(0, 1);
    CHECK_THROWS_AS(N.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(N.quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(N.quantile(-0.3), std::domain_error);
    CHECK_THROWS_AS(N.cdf(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(N.cdf(std::numeric_limits<double>::infinity()), std::domain_error);
    CHECK_THROWS_AS(DistributionModel::normal(0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::laplace(0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionModel::gen_exp(0.5), std::invalid_argument);
}

TEST_CASE("p_index table") {
    CHECK(DistributionModel::normal(0, 1).p_index() == 2.0);
    CHECK(DistributionModel::exponential(1.0).p_index() == 1.0);
    CHECK(DistributionModel::laplace(0, 1).p_index() == 1.0);
    CHECK(DistributionModel::gen_exp(3.0).p_index() == 3.0);
    CHECK(std::isinf(DistributionModel::uniform01().p_index()));
}

} // TEST_SUITE
