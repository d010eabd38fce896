#include <doctest.h>

#include <cmath>
#include <random>

#include "sonine/kernels.hpp"
#include "sonine/nonlin.hpp"
#include "sonine/spatial.hpp"
#include "sonine/specfun.hpp"
#include "sonine/tstep.hpp"

using namespace sonine;

// Seeded random instances; failures reproduce with the printed parameters.

TEST_CASE("weights are nonnegative and telescope on random graded grids") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> alpha(0.05, 0.95), T(0.1, 20.0), r(1.0, 4.0);
    std::uniform_int_distribution<int> N(4, 64);
    for (int trial = 0; trial < 40; ++trial) {
        const double a = alpha(rng), t = T(rng), g = r(rng);
        const int n = N(rng);
        CAPTURE(a);
        CAPTURE(t);
        CAPTURE(g);
        CAPTURE(n);
        const auto pair = make_pair(trial % 2 ? SonineSpec::riemann_liouville(a) : SonineSpec::tempered(a, 0.5 + a));
        const auto grid = TimeGrid::graded(t, n, g);
        const auto w = build_weights(pair, grid);
        double sum = 0.0;
        for (double x : w.row(n)) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(pair.cum_l(t)).epsilon(1e-10));
    }
}

TEST_CASE("parseval holds for random modal data") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> L(0.5, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double len = L(rng);
        const auto op = SpectralOperator::dirichlet_laplacian(len, 12);
        std::vector<double> c(12);
        for (double& x : c) x = z(rng);
        const auto f = to_nodal(Field::from_modal(c), op);
        CHECK(nodal_l2_norm(f.nodal, len) == doctest::Approx(l2_norm(f)).epsilon(1e-12));
        const auto back = to_modal(Field::from_nodal(f.nodal), op);
        for (int k = 0; k < 12; ++k) CHECK(back.modal[k] == doctest::Approx(c[k]).epsilon(1e-10).scale(1.0));
        CHECK(coercivity_check(op, Field::from_modal(c)).pass);
    }
}

TEST_CASE("mittag-leffler is completely monotone on the negative axis") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> alpha(0.1, 1.0), x(0.0, 30.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = alpha(rng), x1 = x(rng), x2 = x1 + 0.5;
        CAPTURE(a);
        CAPTURE(x1);
        const double e1 = specfun::mittag_leffler(a, 1.0, -x1), e2 = specfun::mittag_leffler(a, 1.0, -x2);
        CHECK(e1 > 0.0);
        CHECK(e1 <= 1.0 + 1e-14);
        CHECK(e2 <= e1);
    }
}

TEST_CASE("random sources of the admissible shape pass the hypothesis check") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pq(1.1, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double p = pq(rng), q = pq(rng);
        CAPTURE(p);
        CAPTURE(q);
        CHECK(check_hypothesis_C(NonlinearSource::power_fisher(p, q), 2001, -2.0, 3.0).pass());
    }
}
