#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "sonine/errors.hpp"
#include "sonine/specfun.hpp"
#include "sonine/tstep.hpp"

using namespace sonine;
constexpr double pi = std::numbers::pi;

TEST_CASE("time grids") {
    const auto u = TimeGrid::uniform(2.0, 8);
    CHECK(u[0] == 0.0);
    CHECK(u[8] == 2.0);
    CHECK(u.n_steps() == 8);
    CHECK(u.is_uniform());
    const auto g = TimeGrid::graded(1.0, 10, 2.0);
    CHECK(g[1] == doctest::Approx(0.01));
    CHECK(g.horizon() == 1.0);
    CHECK_FALSE(g.is_uniform());
    const auto g1 = TimeGrid::graded(3.0, 7, 1.0);
    for (int j = 0; j <= 7; ++j) CHECK(g1[j] == doctest::Approx(TimeGrid::uniform(3.0, 7)[j]).epsilon(1e-15));
    CHECK(g1.is_uniform());
    CHECK_THROWS_AS(TimeGrid::uniform(0.0, 4), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::graded(1.0, 4, 0.5), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::from_nodes({0.0, 0.5, 0.5}), PreconditionError);
    CHECK_THROWS_AS(TimeGrid::from_nodes({0.1, 0.5}), PreconditionError);
}

TEST_CASE("closed-form weights") {
    const auto rl = build_weights(make_pair(SonineSpec::riemann_liouville(0.5)), TimeGrid::uniform(1.0, 4));
    CHECK(rl.weight(1, 0) == doctest::Approx(0.5 / std::tgamma(1.5)).epsilon(1e-14));
    const auto gg = TimeGrid::graded(1.0, 6, 2.0);
    const auto d = build_weights(make_pair(SonineSpec::dirac()), gg);
    for (int n = 1; n <= 6; ++n)
        for (int j = 0; j < n; ++j) CHECK(d.weight(n, j) == doctest::Approx(gg[j + 1] - gg[j]).epsilon(1e-14));
}

TEST_CASE("weight rows telescope to the cumulative l") {
    for (const auto& s : {SonineSpec::tempered(0.5, 1.0), SonineSpec::riemann_liouville(0.3), SonineSpec::distributed_order(),
                          SonineSpec::mittag_leffler(0.3, 0.7)})
        for (const auto& g : {TimeGrid::uniform(1.0, 16), TimeGrid::graded(1.0, 16, 3.0)}) {
            const auto pair = make_pair(s);
            const auto w = build_weights(pair, g);
            for (int n = 1; n <= 16; ++n) {
                double sum = 0.0;
                for (double x : w.row(n)) {
                    CHECK(x >= 0.0);
                    sum += x;
                }
                CHECK(std::abs(sum - pair.cum_l(g[n])) <= 1e-8);
            }
        }
}

TEST_CASE("linear majorant") {
    SUBCASE("dirac kernel gives the exponential") {
        const auto tr = solve_linear_majorant(1.0, make_pair(SonineSpec::dirac()), TimeGrid::uniform(2.0, 2048));
        for (std::size_t n = 0; n < tr.times.size(); ++n) CHECK(std::abs(tr.values[n] - std::exp(-tr.times[n])) <= 1e-3);
    }
    SUBCASE("power kernel gives the mittag-leffler relaxation") {
        const auto tr = solve_linear_majorant(1.0, make_pair(SonineSpec::riemann_liouville(0.5)), TimeGrid::uniform(1.0, 4096));
        for (std::size_t n = 0; n < tr.times.size(); n += 64)
            CHECK(std::abs(tr.values[n] - specfun::mittag_leffler(0.5, 1.0, -std::sqrt(tr.times[n]))) <= 1e-3);
    }
    SUBCASE("positivity, monotonicity and the bound") {
        for (const auto& s : {SonineSpec::riemann_liouville(0.5), SonineSpec::tempered(0.5, 1.0), SonineSpec::distributed_order(),
                              SonineSpec::bessel(0.4), SonineSpec::mittag_leffler(0.3, 0.7), SonineSpec::multi_term({0.8, 0.4})})
            for (double C : {1.0, pi * pi}) {
                CAPTURE(s.describe());
                const auto pair = make_pair(s);
                const auto tr = solve_linear_majorant(C, pair, TimeGrid::uniform(2.0, 2048));
                CHECK(tr.status == RunStatus::Completed);
                // The Bessel pair has a growing l, and W changes sign for it.
                const bool monotone_kernel = s.kind() != KernelKind::BesselPair;
                for (std::size_t n = 1; n < tr.values.size(); ++n) {
                    if (monotone_kernel) {
                        CHECK(tr.values[n] >= 0.0);
                        CHECK(tr.values[n] <= tr.values[n - 1] + 1e-14);
                    }
                    CHECK(tr.values[n] <= 1.0 / (1.0 + C * pair.cum_l(tr.times[n])) + 1e-3);
                }
            }
    }
    CHECK_THROWS_AS(solve_linear_majorant(0.0, make_pair(SonineSpec::dirac()), TimeGrid::uniform(1.0, 4)), PreconditionError);
}

TEST_CASE("scalar blow-up of the square nonlinearity") {
    const auto sq = NonlinearSource::custom("square", [](double y) { return y * y; }, [](double y) { return 2 * y; });
    const auto tr = solve_scalar_nonlinear(make_pair(SonineSpec::dirac()), 0.0, sq, 1.0, TimeGrid::uniform(2.0, 4096), 1e6);
    REQUIRE(tr.status == RunStatus::BlowUp);
    REQUIRE(tr.bracket);
    CHECK(tr.bracket->width() <= 1e-3 * tr.bracket->t_high + 1e-15);
    REQUIRE(tr.enclosure);
    CHECK(tr.enclosure->contains(1.0));
    CHECK(tr.enclosure->width() <= 1e-2);
}

TEST_CASE("scalar fisher problem") {
    const auto f = NonlinearSource::fisher_kpp();
    const auto pair = make_pair(SonineSpec::riemann_liouville(0.5));
    SUBCASE("zero is a fixed point") {
        const auto tr = solve_scalar_nonlinear(pair, pi * pi, f, 0.0, TimeGrid::uniform(1.0, 256), 1e6);
        for (double v : tr.values) CHECK(v == 0.0);
    }
    SUBCASE("large data blows up, and the bracket is stable under refinement") {
        const auto a = solve_scalar_nonlinear(pair, pi * pi, f, 40.0, TimeGrid::uniform(1.0, 1024), 1e6);
        const auto b = solve_scalar_nonlinear(pair, pi * pi, f, 40.0, TimeGrid::uniform(1.0, 4096), 1e6);
        REQUIRE(a.status == RunStatus::BlowUp);
        REQUIRE(b.status == RunStatus::BlowUp);
        CHECK(std::isfinite(b.bracket->t_high));
        CHECK(b.enclosure->t_low <= a.enclosure->t_high);
        CHECK(a.enclosure->t_low <= b.enclosure->t_high);
    }
    SUBCASE("comparison principle") {
        const auto lo = solve_scalar_nonlinear(pair, pi * pi, f, 3.0, TimeGrid::uniform(1.0, 512), 1e6);
        const auto hi = solve_scalar_nonlinear(pair, pi * pi, f, 6.0, TimeGrid::uniform(1.0, 512), 1e6);
        for (std::size_t n = 0; n < lo.values.size(); ++n) CHECK(lo.values[n] <= hi.values[n] + 1e-10);
    }
    CHECK_THROWS_AS(solve_scalar_nonlinear(pair, pi * pi, f, -1.0, TimeGrid::uniform(1.0, 8), 1e6), PreconditionError);
    CHECK_THROWS_AS(solve_scalar_nonlinear(pair, pi * pi, f, 1.0, TimeGrid::uniform(1.0, 8), 10.0), PreconditionError);
}

TEST_CASE("power decay") {
    SUBCASE("linear case is the mittag-leffler relaxation") {
        const auto tr = solve_power_decay(0.5, 1.0, 1.0, 1.0, TimeGrid::uniform(1.0, 4096));
        CHECK(tr.values.back() == doctest::Approx(specfun::mittag_leffler(0.5, 1.0, -1.0)).epsilon(1e-3));
    }
    SUBCASE("zero data") {
        const auto tr = solve_power_decay(0.5, 1.0, 2.0, 0.0, TimeGrid::uniform(1.0, 64));
        for (double v : tr.values) CHECK(v == 0.0);
    }
    SUBCASE("positive and nonincreasing") {
        const auto tr = solve_power_decay(0.5, 1.0, 2.0, 1.0, TimeGrid::graded(1e4, 1000, 3.0));
        for (std::size_t n = 1; n < tr.values.size(); ++n) {
            CHECK(tr.values[n] > 0.0);
            CHECK(tr.values[n] <= tr.values[n - 1]);
        }
    }
}

TEST_CASE("closed-form blow-up bracket") {
    const auto b = bracket_blowup_bounds(0.5, 4.0);
    CHECK(b.t_low == doctest::Approx(std::pow(std::tgamma(1.5) / 18.0, 2)));
    CHECK(b.t_high == doctest::Approx(std::pow(std::tgamma(1.5) / 4.0, 2)));
    CHECK(b.t_high == doctest::Approx(0.049087).epsilon(1e-4));
    const auto one = bracket_blowup_bounds(1.0, 2.0);
    CHECK(one.t_low == doctest::Approx(1.0 / 10.0));
    CHECK(one.t_high == doctest::Approx(0.5));
    const auto big = bracket_blowup_bounds(0.5, 1e8);
    CHECK(big.t_high < 1e-15);
    CHECK(bracket_blowup_bounds(0.9, 10.0).t_low < bracket_blowup_bounds(0.9, 10.0).t_high);
    CHECK_THROWS_AS(bracket_blowup_bounds(0.5, 0.0), PreconditionError);
}

TEST_CASE("trace csv") {
    const auto tr = solve_linear_majorant(1.0, make_pair(SonineSpec::dirac()), TimeGrid::uniform(1.0, 3));
    std::ostringstream os;
    write_trace_csv(tr, os);
    const std::string s = os.str();
    CHECK(s.rfind("step,t,value,status\n", 0) == 0);
    CHECK(s.find("0,0,1,ok\n") != std::string::npos);
    CHECK(s.find(",Completed\n") != std::string::npos);
}
