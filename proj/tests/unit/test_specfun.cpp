#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>

#include "sonine/errors.hpp"
#include "sonine/specfun.hpp"

using namespace sonine;
namespace sf = sonine::specfun;
constexpr double pi = std::numbers::pi;

TEST_CASE("gamma at integers and one half") {
    CHECK(sf::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sf::gamma(4.0) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(sf::gamma(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
}

TEST_CASE("gamma matches boost on [0.05, 50]") {
    for (double x = 0.05; x <= 50.0; x += 0.37) {
        const double ref = boost::math::tgamma(x);
        CHECK(std::abs(sf::gamma(x) - ref) <= 1e-13 * ref);
    }
}

TEST_CASE("gamma recurrence") {
    for (double x = 0.1; x <= 10.0; x += 0.13) CHECK(std::abs(sf::gamma(x + 1) - x * sf::gamma(x)) <= 1e-12 * sf::gamma(x + 1));
}

TEST_CASE("gamma rejects poles") {
    CHECK_THROWS_AS(sf::gamma(0.0), DomainError);
    CHECK_THROWS_AS(sf::gamma(-3.0), DomainError);
    CHECK(sf::rgamma(-2.0) == 0.0);
}

TEST_CASE("mittag-leffler elementary cases") {
    CHECK(sf::mittag_leffler(1.0, 1.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(std::abs(sf::mittag_leffler(2.0, 1.0, -pi * pi / 4.0)) <= 1e-10);
    for (double a : {0.1, 0.3, 0.5, 0.9, 1.0, 1.5, 2.0}) CHECK(sf::mittag_leffler(a, 1.0, 0.0) == 1.0);
    for (double z : {-2.0, -0.5, 0.5, 2.0}) CHECK(sf::mittag_leffler(1.0, 2.0, z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-10));
}

TEST_CASE("mittag-leffler against high-precision series") {
    // 40-digit series sums.
    struct Ref {
        double a, b, z, v;
    };
    const Ref refs[] = {
        {0.5, 1.0, -1.0, 0.42758357615580700441},  {0.5, 1.0, -3.0, 0.17900115118138995042},
        {0.3, 0.7, -1.0, 0.31378877553687530809},  {0.8, 1.2, 3.0, 49.113409817271753572},
        {0.9, 1.0, -10.0, 0.012820606051102099938}, {0.5, 0.5, -2.0, 0.053398230926744799218},
        {0.4, 0.8, -0.5, 0.5056891177918265343},   {1.5, 1.0, -3.0, -0.17556537379997824292},
    };
    for (const auto& r : refs) {
        CAPTURE(r.a);
        CAPTURE(r.z);
        CHECK(std::abs(sf::mittag_leffler(r.a, r.b, r.z) - r.v) <= 1e-10 * std::max(1.0, std::abs(r.v)));
    }
}

TEST_CASE("mittag-leffler of order one half is a scaled erfc") {
    // E_{1/2}(-x) = exp(x^2) erfc(x)
    for (double x : {0.1, 1.0, 5.0, 20.0})
        CHECK(sf::mittag_leffler(0.5, 1.0, -x) == doctest::Approx(std::exp(x * x) * boost::math::erfc(x)).epsilon(1e-9));
    for (double x : {30.0, 100.0, 1e4}) {
        const double u = 1.0 / (2.0 * x * x);
        const double ref = (1.0 - u + 3 * u * u - 15 * u * u * u + 105 * u * u * u * u) / (x * std::sqrt(pi));
        CHECK(sf::mittag_leffler(0.5, 1.0, -x) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("mittag-leffler is a monotone relaxation on the negative axis") {
    for (double a : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        double prev = 1.0;
        for (double x = 0.0; x <= 100.0; x += 0.25) {
            const double v = sf::mittag_leffler(a, 1.0, -x);
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-14);
            prev = v;
        }
    }
}

TEST_CASE("mittag-leffler reports out-of-range parameters") {
    CHECK_THROWS_AS(sf::mittag_leffler(2.5, 1.0, -1.0), RangeError);
    CHECK_THROWS(sf::mittag_leffler(0.0, 1.0, -1.0));
    const auto r = sf::mittag_leffler_eval(0.5, 1.0, -2.0);
    CHECK(r.est_abs_error >= 0.0);
    CHECK(std::isfinite(r.est_abs_error));
}

TEST_CASE("bessel values at the origin and half-integer order") {
    CHECK(sf::bessel_j(0.0, 0.0) == 1.0);
    CHECK(sf::bessel_i(0.0, 0.0) == 1.0);
    CHECK(std::abs(sf::bessel_j(0.5, pi)) <= 1e-12);
}

TEST_CASE("bessel matches boost") {
    for (double nu : {-0.9, -0.6, -0.5, -0.1, 0.0, 0.4, 1.0, 2.5}) {
        for (double y : {0.01, 0.3, 1.0, 4.0, 12.0, 25.0, 50.0}) {
            CAPTURE(nu);
            CAPTURE(y);
            CHECK(std::abs(sf::bessel_j(nu, y) - boost::math::cyl_bessel_j(nu, y)) <= 1e-10);
            const double iref = boost::math::cyl_bessel_i(nu, y);
            CHECK(std::abs(sf::bessel_i(nu, y) - iref) <= 1e-10 * std::max(1.0, iref));
            CHECK(sf::bessel_i(nu, y) > 0.0);
        }
    }
}

TEST_CASE("modified bessel equals its integral representation") {
    // I_nu(y) = (1/pi) int_0^pi e^{y cos t} cos(nu t) dt - sin(nu pi)/pi int_0^inf e^{-y cosh t - nu t} dt
    boost::math::quadrature::exp_sinh<double> tail;
    for (double nu : {-0.9, -0.5, -0.1})
        for (double y : {0.5, 2.0, 8.0}) {
            const double a = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double t) { return std::exp(y * std::cos(t)) * std::cos(nu * t); }, 0.0, pi, 10, 1e-14);
            const double b = tail.integrate([&](double t) { return std::exp(-y * std::cosh(t) - nu * t); });
            const double ref = a / pi - std::sin(nu * pi) / pi * b;
            CHECK(sf::bessel_i(nu, y) == doctest::Approx(ref).epsilon(1e-8));
        }
}

TEST_CASE("bessel rejects orders at or below -1") {
    CHECK_THROWS_AS(sf::bessel_j(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(sf::bessel_i(-1.5, 1.0), DomainError);
}

TEST_CASE("exponential integral matches quadrature and boost") {
    const double q = boost::math::quadrature::exp_sinh<double>().integrate([](double u) { return std::exp(-u) / u; }, 1.0,
                                                                          std::numeric_limits<double>::infinity());
    CHECK(sf::exp_integral_e1(1.0) == doctest::Approx(q).epsilon(1e-10));
    for (double t : {1e-8, 0.01, 0.5, 1.0, 1.5, 3.0, 10.0, 40.0, 200.0})
        CHECK(sf::exp_integral_e1(t) == doctest::Approx(boost::math::expint(1, t)).epsilon(1e-10));
}

TEST_CASE("exponential integral asymptotics and monotonicity") {
    const double r = sf::exp_integral_e1(30.0) / (std::exp(-30.0) / 30.0);
    CHECK(r >= 0.9);
    CHECK(r <= 1.0);
    double prev = sf::exp_integral_e1(0.01);
    for (double t = 0.02; t < 600.0; t *= 1.3) {
        const double v = sf::exp_integral_e1(t);
        CHECK(v >= 0.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(sf::exp_integral_e1(0.0), DomainError);
    CHECK(sf::exp_integral_e1_scaled(50.0) == doctest::Approx(std::exp(50.0) * boost::math::expint(1, 50.0)).epsilon(1e-12));
}
