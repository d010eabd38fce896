// Acceptance run: one [PASS]/[FAIL] line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sonine/specfun.hpp"
#include "sonine/verify.hpp"

using namespace sonine;
using verify::Case;
using verify::SuiteResult;

namespace {

constexpr double pi = std::numbers::pi;

int failures = 0;

void verdict(int id, const std::string& title, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    if (!ok) ++failures;
}

void info(const Case& c) {
    std::printf("    %-6s %s", c.asserted ? (c.pass ? "ok" : "FAILED") : "info", c.name.c_str());
    for (const auto& q : c.measured) std::printf(" %s=%.6g", q.name.c_str(), q.value);
    if (!c.note.empty()) std::printf(" (%s)", c.note.c_str());
    std::printf("\n");
}

std::vector<const Case*> with_claim(const SuiteResult& r, const std::string& prefix) {
    std::vector<const Case*> out;
    for (const auto& c : r.cases)
        if (c.claim.rfind(prefix, 0) == 0) out.push_back(&c);
    return out;
}

bool all_pass(const std::vector<const Case*>& cases) {
    return !cases.empty() && std::all_of(cases.begin(), cases.end(), [](const Case* c) { return !c->asserted || c->pass; });
}

std::string timing(double seconds, double limit) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f s (limit %.0f s)", seconds, limit);
    return buf;
}

SuiteResult run(const std::string& name, const verify::Options& opt) {
    std::printf("running %s...\n", name.c_str());
    std::fflush(stdout);
    return verify::run_suite(name, opt);
}

struct Check {
    std::string what;
    bool ok;
};

// Elementary identities for the special functions.
std::vector<Check> special_function_checks() {
    namespace sf = specfun;
    std::vector<Check> out;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    out.push_back({"gamma(1) = 1", rel(sf::gamma(1.0), 1.0) <= 1e-15});
    out.push_back({"gamma(4) = 6", rel(sf::gamma(4.0), 6.0) <= 1e-14});
    out.push_back({"gamma(1/2) = sqrt(pi)", rel(sf::gamma(0.5), std::sqrt(pi)) <= 1e-14});
    bool rec = true;
    for (double x = 0.1; x <= 10.0; x += 0.05)
        rec = rec && std::abs(sf::gamma(x + 1.0) - x * sf::gamma(x)) <= 1e-12 * std::abs(sf::gamma(x + 1.0));
    out.push_back({"gamma(x+1) = x gamma(x) on [0.1, 10]", rec});

    out.push_back({"E_{1,1}(1) = e", rel(sf::mittag_leffler(1.0, 1.0, 1.0), std::numbers::e) <= 1e-13});
    out.push_back({"E_{2,1}(-(pi/2)^2) = 0", std::abs(sf::mittag_leffler(2.0, 1.0, -pi * pi / 4.0)) <= 1e-12});
    out.push_back({"E_{0.5,1}(-1) reference", rel(sf::mittag_leffler(0.5, 1.0, -1.0), 0.42758357615580700441) <= 1e-10});
    bool at_zero = true;
    for (double a = 0.1; a <= 2.0; a += 0.1) at_zero = at_zero && sf::mittag_leffler(a, 1.0, 0.0) == 1.0;
    out.push_back({"E_{a,1}(0) = 1 on (0, 2]", at_zero});
    bool e12 = true;
    for (double z : {-2.0, -0.5, 0.5, 2.0}) e12 = e12 && rel(sf::mittag_leffler(1.0, 2.0, z), std::expm1(z) / z) <= 1e-10;
    out.push_back({"E_{1,2}(z) = (e^z - 1)/z", e12});

    out.push_back({"J_0(0) = 1", sf::bessel_j(0.0, 0.0) == 1.0});
    out.push_back({"I_0(0) = 1", sf::bessel_i(0.0, 0.0) == 1.0});
    out.push_back({"J_{1/2}(pi) = 0", std::abs(sf::bessel_j(0.5, pi)) <= 1e-14});
    bool irep = true;
    boost::math::quadrature::exp_sinh<double> tail;
    for (double nu : {-0.9, -0.5, -0.1})
        for (double y : {0.5, 2.0, 8.0}) {
            const double a = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                [&](double t) { return std::exp(y * std::cos(t)) * std::cos(nu * t); }, 0.0, pi, 10, 1e-14);
            const double b = tail.integrate([&](double t) { return std::exp(-y * std::cosh(t) - nu * t); });
            const double ref = a / pi - std::sin(nu * pi) / pi * b;
            irep = irep && std::abs(sf::bessel_i(nu, y) - ref) <= 1e-8 * std::abs(ref);
        }
    out.push_back({"I_nu series = integral representation", irep});

    const double q = tail.integrate([](double u) { return std::exp(-u) / u; }, 1.0, std::numeric_limits<double>::infinity());
    out.push_back({"E1(1) = quadrature", rel(sf::exp_integral_e1(1.0), q) <= 1e-10});
    const double ratio = sf::exp_integral_e1(30.0) / (std::exp(-30.0) / 30.0);
    out.push_back({"E1(30) ~ e^-t/t", ratio >= 0.9 && ratio <= 1.0});
    bool mono = true;
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 0.01; t <= 700.0; t *= 1.1) {
        const double v = sf::exp_integral_e1(t);
        mono = mono && v > 0.0 && v < prev;
        prev = v;
    }
    out.push_back({"E1 positive and decreasing", mono});
    return out;
}

}  // namespace

int main() {
    verify::Options opt;
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    {
        const auto r = run("sonine", opt);
        const auto cases = with_claim(r, "sonine-identity");
        double worst = 0.0;
        for (const Case* c : cases) {
            info(*c);
            for (const auto& q : c->measured)
                if (q.name == "max_deviation" || q.name == "residual_max") worst = std::max(worst, q.value);
        }
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu pairs, worst %.2e, ", cases.size(), worst);
        verdict(1, "sonine identity", all_pass(cases) && cases.size() >= 7 && r.seconds < 60.0,
                buf + timing(r.seconds, 60));
    }
    {
        const auto r = run("convergence", opt);
        const Case* c = r.find("rl-0.5-uniform");
        if (c) info(*c);
        verdict(2, "exact-solution convergence", c && c->pass && r.seconds < 120.0, timing(r.seconds, 120));
    }
    {
        const auto r = run("invariance", opt);
        const auto cases = with_claim(r, "range-invariance");
        for (const Case* c : cases)
            if (!c->pass) info(*c);
        verdict(3, "range invariance",
                all_pass(cases) && cases.size() == 30 && r.seconds < 300.0,
                std::to_string(r.passed()) + "/" + std::to_string(cases.size()) + " cases, " + timing(r.seconds, 300));
    }
    {
        const auto r = run("decay", opt);
        std::vector<const Case*> est = with_claim(r, "decay-estimate"), reg = with_claim(r, "decay-regime");
        for (const Case* c : est) info(*c);
        for (const Case* c : reg) info(*c);
        verdict(4, "decay estimate and regimes", all_pass(est) && all_pass(reg) && r.seconds < 300.0,
                std::to_string(est.size()) + " estimate cases, " + std::to_string(reg.size()) + " regime fits, " +
                    timing(r.seconds, 300));
        const auto maj = with_claim(r, "majorant-domination");
        for (const Case* c : maj) info(*c);
        verdict(5, "majorant domination", all_pass(maj) && maj.size() == est.size(),
                std::to_string(maj.size()) + " cases");
    }
    {
        const auto r = run("blowup", opt);
        for (const auto& c : r.cases) info(c);
        auto ok = [&](const std::string& claim) { return all_pass(with_claim(r, claim)); };
        const bool a = ok("blowup-ode-sanity"), b = ok("blowup-time-bracket"), c = ok("blowup-pde"), d = ok("blowup-threshold");
        std::string detail = std::string("(a) ") + (a ? "ok" : "fail") + " (b) " + (b ? "ok" : "fail") + " (c) " +
                             (c ? "ok" : "fail") + " (d) " + (d ? "ok" : "fail") + ", " + timing(r.seconds, 600);
        verdict(6, "blow-up", a && b && c && d && r.seconds < 600.0, detail);
    }
    {
        const auto r = run("quasilinear", opt);
        const auto cases = with_claim(r, "quasilinear-decay-rate");
        for (const Case* c : cases) info(*c);
        verdict(7, "quasilinear decay rate", all_pass(cases) && cases.size() == 9 && r.seconds < 300.0,
                std::to_string(cases.size()) + " combinations, " + timing(r.seconds, 300));
    }
    {
        const auto t0 = std::chrono::steady_clock::now();
        const auto checks = special_function_checks();
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = true;
        for (const auto& c : checks) {
            std::printf("    %-6s %s\n", c.ok ? "ok" : "FAILED", c.what.c_str());
            ok = ok && c.ok;
        }
        verdict(8, "special functions", ok && s < 10.0, std::to_string(checks.size()) + " identities, " + timing(s, 10));
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
