#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sonine/config.hpp"
#include "sonine/errors.hpp"

using namespace sonine;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

int error_line(const std::string& text) {
    try {
        build_problem(parse(text));
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

const char* kBase =
    "# fisher with a power kernel\n"
    "[kernel]\n"
    "type = riemann_liouville\n"
    "alpha = 0.5\n"
    "\n"
    "[operator]\n"
    "modes = 8\n"
    "\n"
    "[source]\n"
    "type = fisher_kpp\n"
    "\n"
    "[time]\n"
    "T = 0.5\n"
    "steps = 32\n";

}  // namespace

TEST_CASE("parse a full config") {
    const auto c = parse(kBase);
    CHECK(c.kernel.type == "riemann_liouville");
    CHECK(*c.kernel.alpha == 0.5);
    CHECK(c.op.modes == 8);
    CHECK(c.time.steps == 32);
    CHECK(c.line_of("kernel", "alpha") == 4);
    const auto ps = build_problem(c);
    CHECK(ps.grid.n_steps() == 32);
    CHECK(ps.op.n_modes() == 8);
    CHECK(ps.pair.spec().kind() == KernelKind::RiemannLiouville);
}

TEST_CASE("errors name the offending line") {
    std::string bad = kBase;
    bad.replace(bad.find("alpha = 0.5"), 11, "alpha = 1.5");
    CHECK(error_line(bad) == 4);
    CHECK_THROWS_AS(parse("[kernel]\ntype = dirac\nfoo = 1\n[source]\ntype = zero\n"), ConfigError);
    try {
        parse("[kernel]\ntype = dirac\nfoo = 1\n[source]\ntype = zero\n");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("[kernel]\ntype = dirac\n[bogus]\n"), ConfigError);
    CHECK_THROWS_AS(parse("[kernel]\ntype = dirac\ntype = dirac\n[source]\ntype = zero\n"), ConfigError);
    CHECK_THROWS_AS(parse("[kernel]\ntype = dirac\n"), ConfigError);
    CHECK_THROWS_AS(parse(std::string(kBase) + "[time]\n"), ConfigError);
    CHECK_THROWS_AS(parse(std::string(kBase).replace(std::string(kBase).find("steps = 32"), 10, "steps = x")), ConfigError);
    CHECK(error_line("[kernel]\ntype = tempered\nalpha = 0.5\n[source]\ntype = zero\n") > 0);
    CHECK(error_line("[kernel]\ntype = dirac\n[source]\ntype = cubic\n") == 4);
    CHECK(error_line("[kernel]\ntype = dirac\n[source]\ntype = zero\n[time]\nT = -1\n") == 6);
}

TEST_CASE("every kernel and operator type builds") {
    const char* kernels[] = {"type = dirac", "type = riemann_liouville\nalpha = 0.3", "type = distributed_order",
                             "type = tempered\nalpha = 0.5\nmu = 1", "type = bessel\nalpha = 0.4",
                             "type = mittag_leffler\nalpha = 0.3\nbeta = 0.7", "type = multi_term\nalphas = 0.8, 0.4"};
    for (const char* k : kernels) {
        CAPTURE(k);
        CHECK_NOTHROW(build_problem(parse(std::string("[kernel]\n") + k + "\n[source]\ntype = fisher_kpp\n[operator]\nmodes = 4\n")));
    }
    CHECK_NOTHROW(build_problem(parse("[kernel]\ntype = dirac\n[operator]\ntype = fractional_laplacian\ns = 0.5\nmodes = 4\n"
                                      "[source]\ntype = power_fisher\np = 2\nq = 2\n")));
    CHECK_NOTHROW(build_problem(parse("[kernel]\ntype = dirac\n[operator]\ntype = involution\nepsilon = 0.3\nmodes = 4\n"
                                      "[source]\ntype = zero\n[initial]\ntype = bump\nscale = 1.5\n")));
}

TEST_CASE("nodal initial data from a file") {
    const auto dir = std::filesystem::temp_directory_path() / "sonine_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "u0.txt");
        for (int i = 0; i < 16; ++i) f << 0.5 << '\n';
    }
    {
        std::ofstream f(dir / "run.cfg");
        f << "[kernel]\ntype = dirac\n[operator]\nmodes = 4\n[source]\ntype = zero\n[initial]\ntype = nodal_file\npath = u0.txt\n";
    }
    const auto ps = build_problem(load_config(dir / "run.cfg"));
    CHECK(ps.u0.nodal.size() == 16);
    {
        std::ofstream f(dir / "u0.txt");
        f << 0.5 << '\n';
    }
    CHECK_THROWS_AS(build_problem(load_config(dir / "run.cfg")), ConfigError);
    CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
    std::filesystem::remove_all(dir);
}
