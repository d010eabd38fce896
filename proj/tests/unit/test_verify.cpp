#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sonine/verify.hpp"

using namespace sonine::verify;

TEST_CASE("line fit") {
    const auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(f.n == 4);
    CHECK(fit_line({0, 1, 2}, {0, 1, 0}).r2 == doctest::Approx(0.0));
}

TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 6);
    CHECK(is_suite("sonine"));
    CHECK(is_suite("blowup"));
    CHECK_FALSE(is_suite("everything"));
    CHECK_THROWS(run_suite("everything", {}));
}

TEST_CASE("identity suite passes and is deterministic across job counts") {
    Options one;
    one.jobs = 1;
    Options many = one;
    many.jobs = 3;
    auto a = run_suite("sonine", one);
    auto b = run_suite("sonine", many);
    CHECK(a.pass());
    CHECK(a.failed() == 0);
    CHECK(summary_json(a) == summary_json(b));
    for (const auto& c : a.cases) {
        CAPTURE(c.name);
        CHECK(c.pass);
        CHECK(c.digest.size() == 16);
        CHECK_FALSE(c.claim.empty());
    }
    CHECK(a.find("no-such-case") == nullptr);
    const auto json = summary_json(a);
    CHECK(json.find("\"schema_version\": 1") != std::string::npos);
    CHECK(json.find("\"suite\": \"sonine\"") != std::string::npos);
}

TEST_CASE("artifacts are written per case") {
    const auto dir = std::filesystem::temp_directory_path() / "sonine_verify_test";
    std::filesystem::remove_all(dir);
    Options opt;
    opt.out_dir = dir;
    opt.jobs = 2;
    opt.convergence.steps = {64, 128, 256};
    const auto r = run_suite("convergence", opt);
    CHECK(std::filesystem::exists(dir / "convergence" / "summary.json"));
    for (const auto& c : r.cases)
        for (const auto& [stem, body] : c.files) CHECK(std::filesystem::exists(dir / "convergence" / (stem + ".csv")));
    write_aggregate({r}, dir);
    std::ifstream in(dir / "summary.json");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("convergence") != std::string::npos);
    std::filesystem::remove_all(dir);
}
