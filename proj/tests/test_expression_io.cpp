#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "nullcurve/expression.hpp"
#include "nullcurve/io.hpp"
#include "test_helpers.hpp"

using namespace nullcurve;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir()
    {
        path = std::filesystem::temp_directory_path()
               / ("nullcurve_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("expression grammar")
{
    CHECK(parse_expression("1/x")(2.0) == Catch::Approx(0.5));
    CHECK(parse_expression("sin(x)^2 + cos(x)^2")(0.7) == Catch::Approx(1.0));
    CHECK(parse_expression("2*x^2")(3.0) == Catch::Approx(18.0));
    CHECK(parse_expression("-x^2")(3.0) == Catch::Approx(-9.0));
    CHECK(parse_expression("x^-1")(4.0) == Catch::Approx(0.25));
    CHECK(parse_expression("(1+x)*(1-x)")(2.0) == Catch::Approx(-3.0));
    CHECK(parse_expression("sqrt(exp(log(x)))")(5.0) == Catch::Approx(std::sqrt(5.0)));
    CHECK(parse_expression("cosh(0.3*x) - sinh(0.3*x)")(1.0) == Catch::Approx(std::exp(-0.3)));
    CHECK(parse_expression(" 0.5 ")(99.0) == Catch::Approx(0.5));
    CHECK(parse_expression("2^3^1")(0.0) == Catch::Approx(8.0));
}

TEST_CASE("expression errors carry positions")
{
    CHECK_THROWS_AS(parse_expression("2+"), Error);
    CHECK_THROWS_AS(parse_expression("sin x"), Error);
    CHECK_THROWS_AS(parse_expression("foo(x)"), Error);
    CHECK_THROWS_AS(parse_expression(")"), Error);
    CHECK_THROWS_AS(parse_expression("1 2"), Error);
    try {
        parse_expression("1 + @");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("position") != std::string::npos);
    }
}

TEST_CASE("curve csv round trip is bit exact")
{
    TempDir dir;
    std::mt19937 gen(67);
    std::vector<double> t;
    std::vector<Vec4> x;
    for (int i = 0; i < 12; ++i) {
        t.push_back(i + testutil::rnd(gen, 0.0, 0.5));
        x.push_back(testutil::random_vec(gen, -1e3, 1e3) * (i == 5 ? 1e-150 : 1.0));
    }
    const std::string path = dir.file("curve.csv");
    write_curve_csv(path, t, x);
    const SampledCurve back = read_curve_csv(path);
    REQUIRE(back.t.size() == t.size());
    for (size_t i = 0; i < t.size(); ++i) {
        CHECK(back.t[i] == t[i]);
        for (int k = 0; k < 4; ++k)
            CHECK(back.x[i][k] == x[i][k]);
    }
}

TEST_CASE("curve csv errors carry line numbers")
{
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    {
        std::ofstream out(path);
        out << "t,x0,x1,x2,x3\n";
        for (int i = 0; i < 9; ++i)
            out << i << ",0,0,0,0\n";
        out << "9,0,zzz,0,0\n";
    }
    try {
        read_curve_csv(path);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("line 11") != std::string::npos);
    }

    const std::string short_path = dir.file("short.csv");
    {
        std::ofstream out(short_path);
        out << "t,x0,x1,x2,x3\n0,0,0,0,0\n";
    }
    CHECK_THROWS_AS(read_curve_csv(short_path), Error);

    const std::string hdr_path = dir.file("hdr.csv");
    {
        std::ofstream out(hdr_path);
        out << "time,x,y,z,w\n";
    }
    CHECK_THROWS_AS(read_curve_csv(hdr_path), Error);

    CHECK_THROWS_AS(read_curve_csv(dir.file("missing.csv")), Error);
}

TEST_CASE("signature json round trip")
{
    TempDir dir;
    ShapeSignature sig;
    sig.sigma = {0.0, 0.5, 1.0, 1.5};
    sig.kappa_tilde = {0.1, 0.2, 1.0 / 3.0, 0.4};
    sig.tau_tilde = {-0.3, 0.0, 0.25, 1e-17};
    const std::string path = dir.file("sig.json");
    write_signature_json(path, sig);
    const ShapeSignature back = read_signature_json(path);
    REQUIRE(back.sigma.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        CHECK(back.sigma[i] == sig.sigma[i]);
        CHECK(back.kappa_tilde[i] == sig.kappa_tilde[i]);
        CHECK(back.tau_tilde[i] == sig.tau_tilde[i]);
    }
}

TEST_CASE("signature json validation")
{
    TempDir dir;
    const std::string path = dir.file("sig.json");
    {
        std::ofstream out(path);
        out << R"({"sigma": [0, 0], "kappa_tilde": [1, 2], "tau_tilde": [3, 4]})";
    }
    CHECK_THROWS_AS(read_signature_json(path), Error);
    {
        std::ofstream out(path);
        out << R"({"sigma": [0, 1], "kappa_tilde": [1], "tau_tilde": [3, 4]})";
    }
    CHECK_THROWS_AS(read_signature_json(path), Error);
    {
        std::ofstream out(path);
        out << "not json";
    }
    CHECK_THROWS_AS(read_signature_json(path), Error);
}

TEST_CASE("seventeen digit formatting round trips doubles")
{
    std::mt19937 gen(71);
    for (int i = 0; i < 200; ++i) {
        const double v = testutil::rnd(gen, -1.0, 1.0) * std::pow(10.0, testutil::rnd(gen, -30, 30));
        CHECK(std::stod(format_double(v)) == v);
    }
}
