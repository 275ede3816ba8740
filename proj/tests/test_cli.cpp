#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nullcurve/catalog.hpp"
#include "nullcurve/io.hpp"
#include "test_helpers.hpp"

using namespace nullcurve;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

struct CliFixture {
    std::filesystem::path dir;

    CliFixture()
    {
        dir = std::filesystem::temp_directory_path()
              / ("nullcurve_cli_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(dir);
    }
    ~CliFixture() { std::filesystem::remove_all(dir); }

    std::string file(const std::string& name) const { return (dir / name).string(); }

    CliRun run(const std::string& args) const
    {
        const std::string out_path = file("stdout.txt");
        const std::string err_path = file("stderr.txt");
        const std::string cmd = std::string(NULLCURVE_CLI_PATH) + " " + args + " >" + out_path
                                + " 2>" + err_path;
        const int status = std::system(cmd.c_str());
        auto slurp = [](const std::string& p) {
            std::ifstream in(p);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        return {WEXITSTATUS(status), slurp(out_path), slurp(err_path)};
    }
};

} // namespace

TEST_CASE("generate and analyze a basic helix")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string sig = cli.file("helix.json");
    CHECK(cli.run("generate --kind helix --kappa 0 --tau 1 --range 0:2 --step 1e-3 --out "
                  + curve).exit_code == 0);
    CHECK(cli.run("analyze " + curve + " --out " + sig).exit_code == 0);

    const ShapeSignature s = read_signature_json(sig);
    const size_t n = s.sigma.size();
    double worst_k = 0.0, worst_t = 0.0, edge_k = 0.0, edge_t = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const bool edge = i < n / 20 || i >= n - n / 20;
        (edge ? edge_k : worst_k) = std::max(edge ? edge_k : worst_k, std::abs(s.kappa_tilde[i]));
        (edge ? edge_t : worst_t) = std::max(edge ? edge_t : worst_t, std::abs(s.tau_tilde[i]));
    }
    CHECK(worst_k <= 1e-6);
    CHECK(worst_t <= 1e-6);
    CHECK(edge_k <= 1e-4);
    CHECK(edge_t <= 1e-4);
}

TEST_CASE("analyze writes the profile table")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string sig = cli.file("helix.json");
    const std::string prof = cli.file("profile.csv");
    cli.run("generate --kind helix --kappa 1 --tau 2 --range 0:2 --step 1e-3 --out " + curve);
    CHECK(cli.run("analyze " + curve + " --out " + sig + " --profile-out " + prof).exit_code == 0);

    std::ifstream in(prof);
    std::string header;
    std::getline(in, header);
    CHECK(header == "s,sigma,kappa,tau_mag");
    std::string row;
    std::getline(in, row); // skip the edge node, check an interior one
    for (int i = 0; i < 400; ++i)
        std::getline(in, row);
    std::stringstream ss(row);
    std::string field;
    std::vector<double> vals;
    while (std::getline(ss, field, ','))
        vals.push_back(std::stod(field));
    REQUIRE(vals.size() == 4);
    CHECK(vals[2] == Catch::Approx(1.0).margin(1e-5));
    CHECK(vals[3] == Catch::Approx(2.0).margin(1e-5));
}

TEST_CASE("third family with a = 0 produces the first family byte for byte")
{
    CliFixture cli;
    const std::string f1 = cli.file("case1.csv");
    const std::string f3 = cli.file("case3.csv");
    CHECK(cli.run("generate --kind case1 --c 1 --range 0:2 --step 1e-2 --out " + f1).exit_code == 0);
    CHECK(cli.run("generate --kind case3 --a 0 --c 1 --range 0:2 --step 1e-2 --out " + f3).exit_code == 0);
    std::ifstream a(f1), b(f3);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("identity transform reproduces the file")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string out = cli.file("same.csv");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:2 --step 1e-2 --out " + curve);
    CHECK(cli.run("transform " + curve + " --out " + out).exit_code == 0);
    std::ifstream a(curve), b(out);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("transform then match recovers the scale")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string moved = cli.file("moved.csv");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:3 --step 1e-3 --out " + curve);
    CHECK(cli.run("transform " + curve
                  + " --mu 4 --lambda 1.2 --epsilon 0.3 --zeta -0.2 --theta 0.9"
                    " --b 1,0,-2,0.5 --out " + moved).exit_code == 0);

    const CliRun m = cli.run("match " + curve + " " + moved);
    CHECK(m.exit_code == 0);
    const auto verdict = nlohmann::json::parse(m.out);
    CHECK(verdict.at("similar").get<bool>());
    CHECK(verdict.at("mu").get<double>() == Catch::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("a file matches itself with unit scale")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string verdict_path = cli.file("verdict.json");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:3 --step 1e-3 --out " + curve);
    const CliRun m = cli.run("match " + curve + " " + curve + " --json-out " + verdict_path);
    CHECK(m.exit_code == 0);
    const auto verdict = nlohmann::json::parse(m.out);
    CHECK(verdict.at("mu").get<double>() == Catch::Approx(1.0).margin(1e-6));
    std::ifstream saved(verdict_path);
    CHECK(saved.good());
}

TEST_CASE("helices with different shape ratios do not match")
{
    CliFixture cli;
    const std::string a = cli.file("a.csv");
    const std::string b = cli.file("b.csv");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:3 --step 1e-3 --out " + a);
    cli.run("generate --kind helix --kappa 2 --tau 1 --range 0:3 --step 1e-3 --out " + b);
    const CliRun m = cli.run("match " + a + " " + b);
    CHECK(m.exit_code == 1);
    const auto verdict = nlohmann::json::parse(m.out);
    CHECK_FALSE(verdict.at("similar").get<bool>());
    CHECK(verdict.at("mu").is_null());
}

TEST_CASE("two transforms compose into one")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:2 --step 1e-2 --out " + curve);

    const PSimilarity f1(2.0, NullRotationParams(1.4, 0.2, -0.3, 0.8), Vec4(1, 0, 2, -1));
    const PSimilarity f2(0.5, NullRotationParams(0.7, -0.1, 0.4, 2.1), Vec4(0, 3, -2, 1));
    const PSimilarity both = compose_similarity(f2, f1); // file sees f1 first

    auto flags = [](const PSimilarity& f) {
        return " --mu " + format_double(f.mu) + " --lambda " + format_double(f.rotation.lambda)
             + " --epsilon " + format_double(f.rotation.epsilon) + " --zeta "
             + format_double(f.rotation.zeta) + " --theta " + format_double(f.rotation.theta)
             + " --b " + format_double(f.translation[0]) + "," + format_double(f.translation[1])
             + "," + format_double(f.translation[2]) + "," + format_double(f.translation[3]);
    };
    const std::string step1 = cli.file("step1.csv");
    const std::string step2 = cli.file("step2.csv");
    const std::string once = cli.file("once.csv");
    REQUIRE(cli.run("transform " + curve + flags(f1) + " --out " + step1).exit_code == 0);
    REQUIRE(cli.run("transform " + step1 + flags(f2) + " --out " + step2).exit_code == 0);
    REQUIRE(cli.run("transform " + curve + flags(both) + " --out " + once).exit_code == 0);

    const SampledCurve a = read_curve_csv(step2);
    const SampledCurve b = read_curve_csv(once);
    double worst = 0.0;
    for (size_t i = 0; i < a.x.size(); ++i)
        worst = std::max(worst, testutil::max_component_diff(a.x[i], b.x[i]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("the nullity tolerance flag is honored")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:2 --step 1e-3 --out " + curve);
    // finite differencing leaves ~1e-10 relative nullity residue, so a strict
    // tolerance rejects what the default accepts
    CHECK(cli.run("analyze " + curve + " --out " + cli.file("a.json")).exit_code == 0);
    const CliRun strict = cli.run("analyze " + curve + " --eps 1e-13 --out " + cli.file("b.json"));
    CHECK(strict.exit_code == 2);
    CHECK(strict.err.find("ERROR NotNullCurve") != std::string::npos);
}

TEST_CASE("a timelike curve is rejected with the documented error line")
{
    CliFixture cli;
    const std::string bad = cli.file("timelike.csv");
    {
        std::vector<double> t;
        std::vector<Vec4> x;
        for (int i = 0; i < 30; ++i) {
            t.push_back(0.1 * i);
            x.push_back(Vec4(0.2 * i, 0.1 * i, std::sin(0.1 * i), 0.0));
        }
        write_curve_csv(bad, t, x);
    }
    const CliRun r = cli.run("analyze " + bad + " --out " + cli.file("sig.json"));
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("ERROR NotNullCurve") != std::string::npos);
}

TEST_CASE("reconstruction reproduces the worked example curve")
{
    CliFixture cli;
    const std::string rec = cli.file("rec.csv");
    const CliRun r = cli.run("reconstruct --z1 0 --z2 1/x --frame n8 --sigma0 1 --sigma-end 3"
                             " --step 1e-3 --out " + rec);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("orthonormality_drift") != std::string::npos);

    const SampledCurve got = read_curve_csv(rec);
    const Vec4 base = example_curve(1.0);
    double worst = 0.0;
    for (size_t i = 0; i < got.t.size(); i += 50)
        worst = std::max(worst, testutil::max_component_diff(
                                    got.x[i], example_curve(got.t[i]) - base));
    CHECK(worst <= 1e-6);
}

TEST_CASE("sigma origin flag moves the signature zero")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string sig = cli.file("sig.json");
    cli.run("generate --kind helix --kappa 1 --tau 2 --range 0:2 --step 1e-2 --out " + curve);
    CHECK(cli.run("analyze " + curve + " --sigma-origin 100 --out " + sig).exit_code == 0);
    const ShapeSignature s = read_signature_json(sig);
    REQUIRE(s.sigma.size() > 100);
    CHECK(s.sigma[100] == 0.0);
    CHECK(s.sigma.front() < 0.0);
}

TEST_CASE("an explicit frame file matches the built-in initial frame")
{
    CliFixture cli;
    const std::string frame = cli.file("frame.json");
    {
        std::ofstream out(frame);
        const double r = 1.0 / std::sqrt(2.0);
        auto row = [r](double a, double b, double c, double d) {
            return "[" + format_double(a * r) + "," + format_double(b * r) + ","
                 + format_double(c * r) + "," + format_double(d * r) + "]";
        };
        out << "{\"L\": " << row(1, 0, 1, 0) << ", \"N\": " << row(-1, 0, 1, 0)
            << ", \"W1\": " << row(0, 1, 0, 1) << ", \"W2\": " << row(0, -1, 0, 1) << "}";
    }
    const std::string a = cli.file("a.csv");
    const std::string b = cli.file("b.csv");
    CHECK(cli.run("reconstruct --z1 0.2 --z2 0 --frame n8 --sigma0 0 --sigma-end 1"
                  " --step 1e-2 --project-every 50 --out " + a).exit_code == 0);
    CHECK(cli.run("reconstruct --z1 0.2 --z2 0 --frame " + frame + " --sigma0 0 --sigma-end 1"
                  " --step 1e-2 --project-every 50 --out " + b).exit_code == 0);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("flat reconstruction gives the first self-similar family")
{
    CliFixture cli;
    const std::string rec = cli.file("rec.csv");
    CHECK(cli.run("reconstruct --z1 0 --z2 0 --frame n8 --sigma0 0 --sigma-end 2 --step 1e-3"
                  " --out " + rec).exit_code == 0);
    const SampledCurve got = read_curve_csv(rec);
    const CatalogParams p = CatalogParams::self_similar(0, 0, 1.0);
    const Vec4 base = self_similar_case(1, p, 0.0);
    double worst = 0.0;
    for (size_t i = 0; i < got.t.size(); i += 100)
        worst = std::max(worst, testutil::max_component_diff(
                                    got.x[i], self_similar_case(1, p, got.t[i]) - base));
    CHECK(worst <= 1e-9);
}

TEST_CASE("pipeline closure: generate, analyze, reconstruct, analyze")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    const std::string sig1 = cli.file("sig1.json");
    const std::string rec = cli.file("rec.csv");
    const std::string sig2 = cli.file("sig2.json");

    REQUIRE(cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:3 --step 1e-3 --out "
                    + curve).exit_code == 0);
    REQUIRE(cli.run("analyze " + curve + " --out " + sig1).exit_code == 0);

    // Condition the tabulated signature before feeding it back: drop the edge
    // zones (off-center wide-stencil estimates), thin the grid so estimation
    // jitter cannot masquerade as curvature slope, and rebase sigma at the
    // first kept node (the origin is a free constant).
    const ShapeSignature s1 = read_signature_json(sig1);
    ShapeSignature inner;
    const size_t m = s1.sigma.size();
    const double offset = s1.sigma[m / 20];
    for (size_t i = m / 20; i < m - m / 20; i += 100) {
        inner.sigma.push_back(s1.sigma[i] - offset);
        inner.kappa_tilde.push_back(s1.kappa_tilde[i]);
        inner.tau_tilde.push_back(s1.tau_tilde[i]);
    }
    const std::string sig1_inner = cli.file("sig1_inner.json");
    write_signature_json(sig1_inner, inner);

    const double hi = inner.sigma.back() - 1e-6;
    REQUIRE(cli.run("reconstruct --z1 " + sig1_inner + " --z2 " + sig1_inner + " --frame n8"
                    " --sigma0 0 --sigma-end " + format_double(hi)
                    + " --step 1e-3 --out " + rec).exit_code == 0);
    REQUIRE(cli.run("analyze " + rec + " --out " + sig2).exit_code == 0);

    const ShapeSignature s2 = read_signature_json(sig2);
    double worst = 0.0;
    const size_t n = s2.sigma.size();
    for (size_t i = n / 10; i < n - n / 10; ++i) {
        const double sigma1 = s2.sigma[i] + offset; // undo the rebase
        worst = std::max(worst, std::abs(detail::linear_interp(s1.sigma, s1.kappa_tilde,
                                                               sigma1) - s2.kappa_tilde[i]));
        worst = std::max(worst, std::abs(detail::linear_interp(s1.sigma, s1.tau_tilde,
                                                               sigma1) - s2.tau_tilde[i]));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("invalid invocations exit with status 2")
{
    CliFixture cli;
    const std::string curve = cli.file("helix.csv");
    cli.run("generate --kind helix --kappa 1 --tau 1 --range 0:2 --step 1e-2 --out " + curve);

    CHECK(cli.run("transform " + curve + " --mu -1 --out " + cli.file("x.csv")).exit_code == 2);
    CHECK(cli.run("transform " + curve + " --mu 0 --out " + cli.file("x.csv")).exit_code == 2);
    CHECK(cli.run("generate --kind nope --range 0:1 --out " + cli.file("x.csv")).exit_code == 2);
    CHECK(cli.run("generate --kind helix --tau 0 --range 0:1 --step 1e-2 --out "
                  + cli.file("x.csv")).exit_code == 2);
    CHECK(cli.run("analyze " + cli.file("missing.csv") + " --out " + cli.file("x.json"))
              .exit_code == 2);
    CHECK(cli.run("frobnicate").exit_code == 2);
    CHECK(cli.run("reconstruct --z1 0 --z2 1/x --frame n8 --sigma0 -1 --sigma-end 1 --step 1e-2"
                  " --out " + cli.file("x.csv")).exit_code == 2);
}
