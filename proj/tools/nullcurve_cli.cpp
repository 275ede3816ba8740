#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nullcurve/cartan.hpp"
#include "nullcurve/catalog.hpp"
#include "nullcurve/expression.hpp"
#include "nullcurve/io.hpp"
#include "nullcurve/matching.hpp"
#include "nullcurve/reconstruction.hpp"
#include "nullcurve/shape.hpp"
#include "nullcurve/similarity.hpp"

namespace nc = nullcurve;

namespace {

nc::Vec4 parse_vec4(const std::string& text)
{
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ','))
        vals.push_back(std::stod(field));
    if (vals.size() != 4)
        throw nc::Error(nc::ErrorCode::ParseError,
                        "expected four comma-separated numbers, got '" + text + "'");
    return nc::Vec4(vals[0], vals[1], vals[2], vals[3]);
}

std::pair<double, double> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw nc::Error(nc::ErrorCode::ParseError, "expected a range 'lo:hi', got '" + text + "'");
    const double lo = std::stod(text.substr(0, colon));
    const double hi = std::stod(text.substr(colon + 1));
    if (!(lo < hi))
        throw nc::Error(nc::ErrorCode::ParseError, "range must satisfy lo < hi");
    return {lo, hi};
}

std::vector<double> uniform_grid(double lo, double hi, double step)
{
    if (!(step > 0.0))
        throw nc::Error(nc::ErrorCode::InvalidParams, "step must be positive");
    const auto n = static_cast<size_t>(std::ceil((hi - lo) / step - 1e-12));
    std::vector<double> grid(n + 1);
    for (size_t i = 0; i <= n; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    return grid;
}

/// --z1/--z2 arguments: a signature file (interpolated) or an expression in x.
struct CurvatureArg {
    std::function<double(double)> fn;
    std::optional<std::pair<double, double>> domain; // present for tabulated inputs
};

CurvatureArg load_curvature(const std::string& arg, bool want_kappa)
{
    if (std::filesystem::exists(arg)) {
        const nc::ShapeSignature sig = nc::read_signature_json(arg);
        const nc::ShapeCurvatureSpec spec = nc::ShapeCurvatureSpec::from_signature(sig);
        return {want_kappa ? spec.z1 : spec.z2,
                std::make_pair(spec.sigma_min, spec.sigma_max)};
    }
    return {nc::parse_expression(arg), std::nullopt};
}

nc::Mat4 load_frame(const std::string& arg, double sigma0,
                    const std::function<double(double)>& z1, double step)
{
    if (arg == "n8") {
        nc::Mat4 k = nc::reference_frame().as_matrix();
        if (sigma0 != 0.0) {
            k = nc::transport_frame(z1, k, 0.0, sigma0, std::min(step, 1e-4));
            k = nc::lorentz_reproject(k);
        }
        return k;
    }
    nlohmann::json j;
    if (std::filesystem::exists(arg)) {
        std::ifstream in(arg);
        in >> j;
    } else {
        try {
            j = nlohmann::json::parse(arg);
        } catch (const std::exception& e) {
            throw nc::Error(nc::ErrorCode::ParseError,
                            std::string("frame must be 'n8', a JSON object or a JSON file: ")
                            + e.what());
        }
    }
    auto vec = [&](const char* name) {
        const auto v = j.at(name).get<std::vector<double>>();
        if (v.size() != 4)
            throw nc::Error(nc::ErrorCode::ParseError,
                            std::string("frame row ") + name + " must have 4 entries");
        return nc::Vec4(v[0], v[1], v[2], v[3]);
    };
    return nc::Mat4::from_rows(vec("L"), vec("N"), vec("W1"), vec("W2"));
}

std::string verdict_json(const nc::MatchVerdict& v)
{
    std::string out = "{\"similar\": ";
    out += v.similar ? "true" : "false";
    out += ", \"sigma_shift\": " + nc::format_double(v.sigma_shift);
    out += ", \"residual\": " + nc::format_double(v.residual);
    out += ", \"mu\": ";
    out += v.recovered ? nc::format_double(v.recovered->mu) : "null";
    out += "}";
    return out;
}

int run_analyze(const std::string& input, double eps, size_t origin, const std::string& out,
                const std::string& profile_out)
{
    const nc::CurveSource curve = nc::CurveSource::sampled(nc::read_curve_csv(input));
    nc::AnalysisOptions options;
    options.nullity_rel_tol = eps;
    const nc::CartanProfile profile = nc::build_profile(curve, 0, options);
    const nc::ShapeSignature sig =
        nc::de_sitter_reparam(profile, origin, nc::kTabulatedGradientBaseline);
    nc::write_signature_json(out, sig);
    if (!profile_out.empty()) {
        std::ofstream pf(profile_out);
        if (!pf)
            throw nc::Error(nc::ErrorCode::IoError, "cannot write '" + profile_out + "'");
        pf << "s,sigma,kappa,tau_mag\n";
        for (size_t i = 0; i < profile.s.size(); ++i)
            pf << nc::format_double(profile.s[i]) << ',' << nc::format_double(sig.sigma[i])
               << ',' << nc::format_double(profile.kappa[i]) << ','
               << nc::format_double(profile.tau_mag[i]) << '\n';
    }
    return 0;
}

int run_reconstruct(const std::string& z1_arg, const std::string& z2_arg,
                    const std::string& frame_arg, const std::string& x0_arg, double sigma0,
                    double sigma_end, double step, double tau0, int project_every,
                    const std::string& out)
{
    const CurvatureArg z1 = load_curvature(z1_arg, true);
    const CurvatureArg z2 = load_curvature(z2_arg, false);

    // domain: the integration window, narrowed by any tabulated input
    double lo = std::min(sigma0, sigma_end), hi = std::max(sigma0, sigma_end);
    for (const auto& arg : {z1, z2})
        if (arg.domain) {
            lo = std::max(lo, arg.domain->first);
            hi = std::min(hi, arg.domain->second);
        }
    const nc::ShapeCurvatureSpec spec{z1.fn, z2.fn, lo, hi};

    const nc::Mat4 k0 = load_frame(frame_arg, sigma0, z1.fn, step);
    nc::ReconstructionOptions options;
    options.tau0 = tau0;
    options.project_every = project_every;
    const nc::ReconstructionResult r =
        nc::reconstruct_curve(spec, k0, parse_vec4(x0_arg), sigma0, sigma_end, step, options);
    nc::write_curve_csv(out, r.sigma, r.curve);
    std::cout << "orthonormality_drift " << nc::format_double(r.orthonormality_drift) << "\n";
    return 0;
}

int run_generate(const std::string& kind, double kappa, double tau, double a, double b, double c,
                 const std::string& range, double step, const std::string& out)
{
    const auto [lo, hi] = parse_range(range);
    const std::vector<double> grid = uniform_grid(lo, hi, step);

    nc::CurveSource curve = [&] {
        if (kind == "helix")
            return nc::helix_curve(kappa, tau, lo, hi);
        if (kind == "example")
            return nc::example_curve_source(lo, hi);
        if (kind == "case1" || kind == "case2" || kind == "case3" || kind == "case4") {
            const int which = kind[4] - '0';
            return nc::case_curve(which, nc::CatalogParams::self_similar(a, b, c), lo, hi);
        }
        throw nc::Error(nc::ErrorCode::InvalidParams, "unknown kind '" + kind + "'");
    }();

    std::vector<nc::Vec4> xs(grid.size());
    for (size_t i = 0; i < grid.size(); ++i)
        xs[i] = curve.derivative(grid[i], 0);
    nc::write_curve_csv(out, grid, xs);
    return 0;
}

int run_match(const std::string& input_a, const std::string& input_b, double tol,
              const std::string& json_out)
{
    const nc::CurveSource a = nc::CurveSource::sampled(nc::read_curve_csv(input_a));
    const nc::CurveSource b = nc::CurveSource::sampled(nc::read_curve_csv(input_b));
    const nc::MatchVerdict v = nc::decide_similar(a, b, tol);
    const std::string json = verdict_json(v);
    std::cout << json << "\n";
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out)
            throw nc::Error(nc::ErrorCode::IoError, "cannot write '" + json_out + "'");
        out << json << "\n";
    }
    return v.similar ? 0 : 1;
}

int run_transform(const std::string& input, double mu, double lambda, double epsilon, double zeta,
                  double theta, const std::string& b_arg, const std::string& out)
{
    if (!(mu > 0.0))
        throw nc::Error(nc::ErrorCode::InvalidParams, "curve transforms require mu > 0");
    const nc::PSimilarity f(mu, nc::NullRotationParams(lambda, epsilon, zeta, theta),
                            parse_vec4(b_arg));
    const nc::SampledCurve curve = nc::read_curve_csv(input);
    const nc::Mat4 lin = nc::linear_matrix(f);
    std::vector<nc::Vec4> xs(curve.x.size());
    for (size_t i = 0; i < curve.x.size(); ++i)
        xs[i] = lin * curve.x[i] + f.translation;
    nc::write_curve_csv(out, curve.t, xs);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Similarity geometry of null Cartan curves in Minkowski space-time"};
    app.require_subcommand(1);

    // analyze
    std::string an_input, an_out, an_profile_out;
    double an_eps = 1e-6;
    size_t an_origin = 0;
    auto* analyze = app.add_subcommand("analyze", "Compute the shape signature of a sampled curve");
    analyze->add_option("input", an_input, "curve CSV (t,x0,x1,x2,x3)")->required();
    analyze->add_option("--eps", an_eps, "relative nullity tolerance");
    analyze->add_option("--sigma-origin", an_origin, "sample index where sigma = 0");
    analyze->add_option("--out", an_out, "output signature JSON")->required();
    analyze->add_option("--profile-out", an_profile_out, "optional profile CSV (s,sigma,kappa,tau_mag)");

    // reconstruct
    std::string rc_z1 = "0", rc_z2 = "0", rc_frame = "n8", rc_x0 = "0,0,0,0", rc_out;
    double rc_sigma0 = 0.0, rc_sigma_end = 1.0, rc_step = 1e-3, rc_tau0 = 1.0;
    int rc_project = 0;
    auto* reconstruct = app.add_subcommand("reconstruct",
                                           "Integrate a curve from shape curvature functions");
    reconstruct->add_option("--z1", rc_z1, "kappa_tilde: expression in x or a signature file");
    reconstruct->add_option("--z2", rc_z2, "tau_tilde: expression in x or a signature file");
    reconstruct->add_option("--frame", rc_frame, "initial frame: n8, JSON object, or JSON file");
    reconstruct->add_option("--x0", rc_x0, "initial point 'a,b,c,d'");
    reconstruct->add_option("--sigma0", rc_sigma0, "initial sigma");
    reconstruct->add_option("--sigma-end", rc_sigma_end, "final sigma")->required();
    reconstruct->add_option("--step", rc_step, "integration step");
    reconstruct->add_option("--tau0", rc_tau0, "torsion at sigma0");
    reconstruct->add_option("--project-every", rc_project,
                            "re-orthonormalize the frame every k steps (0 = off)");
    reconstruct->add_option("--out", rc_out, "output curve CSV")->required();

    // generate
    std::string gn_kind, gn_range, gn_out;
    double gn_kappa = 0.0, gn_tau = 1.0, gn_a = 0.0, gn_b = 0.0, gn_c = 1.0, gn_step = 1e-3;
    auto* generate = app.add_subcommand("generate", "Sample a closed-form curve");
    generate->add_option("--kind", gn_kind, "helix|case1|case2|case3|case4|example")->required();
    generate->add_option("--kappa", gn_kappa, "helix curvature");
    generate->add_option("--tau", gn_tau, "helix torsion");
    generate->add_option("--a", gn_a, "constant kappa_tilde");
    generate->add_option("--b", gn_b, "constant tau_tilde");
    generate->add_option("--c", gn_c, "constant torsion");
    generate->add_option("--range", gn_range, "parameter range 'lo:hi'")->required();
    generate->add_option("--step", gn_step, "sample spacing");
    generate->add_option("--out", gn_out, "output curve CSV")->required();

    // match
    std::string mt_a, mt_b, mt_json_out;
    double mt_tol = 1e-3;
    auto* match = app.add_subcommand("match", "Decide p-similarity of two curve files");
    match->add_option("inputA", mt_a, "first curve CSV")->required();
    match->add_option("inputB", mt_b, "second curve CSV")->required();
    match->add_option("--tol", mt_tol, "signature residual tolerance");
    match->add_option("--json-out", mt_json_out, "also write the verdict JSON here");

    // transform
    std::string tf_input, tf_b = "0,0,0,0", tf_out;
    double tf_mu = 1.0, tf_lambda = 1.0, tf_epsilon = 0.0, tf_zeta = 0.0, tf_theta = 0.0;
    auto* transform = app.add_subcommand("transform", "Apply a p-similarity to a curve file");
    transform->add_option("input", tf_input, "curve CSV")->required();
    transform->add_option("--mu", tf_mu, "scale (must be positive)");
    transform->add_option("--lambda", tf_lambda, "null rotation lambda");
    transform->add_option("--epsilon", tf_epsilon, "null rotation epsilon");
    transform->add_option("--zeta", tf_zeta, "null rotation zeta");
    transform->add_option("--theta", tf_theta, "null rotation theta (radians)");
    transform->add_option("--b", tf_b, "translation 'b0,b1,b2,b3'");
    transform->add_option("--out", tf_out, "output curve CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR InvalidParams: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*analyze)
            return run_analyze(an_input, an_eps, an_origin, an_out, an_profile_out);
        if (*reconstruct)
            return run_reconstruct(rc_z1, rc_z2, rc_frame, rc_x0, rc_sigma0, rc_sigma_end,
                                   rc_step, rc_tau0, rc_project, rc_out);
        if (*generate)
            return run_generate(gn_kind, gn_kappa, gn_tau, gn_a, gn_b, gn_c, gn_range, gn_step,
                                gn_out);
        if (*match)
            return run_match(mt_a, mt_b, mt_tol, mt_json_out);
        if (*transform)
            return run_transform(tf_input, tf_mu, tf_lambda, tf_epsilon, tf_zeta, tf_theta,
                                 tf_b, tf_out);
    } catch (const nc::Error& e) {
        std::cerr << "ERROR " << nc::error_code_name(e.code()) << ": " << e.detail() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ERROR Internal: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
