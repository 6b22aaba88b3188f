#include "spectre/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectre/errors.hpp"
#include "spectre/fourier_transfer.hpp"
#include "spectre/interval_transfer.hpp"
#include "spectre/inverse_problem.hpp"
#include "spectre/spectral.hpp"

namespace spectre::cli {

namespace {

using nlohmann::ordered_json;

constexpr int kIntervalLeading = 8;
constexpr int kIntervalDepth = 24;

ordered_json to_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

std::string csv_lambda_label(const RunConfig& c) {
    return format_complex(cplx{c.lambda_re, c.lambda_im});
}

struct FamilyTag {
    EigenFamily family;
    int power;
};

std::vector<FamilyTag> expanded_tags(const SpectrumPrediction& prediction) {
    std::vector<FamilyTag> tags;
    for (const auto& e : prediction.entries) tags.insert(tags.end(), static_cast<std::size_t>(e.multiplicity), {e.family, e.power});
    return tags;
}

struct ReportRow {
    cplx value;
    bool paired;
    cplx predicted;
    std::string family;
    int power;
    double error;
};

// one row per computed value, in the order of report.computed
std::vector<ReportRow> report_rows(const SpectrumReport& rep) {
    const auto tags = expanded_tags(rep.prediction);
    std::vector<ReportRow> rows;
    for (int i = 0; i < static_cast<int>(rep.computed.size()); ++i) {
        ReportRow row{rep.computed[i], false, cplx{}, "none", -1, std::abs(rep.computed[i])};
        if (const auto* pr = rep.pair_of_computed(i)) {
            row.paired = true;
            row.error = pr->error;
            if (pr->predicted < 0) {
                row.family = "zero";
                row.power = 0;
            } else {
                row.predicted = rep.predicted_values[pr->predicted];
                row.family = std::string(to_string(tags[pr->predicted].family));
                row.power = tags[pr->predicted].power;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void rows_to_csv(std::ostringstream& os, std::string_view method, const SpectrumReport& rep) {
    int index = 0;
    for (const auto& r : report_rows(rep)) {
        os << method << ',' << index++ << ',' << format_complex(r.value) << ',' << format_real(std::abs(r.value)) << ',';
        if (r.paired) os << format_complex(r.predicted);
        else os << ',';
        os << ',' << r.family << ',' << r.power << ',' << format_real(r.error) << '\n';
    }
}

ordered_json rows_to_json(const SpectrumReport& rep) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : report_rows(rep)) {
        arr.push_back({{"value", to_json(r.value)},
                       {"modulus", std::abs(r.value)},
                       {"predicted", r.paired ? to_json(r.predicted) : ordered_json(nullptr)},
                       {"family", r.family},
                       {"power", r.power},
                       {"error", r.error}});
    }
    return arr;
}

ordered_json config_json(const RunConfig& c) {
    return {{"lambda", to_json(cplx{c.lambda_re, c.lambda_im})}, {"N", c.N}, {"M", c.M}, {"tol", c.tol}};
}

std::string pass_word(bool pass) { return pass ? "pass" : "FAIL"; }

std::vector<TrigPolynomial> random_trig(std::mt19937_64& rng, int count, int lowest, int highest) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<TrigPolynomial> out;
    for (int i = 0; i < count; ++i) {
        TrigPolynomial p{lowest, {}};
        for (int k = lowest; k <= highest; ++k) p.coeffs.emplace_back(u(rng), u(rng));
        out.push_back(std::move(p));
    }
    return out;
}

double nearest_modulus(const std::vector<cplx>& values, cplx target) {
    double best = std::numeric_limits<double>::infinity();
    cplx hit{};
    for (const cplx v : values) {
        if (std::abs(v - target) < best) {
            best = std::abs(v - target);
            hit = v;
        }
    }
    return std::abs(hit);
}

}  // namespace

void validate(const RunConfig& c) {
    if (!std::isfinite(c.lambda_re) || !std::isfinite(c.lambda_im) ||
        !(c.lambda_re * c.lambda_re + c.lambda_im * c.lambda_im < 1.0)) {
        throw DomainError("|λ| must be < 1 (got |λ| = " + format_real(std::hypot(c.lambda_re, c.lambda_im)) + ")");
    }
    if (c.N < 1 || c.N > 64) throw DomainError("N must be in [1, 64] (got " + std::to_string(c.N) + ")");
    if (c.M < 8 || c.M > 128) throw DomainError("M must be in [8, 128] (got " + std::to_string(c.M) + ")");
    if (!(c.tol >= 1e-14 && c.tol <= 1e-3)) throw DomainError("tol must be in [1e-14, 1e-3] (got " + format_real(c.tol) + ")");
}

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value == 0.0 ? 0.0 : value);
    return buf;
}

std::string format_complex(cplx value) { return format_real(value.real()) + "," + format_real(value.imag()); }

void write_atomic(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw DomainError("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw DomainError("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, target);
}

CommandResult cmd_matrix(const RunConfig& c) {
    validate(c);
    const auto matrix = assemble(c.param(), c.N, AssemblyMethod::quadrature, QuadratureSpec::from_environment());
    CommandResult res;
    std::ostringstream os;
    if (c.format == Format::csv) {
        os << "n,l,re,im\n";
        for (int n = -c.N; n <= c.N; ++n) {
            for (int l = -c.N; l <= c.N; ++l) os << n << ',' << l << ',' << format_complex(matrix.at(n, l)) << '\n';
        }
        res.payload = os.str();
    } else {
        ordered_json rows = ordered_json::array();
        ordered_json diag = ordered_json::array();
        for (int n = -c.N; n <= c.N; ++n) {
            ordered_json row = ordered_json::array();
            for (int l = -c.N; l <= c.N; ++l) row.push_back(to_json(matrix.at(n, l)));
            rows.push_back(std::move(row));
            diag.push_back(to_json(matrix.at(n, n)));
        }
        ordered_json doc = config_json(c);
        doc.erase("M");
        doc["method"] = std::string(to_string(matrix.method()));
        doc["indices"] = {-c.N, c.N};
        doc["entries"] = std::move(rows);
        doc["diagonal"] = std::move(diag);
        res.payload = doc.dump(2) + "\n";
    }
    res.summary = "matrix lambda=(" + csv_lambda_label(c) + ") N=" + std::to_string(c.N) + ": " +
                  std::to_string(matrix.size()) + "x" + std::to_string(matrix.size()) + " written";
    return res;
}

CommandResult cmd_spectrum(const RunConfig& c) {
    validate(c);
    const auto param = c.param();
    const auto matrix = assemble(param, c.N, AssemblyMethod::quadrature, QuadratureSpec::from_environment());
    const auto prediction = predicted_spectrum(param, c.N);

    auto tri = eigenvalues_triangular(matrix);
    auto dense = eigenvalues_dense_extended(param, c.N, QuadratureSpec::from_environment());
    sort_by_modulus(tri);
    sort_by_modulus(dense);
    const auto rep_tri = match_spectra(tri, prediction, c.tol);
    const auto rep_dense = match_spectra(dense, prediction, c.tol);
    const bool pass = rep_tri.passed() && rep_dense.passed();

    CommandResult res;
    res.exit_code = pass ? kSuccess : kVerificationFailure;
    if (c.format == Format::csv) {
        std::ostringstream os;
        os << "method,index,re,im,modulus,predicted_re,predicted_im,family,power,error\n";
        rows_to_csv(os, "triangular", rep_tri);
        rows_to_csv(os, "dense", rep_dense);
        res.payload = os.str();
    } else {
        ordered_json doc = config_json(c);
        doc.erase("M");
        doc["pass"] = pass;
        doc["methods"] = ordered_json::array();
        for (const auto* rep : {&rep_tri, &rep_dense}) {
            doc["methods"].push_back({{"method", rep == &rep_tri ? "triangular" : "dense"},
                                      {"max_pair_error", rep->max_pair_error},
                                      {"pass", rep->passed()},
                                      {"unmatched_predicted", rep->unmatched_predicted.size()},
                                      {"unmatched_computed", rep->unmatched_computed.size()},
                                      {"eigenvalues", rows_to_json(*rep)}});
        }
        res.payload = doc.dump(2) + "\n";
    }
    std::ostringstream sum;
    sum.precision(3);
    sum << "spectrum lambda=(" << csv_lambda_label(c) << ") N=" << c.N << ": triangular max error "
        << std::scientific << rep_tri.max_pair_error << ", dense max error " << rep_dense.max_pair_error
        << ", tol " << c.tol << ": " << pass_word(pass);
    res.summary = sum.str();
    return res;
}

CommandResult cmd_interval(const RunConfig& c) {
    validate(c);
    const IntervalMapContext ctx(c.param());
    const auto disc = collocation_matrix(ctx, c.M);
    const auto prediction = interval_spectrum_predicted(ctx, kIntervalDepth);
    const auto rep = match_leading(disc.eigenvalues, prediction, kIntervalLeading, c.tol);
    const auto mayer = mayer_check(ctx, disc.eigenvalues);
    const bool pass = rep.passed();

    CommandResult res;
    res.exit_code = pass ? kSuccess : kVerificationFailure;
    if (c.format == Format::csv) {
        std::ostringstream os;
        os << "method,index,re,im,modulus,predicted_re,predicted_im,family,power,error\n";
        rows_to_csv(os, "collocation", rep);
        res.payload = os.str();
    } else {
        ordered_json doc = config_json(c);
        doc.erase("N");
        doc["T_prime_x0"] = T_deriv_at_fixed_point(ctx);
        doc["leading"] = kIntervalLeading;
        doc["max_pair_error"] = rep.max_pair_error;
        doc["pass"] = pass;
        ordered_json nonreal = ordered_json::array();
        for (const cplx v : mayer.nonreal) nonreal.push_back(to_json(v));
        doc["mayer"] = {{"nonreal_pairs_below", mayer.nonreal_pairs_below},
                        {"modulus_bound", mayer.modulus_bound},
                        {"nonreal_matched", mayer.nonreal_matched},
                        {"fixed_family_error", mayer.fixed_family_error},
                        {"multipliers", mayer.multipliers},
                        {"nonreal", std::move(nonreal)}};
        doc["eigenvalues"] = rows_to_json(rep);
        res.payload = doc.dump(2) + "\n";
    }
    std::ostringstream sum;
    sum.precision(3);
    sum << "interval lambda=(" << csv_lambda_label(c) << ") M=" << c.M << ": top " << kIntervalLeading
        << " max error " << std::scientific << rep.max_pair_error << ", tol " << c.tol;
    if (!rep.unmatched_predicted.empty() || !rep.unmatched_computed.empty()) {
        sum << ", unmatched predicted " << rep.unmatched_predicted.size() << ", unmatched computed "
            << rep.unmatched_computed.size();
    }
    sum << ": " << pass_word(pass);
    if (mayer.nonreal_pairs_below > 0) {
        sum << "\nmayer: " << mayer.nonreal_pairs_below << " non-real conjugate pairs with modulus < "
            << std::defaultfloat << mayer.modulus_bound << " (" << mayer.nonreal_matched
            << " within 1e-7 of lambda^n); fixed-point multipliers " << std::scientific << mayer.multipliers[0] << ", "
            << mayer.multipliers[1] << " are real";
    }
    res.summary = sum.str();
    return res;
}

CommandResult cmd_verify(const RunConfig& c) {
    validate(c);
    const auto param = c.param();
    const auto spec = QuadratureSpec::from_environment();
    ordered_json checks = ordered_json::array();
    std::string first_failure;
    auto record = [&](const std::string& name, double value, double tol, bool pass, ordered_json extra = {}) {
        ordered_json item{{"name", name}, {"value", value}, {"tol", tol}, {"pass", pass}};
        if (!extra.is_null()) item["detail"] = std::move(extra);
        checks.push_back(std::move(item));
        if (!pass && first_failure.empty()) first_failure = name;
    };

    const auto annulus = find_annulus(param);
    record("annulus", annulus.R - annulus.r, 0.0, annulus.r < 1.0 && annulus.R > 1.0,
           {{"r", annulus.r}, {"R", annulus.R}});

    const auto matrix = assemble(param, c.N, AssemblyMethod::quadrature, spec);
    const auto structure = validate_structure(matrix, 1e-12);
    record("structure", *std::max_element(structure.violation.begin(), structure.violation.end()), 1e-12,
           structure.passed());

    std::mt19937_64 rng(20240917);
    double duality = 0.0;
    const auto fs = random_trig(rng, 10, -4, 4);
    const auto gs = random_trig(rng, 10, -4, 4);
    for (std::size_t i = 0; i < fs.size(); ++i) duality = std::max(duality, duality_check(param, fs[i], gs[i], spec));
    record("duality", duality, 1e-10, duality < 1e-10);

    double eig_residual = 0.0;
    const cplx lam = param.lambda();
    std::vector<std::pair<cplx, int>> targets{{1.0, 0}};
    if (lam != cplx{}) {
        if (param.is_real()) {
            targets.insert(targets.end(), {{lam, 0}, {lam, 1}, {lam * lam, 0}, {lam * lam, 1}});
        } else {
            targets.insert(targets.end(), {{lam, 0}, {std::conj(lam), 0}, {lam * lam, 0}, {std::conj(lam * lam), 0}});
        }
    }
    for (const auto& [value, copy] : targets) {
        eig_residual = std::max(eig_residual, eigenfunction(matrix, value, copy).residual);
    }
    record("eigenfunctions", eig_residual, 1e-8, eig_residual < 1e-8);

    const IntervalMapContext ctx(param);
    const auto matching = check_branch_matching(ctx);
    const double matching01 = std::max({matching.order0[0], matching.order0[1], matching.order0[2], matching.order1[0],
                                        matching.order1[1]});
    record("branch_matching", matching01, 1e-10, matching.passed(),
           {{"order2", std::max(matching.order2[0], matching.order2[1])},
            {"inverse_residual", matching.inverse_residual}});

    const auto d0 = dual_functional_check(ctx, Polynomial{{0.0, 1.0}}, 0);
    record("dual_functional_0", d0.residual, d0.tol, d0.passed());
    const auto d1 = dual_functional_check(ctx, Polynomial{{-1.0, 0.0, 1.0}}, 1);
    record("dual_functional_1", d1.residual, d1.tol, d1.passed());

    double intertwine = intertwine_check(ctx, TrigPolynomial{1, {1.0}});
    for (const auto& f : random_trig(rng, 5, -4, 4)) intertwine = std::max(intertwine, intertwine_check(ctx, f));
    record("intertwine", intertwine, 1e-9, intertwine < 1e-9);

    if (param.is_real()) {
        for (const auto& r : verify_inverse_problem(c.lambda_re, 257)) {
            record("inverse_problem." + r.equation, r.max_residual, r.tolerance, r.pass);
        }
    } else {
        checks.push_back({{"name", "inverse_problem"}, {"skipped", "lambda is not real"}, {"pass", true}});
    }

    const bool pass = first_failure.empty();
    ordered_json doc = config_json(c);
    doc.erase("M");
    doc["pass"] = pass;
    doc["first_failure"] = pass ? ordered_json(nullptr) : ordered_json(first_failure);
    doc["checks"] = std::move(checks);

    CommandResult res;
    res.exit_code = pass ? kSuccess : kVerificationFailure;
    res.payload = doc.dump(2) + "\n";
    res.summary = "verify lambda=(" + csv_lambda_label(c) + "): " +
                  (pass ? std::string("all checks pass") : "FAIL, first failing check: " + first_failure);
    return res;
}

std::vector<SweepRow> spectrum_sweep(int M, int points, int n_max) {
    std::vector<SweepRow> rows;
    for (int i = 0; i < points; ++i) {
        const double lambda = -0.99 + 1.98 * i / (points - 1);
        const IntervalMapContext ctx(BlaschkeParam(cplx{lambda, 0.0}));
        const auto disc = collocation_matrix(ctx, M);
        const double q = (lambda + 1.0) / 2.0;
        for (int n = 0; n <= n_max; ++n) {
            const double a = std::pow(lambda, n);
            const double b = std::pow(q, n);
            rows.push_back({lambda, n, std::abs(a), nearest_modulus(disc.eigenvalues, a), std::abs(b),
                            nearest_modulus(disc.eigenvalues, b)});
        }
    }
    return rows;
}

std::vector<cplx> map_graph_parameters() {
    return {cplx{-0.7, 0.0}, cplx{0.4, 0.0}, cplx{-0.3, -std::sqrt(0.4)}, cplx{0.1, std::sqrt(0.15)}};
}

CommandResult cmd_figure_data(const RunConfig& c) {
    validate(c);
    CommandResult res;
    std::ostringstream os;
    if (c.figure == Figure::map_graphs) {
        constexpr int kPoints = 512;
        ordered_json doc = ordered_json::array();
        if (c.format == Format::csv) os << "lambda_re,lambda_im,x,T\n";
        for (const cplx lam : map_graph_parameters()) {
            const IntervalMapContext ctx{BlaschkeParam(lam)};
            ordered_json xs = ordered_json::array();
            ordered_json ts = ordered_json::array();
            for (int j = 0; j < kPoints; ++j) {
                const double x = -1.0 + 2.0 * j / (kPoints - 1);
                const double t = T_eval(ctx, x);
                if (c.format == Format::csv) os << format_complex(lam) << ',' << format_real(x) << ',' << format_real(t) << '\n';
                xs.push_back(x);
                ts.push_back(t);
            }
            doc.push_back({{"lambda", to_json(lam)}, {"x", std::move(xs)}, {"T", std::move(ts)}});
        }
        res.payload = c.format == Format::csv ? os.str() : doc.dump(2) + "\n";
        res.summary = "figure map_graphs: 4 parameters x 512 points";
        return res;
    }

    const auto rows = spectrum_sweep(c.M);
    double worst = 0.0;
    for (const auto& r : rows) {
        if (std::abs(r.lambda) <= 0.9 + 1e-12) {
            worst = std::max({worst, std::abs(r.circle_computed - r.circle_analytic),
                              std::abs(r.fixed_computed - r.fixed_analytic)});
        }
    }
    if (c.format == Format::csv) {
        os << "lambda,n,circle_analytic,circle_computed,fixed_analytic,fixed_computed\n";
        for (const auto& r : rows) {
            os << format_real(r.lambda) << ',' << r.n << ',' << format_real(r.circle_analytic) << ','
               << format_real(r.circle_computed) << ',' << format_real(r.fixed_analytic) << ','
               << format_real(r.fixed_computed) << '\n';
        }
        res.payload = os.str();
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& r : rows) {
            arr.push_back({{"lambda", r.lambda},
                           {"n", r.n},
                           {"circle_analytic", r.circle_analytic},
                           {"circle_computed", r.circle_computed},
                           {"fixed_analytic", r.fixed_analytic},
                           {"fixed_computed", r.fixed_computed}});
        }
        res.payload = ordered_json{{"M", c.M}, {"max_deviation_abs_lambda_le_0_9", worst}, {"rows", std::move(arr)}}.dump(2) + "\n";
    }
    std::ostringstream sum;
    sum.precision(3);
    sum << "figure spectrum_vs_lambda: " << rows.size() << " rows, M=" << c.M
        << ", max computed-vs-analytic deviation for |lambda| <= 0.9: " << std::scientific << worst;
    res.summary = sum.str();
    return res;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transfer-operator spectra of the degree-two Blaschke circle maps and their interval factors", "spectre"};
    app.require_subcommand(1);
    RunConfig config;
    std::vector<double> lambda_cart;
    std::vector<double> lambda_polar;
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
    const std::map<std::string, Figure> figures{{"map_graphs", Figure::map_graphs},
                                                {"spectrum_vs_lambda", Figure::spectrum_vs_lambda}};

    auto add_common = [&](CLI::App* sub) {
        auto* cart = sub->add_option("--lambda", lambda_cart, "lambda as RE IM")->expected(2)->allow_extra_args(false);
        auto* polar = sub->add_option("--lambda-polar", lambda_polar, "lambda as MOD PHASE")->expected(2)->allow_extra_args(false);
        cart->excludes(polar);
        sub->add_option("--n", config.N, "Fourier window N (indices -N..N)");
        sub->add_option("--m", config.M, "number of Chebyshev nodes");
        sub->add_option("--tol", config.tol, "pass/fail tolerance");
        sub->add_option("--out", config.output_path, "output file (default: standard output)");
        sub->add_option("--format", config.format, "csv or json")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    };
    auto* matrix = app.add_subcommand("matrix", "write the Fourier-basis matrix L^(N)");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of L^(N) against the exact spectrum");
    auto* interval = app.add_subcommand("interval", "collocation spectrum of the interval operator");
    auto* verify = app.add_subcommand("verify", "run every verification suite, JSON bundle");
    auto* figure = app.add_subcommand("figure-data", "plot-ready data for the map graphs and spectrum curves");
    for (auto* sub : {matrix, spectrum, interval, verify, figure}) add_common(sub);
    figure->add_option("--figure", config.figure, "map_graphs or spectrum_vs_lambda")
        ->transform(CLI::CheckedTransformer(figures, CLI::ignore_case));

    std::vector<const char*> argv;
    argv.push_back("spectre");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    try {
        if (!lambda_polar.empty()) {
            const auto p = BlaschkeParam::polar(lambda_polar[0], lambda_polar[1]);
            config.lambda_re = p.lambda().real();
            config.lambda_im = p.lambda().imag();
        } else if (!lambda_cart.empty()) {
            config.lambda_re = lambda_cart[0];
            config.lambda_im = lambda_cart[1];
        }
        CommandResult res;
        if (matrix->parsed()) res = cmd_matrix(config);
        else if (spectrum->parsed()) res = cmd_spectrum(config);
        else if (interval->parsed()) res = cmd_interval(config);
        else if (verify->parsed()) res = cmd_verify(config);
        else res = cmd_figure_data(config);

        if (config.output_path.empty()) {
            out << res.payload;
            err << res.summary << '\n';
        } else {
            write_atomic(config.output_path, res.payload);
            out << res.summary << '\n';
        }
        return res.exit_code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const ConvergenceError& e) {
        err << "error: numerical non-convergence: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kVerificationFailure;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace spectre::cli
