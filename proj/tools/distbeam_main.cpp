// distbeam command-line front end: closed-form solves, singular-parameter
// spectra, zero-set traces, regularization studies and model-product checks,
// with CSV/JSON output for plotting and stored-run re-checks.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "distbeam/closed_form.hpp"
#include "distbeam/expr.hpp"
#include "distbeam/mollify.hpp"
#include "distbeam/oracle.hpp"
#include "distbeam/regularize.hpp"
#include "distbeam/singular_set.hpp"

using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSingular = 3;
constexpr int kExitNumerical = 4;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw distbeam::DomainError("cannot open output file " + path);
    out << content;
}

std::vector<distbeam::Singularity> parse_sings(const std::vector<std::string>& specs) {
    std::vector<distbeam::Singularity> out;
    for (const auto& spec : specs) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw distbeam::DomainError("--sing expects location:exponent, got '" + spec + "'");
        out.push_back({std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))});
    }
    return out;
}

struct ProblemFlags {
    double A = 1.0, B = 2.0, x0 = 0.5;
    std::optional<double> P, P1, P2;
    std::string g_text = "0";
    std::vector<std::string> sing_specs;

    void attach(CLI::App* cmd, bool with_g = true) {
        cmd->add_option("--A", A, "stiffness left of x0")->required();
        cmd->add_option("--B", B, "stiffness right of x0")->required();
        cmd->add_option("--x0", x0, "interface location in (0,1)")->required();
        cmd->add_option("--P", P, "constant axial force");
        cmd->add_option("--P1", P1, "axial force left of x0");
        cmd->add_option("--P2", P2, "axial force right of x0");
        if (with_g) {
            cmd->add_option("--g", g_text, "forcing expression in x (see grammar in README)");
            cmd->add_option("--sing", sing_specs,
                            "declared singularity location:exponent (repeatable or "
                            "comma-separated)")
                ->delimiter(',');
        }
    }

    distbeam::BeamProblem build() const {
        double p1, p2;
        if (P.has_value()) {
            if (P1.has_value() || P2.has_value())
                throw distbeam::DomainError("give either --P or the pair --P1/--P2");
            p1 = p2 = *P;
        } else if (P1.has_value() && P2.has_value()) {
            p1 = *P1;
            p2 = *P2;
        } else {
            throw distbeam::DomainError("axial force missing: use --P or --P1/--P2");
        }
        const auto ast = distbeam::expr::Ast::parse(g_text);
        auto g = distbeam::expr::to_forcing(ast, parse_sings(sing_specs), g_text);
        return distbeam::BeamProblem(distbeam::JumpConstant(A, B, x0),
                                     distbeam::JumpConstant(p1, p2, x0), std::move(g));
    }
};

json problem_json(const ProblemFlags& flags, const distbeam::BeamProblem& problem) {
    json sings = json::array();
    for (const auto& s : problem.g().singularities())
        sings.push_back({{"location", s.location}, {"exponent", s.exponent}});
    return {{"A", problem.A()},   {"B", problem.B()},   {"x0", problem.x0()},
            {"P1", problem.P1()}, {"P2", problem.P2()}, {"g", flags.g_text},
            {"singularities", sings}};
}

const char* branch_name(distbeam::Branch b) {
    switch (b) {
        case distbeam::Branch::Hyperbolic: return "hyperbolic";
        case distbeam::Branch::Trigonometric: return "trigonometric";
        case distbeam::Branch::Polynomial: return "polynomial";
    }
    return "?";
}

json solution_report(const ProblemFlags& flags, const distbeam::BeamProblem& problem,
                     const distbeam::PiecewiseSolution& sol, int family_count,
                     std::uint64_t seed, bool with_residual) {
    const auto& sys = sol.system();
    const auto& lim = sol.limits();
    json rep;
    rep["schema"] = 1;
    rep["problem"] = problem_json(flags, problem);
    rep["branches"] = {{"minus", branch_name(sol.branch_minus())},
                       {"plus", branch_name(sol.branch_plus())}};
    rep["interface_system"] = {{"h11", sys.h11}, {"h12", sys.h12}, {"h21", sys.h21},
                               {"h22", sys.h22}, {"z1", sys.z1},   {"z2", sys.z2},
                               {"det", sys.det}, {"scale", sys.scale},
                               {"det_over_scale", sys.det / sys.scale}};
    rep["coefficients"] = {{"c1", sol.c1()}, {"d1", sol.d1()}, {"kappa", sol.kappa()}};
    rep["limits"] = {{"u_minus", lim.u_minus},
                     {"u_plus", lim.u_plus},
                     {"du_minus", lim.du_minus},
                     {"du_plus", lim.du_plus}};
    if (lim.u_plus != 0.0) rep["jump_ratio"] = lim.u_minus / lim.u_plus;
    if (with_residual) {
        const auto family = distbeam::make_test_family(
            problem.x0(), problem.g().singularities(), family_count, seed);
        rep["weak_residual"] = {{"max", distbeam::weak_residual(sol, problem, family)},
                                {"test_functions", family_count},
                                {"seed", seed}};
    }
    return rep;
}

std::string solution_csv(const distbeam::PiecewiseSolution& sol, int samples) {
    const double x0 = sol.problem().x0();
    const int n_minus = std::max(2, static_cast<int>(std::lround(samples * x0)));
    const int n_plus = std::max(2, samples - n_minus);
    std::string csv = "x,u,side\n";
    for (int i = 0; i < n_minus; ++i) {
        const double x = x0 * i / (n_minus - 1);
        csv += fmt_double(x) + "," + fmt_double(sol.eval_minus(x)) + ",minus\n";
    }
    for (int i = 0; i < n_plus; ++i) {
        const double x = x0 + (1.0 - x0) * i / (n_plus - 1);
        csv += fmt_double(x) + "," + fmt_double(sol.eval_plus(x)) + ",plus\n";
    }
    return csv;
}

int run_solve(const ProblemFlags& flags, int samples, const std::string& out_csv,
              const std::string& out_json, const std::string& out_displacement,
              int family_count, std::uint64_t seed, bool with_residual) {
    const auto problem = flags.build();
    const auto sol = distbeam::solve(problem);
    json rep = solution_report(flags, problem, sol, family_count, seed, with_residual);

    if (!out_displacement.empty()) {
        const auto disp = distbeam::recover_displacement(sol);
        rep["displacement"] = {{"delta", disp.jump_delta}, {"theta", disp.jump_theta}};
        std::string csv = "x,w,w_prime\n";
        const int n = 101;
        for (int i = 0; i <= n; ++i) {
            const double x = static_cast<double>(i) / n;
            csv += fmt_double(x) + "," + fmt_double(disp.w(x)) + "," +
                   fmt_double(disp.w_prime(x)) + "\n";
        }
        write_file(out_displacement, csv);
    }
    if (!out_csv.empty()) {
        write_file(out_csv, solution_csv(sol, samples));
        rep["samples"] = {{"path", out_csv}, {"count", samples}};
    }
    const std::string text = rep.dump(2) + "\n";
    if (!out_json.empty())
        write_file(out_json, text);
    else
        std::cout << text;
    return 0;
}

int run_spectrum(double A, double B, double x0, int count, const std::string& out_json) {
    const auto rep = distbeam::pl_sequence(A, B, x0, count);
    json entries = json::array();
    for (const auto& e : rep.entries)
        entries.push_back({{"p", e.p},
                           {"provenance", e.provenance == distbeam::Provenance::Z0 ? "Z0" : "Z1"},
                           {"both_cosines", e.both_cosines},
                           {"singular", e.singular},
                           {"residual", e.residual}});
    json out = {{"schema", 1},
                {"A", A},
                {"B", B},
                {"x0", x0},
                {"count", count},
                {"entries", entries},
                {"ratio", {{"value", rep.ratio.value},
                           {"rational", rep.ratio.rational},
                           {"num", rep.ratio.num},
                           {"den", rep.ratio.den},
                           {"odd_odd", rep.ratio.odd_odd}}},
                {"skipped_intervals", rep.skipped_intervals}};
    const std::string text = out.dump(2) + "\n";
    if (!out_json.empty())
        write_file(out_json, text);
    else
        std::cout << text;
    return 0;
}

int run_trace(const std::string& plane_name, double A, double B, double x0,
              const std::vector<double>& window, int grid_n, const std::string& out_json,
              const std::string& out_csv) {
    distbeam::ZeroPlane plane;
    if (plane_name == "Mprime" || plane_name == "mprime")
        plane = distbeam::ZeroPlane::MPrime;
    else if (plane_name == "N" || plane_name == "n")
        plane = distbeam::ZeroPlane::N;
    else
        throw distbeam::DomainError("--plane must be Mprime or N");
    if (window.size() != 4)
        throw distbeam::DomainError("--window expects s_lo,s_hi,t_lo,t_hi");

    const auto set = distbeam::trace_zero_set(
        plane, A, B, x0, {window[0], window[1], window[2], window[3]}, grid_n);

    json curves = json::array();
    std::string csv = "curve,s,t,P1,P2\n";
    for (std::size_t c = 0; c < set.curves.size(); ++c) {
        json poly = json::array();
        for (const auto& v : set.curves[c]) {
            const auto forces = set.to_forces(v);
            poly.push_back({{"s", v[0]}, {"t", v[1]}, {"P1", forces[0]}, {"P2", forces[1]}});
            csv += std::to_string(c) + "," + fmt_double(v[0]) + "," + fmt_double(v[1]) + "," +
                   fmt_double(forces[0]) + "," + fmt_double(forces[1]) + "\n";
        }
        curves.push_back(std::move(poly));
    }
    json out = {{"schema", 1},
                {"plane", plane_name},
                {"A", A},
                {"B", B},
                {"x0", x0},
                {"nu", set.nu},
                {"window", window},
                {"grid_n", grid_n},
                {"curve_count", set.curves.size()},
                {"curves", curves}};
    if (!out_csv.empty()) write_file(out_csv, csv);
    const std::string text = out.dump(2) + "\n";
    if (!out_json.empty())
        write_file(out_json, text);
    else
        std::cout << text;
    return 0;
}

int run_regularize(const ProblemFlags& flags, const std::vector<double>& eps_list,
                   const std::vector<double>& k_spec, const std::string& out_json,
                   const std::string& emit_grids) {
    const auto problem = flags.build();
    distbeam::CompactSet K;
    if (k_spec.empty()) {
        K = distbeam::CompactSet::standoff(problem.x0());
    } else {
        if (k_spec.size() % 2 != 0)
            throw distbeam::DomainError("--K expects an even list of interval endpoints");
        for (std::size_t i = 0; i < k_spec.size(); i += 2)
            K.intervals.emplace_back(k_spec[i], k_spec[i + 1]);
    }
    const auto table = distbeam::convergence_study(problem, eps_list, K);

    json rows = json::array();
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        rows.push_back({{"eps", r.eps},
                        {"n", r.n},
                        {"h", r.grid_h},
                        {"sup_error", r.ok ? json(r.sup_error) : json()},
                        {"ok", r.ok},
                        {"message", r.message}});
        if (!emit_grids.empty() && r.ok) {
            const auto grid = distbeam::solve_regularized(problem, r.eps, r.n);
            std::string csv = "x,u\n";
            for (std::size_t k = 0; k < grid.values.size(); ++k)
                csv += fmt_double(grid.x(k)) + "," + fmt_double(grid.values[k]) + "\n";
            std::filesystem::create_directories(emit_grids);
            write_file(emit_grids + "/regularized_" + std::to_string(i) + ".csv", csv);
        }
    }
    json out = {{"schema", 1},
                {"problem", problem_json(flags, problem)},
                {"K", table.K.intervals},
                {"rows", rows}};
    const std::string text = out.dump(2) + "\n";
    if (!out_json.empty())
        write_file(out_json, text);
    else
        std::cout << text;
    return 0;
}

distbeam::mollify::DistDescriptor parse_operand(const std::string& token, double x0) {
    using distbeam::mollify::DistDescriptor;
    if (token == "Hminus") return DistDescriptor::heaviside_minus(x0);
    if (token == "Hplus") return DistDescriptor::heaviside_plus(x0);
    if (token == "delta") return DistDescriptor::delta_derivative(x0, 0);
    if (token == "delta1") return DistDescriptor::delta_derivative(x0, 1);
    if (token == "delta2") return DistDescriptor::delta_derivative(x0, 2);
    throw distbeam::DomainError("unknown product operand '" + token +
                                "' (expected Hminus, Hplus, delta, delta1, delta2)");
}

int run_product_check(const std::vector<std::string>& pair, double x0,
                      const std::string& mollifier_name, double eps_start, int eps_count,
                      double psi_center, double psi_radius, const std::string& out_json) {
    if (pair.size() != 2) throw distbeam::DomainError("--pair expects two operands");
    using distbeam::mollify::MollifierSpec;
    MollifierSpec m;
    if (mollifier_name == "bump")
        m = MollifierSpec::bump();
    else if (mollifier_name == "shifted")
        m = MollifierSpec::shifted_bump();
    else if (mollifier_name == "poly")
        m = MollifierSpec::poly_bump();
    else
        throw distbeam::DomainError("--mollifier must be bump, shifted or poly");

    const auto u = parse_operand(pair[0], x0);
    const auto v = parse_operand(pair[1], x0);
    const distbeam::TestFunction psi(psi_center, psi_radius);

    std::vector<double> schedule(static_cast<std::size_t>(eps_count));
    for (int i = 0; i < eps_count; ++i) schedule[static_cast<std::size_t>(i)] =
        eps_start * std::pow(0.5, i);

    std::vector<double> values(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i)
        values[i] = distbeam::mollify::mollified_pairing(u, v, psi, m, schedule[i]);

    json out = {{"schema", 1},
                {"pair", pair},
                {"x0", x0},
                {"mollifier", mollifier_name},
                {"psi", {{"center", psi_center}, {"radius", psi_radius},
                         {"value_at_x0", psi.value(x0)}}},
                {"schedule", schedule},
                {"values", values}};
    try {
        const auto verdict =
            distbeam::mollify::model_product_limit(u, v, psi, m, schedule);
        if (verdict.kind == distbeam::mollify::ProductLimit::Kind::Converged) {
            out["verdict"] = "Converged";
            out["limit"] = verdict.value;
            out["rate"] = verdict.rate;
            const double p = psi.value(x0);
            if (p != 0.0) out["coefficient"] = verdict.value / p;
        } else {
            out["verdict"] = "Diverged";
            out["growth_exponent"] = verdict.growth_exponent;
        }
    } catch (const distbeam::InconclusiveError& e) {
        out["verdict"] = "Inconclusive";
        out["message"] = e.what();
    }
    const std::string text = out.dump(2) + "\n";
    if (!out_json.empty())
        write_file(out_json, text);
    else
        std::cout << text;
    return 0;
}

int run_residual(const std::string& report_path, double tol, std::uint64_t seed) {
    std::ifstream in(report_path);
    if (!in) throw distbeam::DomainError("cannot open report " + report_path);
    json rep = json::parse(in);
    if (!rep.contains("schema") || rep["schema"].get<int>() != 1)
        throw distbeam::DomainError("unsupported report schema");
    const auto& pj = rep.at("problem");

    ProblemFlags flags;
    flags.A = pj.at("A").get<double>();
    flags.B = pj.at("B").get<double>();
    flags.x0 = pj.at("x0").get<double>();
    flags.P1 = pj.at("P1").get<double>();
    flags.P2 = pj.at("P2").get<double>();
    flags.g_text = pj.at("g").get<std::string>();
    for (const auto& s : pj.at("singularities"))
        flags.sing_specs.push_back(fmt_double(s.at("location").get<double>()) + ":" +
                                   fmt_double(s.at("exponent").get<double>()));
    const auto problem = flags.build();

    const double c1 = rep.at("coefficients").at("c1").get<double>();
    const double d1 = rep.at("coefficients").at("d1").get<double>();
    const auto sol = distbeam::assemble_solution(problem, c1, d1);

    const int count = rep.contains("weak_residual")
                          ? rep["weak_residual"].at("test_functions").get<int>()
                          : 12;
    const auto family =
        distbeam::make_test_family(problem.x0(), problem.g().singularities(), count, seed);
    const double residual = distbeam::weak_residual(sol, problem, family);

    const auto& lim = sol.limits();
    const double iface_u = std::abs(problem.A() * lim.u_minus - problem.B() * lim.u_plus);
    const double iface_du = std::abs(problem.A() * lim.du_minus - problem.B() * lim.du_plus);

    json out = {{"schema", 1},
                {"report", report_path},
                {"weak_residual", residual},
                {"interface_mismatch", {{"value", iface_u}, {"derivative", iface_du}}},
                {"tol", tol},
                {"pass", residual <= tol}};
    std::cout << out.dump(2) << "\n";
    return residual <= tol ? 0 : kExitNumerical;
}

void emit_error(const std::string& type, const std::string& message) {
    json err = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"closed-form and numerical tools for the fourth-order interface "
                 "problem (a u'')'' reduction (a u)'' + P u = g on [0,1]"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "closed-form solve with reports");
    ProblemFlags solve_flags;
    solve_flags.attach(solve_cmd);
    int samples = 201;
    std::string out_csv, out_json, out_disp;
    int family_count = 12;
    std::uint64_t seed = 0;
    bool no_residual = false;
    solve_cmd->add_option("--samples", samples, "CSV sample count")->check(CLI::Range(5, 2000000));
    solve_cmd->add_option("--out-csv", out_csv, "CSV output path (x,u,side)");
    solve_cmd->add_option("--out-json", out_json, "JSON report path (default: stdout)");
    solve_cmd->add_option("--displacement", out_disp, "also recover w and emit x,w,w' CSV");
    solve_cmd->add_option("--test-functions", family_count, "weak-residual family size")
        ->check(CLI::Range(2, 256));
    solve_cmd->add_option("--seed", seed, "test-function placement seed");
    solve_cmd->add_flag("--no-residual", no_residual, "skip the weak-residual computation");

    // spectrum
    auto* spectrum_cmd = app.add_subcommand("spectrum", "candidate singular P sequence");
    double sA = 1.0, sB = 2.0, sx0 = 0.5;
    int count = 10;
    std::string spectrum_out;
    spectrum_cmd->add_option("--A", sA)->required();
    spectrum_cmd->add_option("--B", sB)->required();
    spectrum_cmd->add_option("--x0", sx0)->required();
    spectrum_cmd->add_option("--count", count)->check(CLI::Range(1, 100000));
    spectrum_cmd->add_option("--out-json", spectrum_out);

    // trace
    auto* trace_cmd = app.add_subcommand("trace", "zero-set curves of the two-force case");
    std::string plane = "Mprime";
    double tA = 1.0, tB = 1.0, tx0 = 6.0 / 7.0;
    std::vector<double> window{0.0, 10.0, 0.0, 10.0};
    int grid_n = 256;
    std::string trace_json, trace_csv;
    trace_cmd->add_option("--plane", plane, "Mprime (P1,P2>0) or N (P1>0,P2<0)");
    trace_cmd->add_option("--A", tA)->required();
    trace_cmd->add_option("--B", tB)->required();
    trace_cmd->add_option("--x0", tx0)->required();
    trace_cmd->add_option("--window", window, "s_lo,s_hi,t_lo,t_hi")->delimiter(',')
        ->expected(4);
    trace_cmd->add_option("--grid-n", grid_n)->check(CLI::Range(16, 4096));
    trace_cmd->add_option("--out-json", trace_json);
    trace_cmd->add_option("--out-csv", trace_csv);

    // regularize
    auto* reg_cmd = app.add_subcommand("regularize", "coefficient-smoothing convergence study");
    ProblemFlags reg_flags;
    reg_flags.attach(reg_cmd);
    std::vector<double> eps_list;
    std::vector<double> k_spec;
    std::string reg_json, emit_grids;
    reg_cmd->add_option("--eps", eps_list, "transition half-widths")->delimiter(',')->required();
    reg_cmd->add_option("--K", k_spec, "compact set as interval endpoint list")->delimiter(',');
    reg_cmd->add_option("--out-json", reg_json);
    reg_cmd->add_option("--emit-grids", emit_grids, "directory for per-eps grid CSVs");

    // product-check
    auto* prod_cmd = app.add_subcommand("product-check", "model-product limit classification");
    std::vector<std::string> pair{"Hminus", "delta"};
    double px0 = 0.5, eps_start = 0.125, psi_center = 0.5, psi_radius = 0.3;
    int eps_count = 7;
    std::string mollifier = "bump", prod_json;
    prod_cmd->add_option("--pair", pair, "two operands, e.g. Hminus,delta")->delimiter(',')
        ->expected(2);
    prod_cmd->add_option("--x0", px0, "anchor of both operands");
    prod_cmd->add_option("--mollifier", mollifier, "bump | shifted | poly");
    prod_cmd->add_option("--eps-start", eps_start);
    prod_cmd->add_option("--eps-count", eps_count)->check(CLI::Range(5, 40));
    prod_cmd->add_option("--psi-center", psi_center);
    prod_cmd->add_option("--psi-radius", psi_radius);
    prod_cmd->add_option("--out-json", prod_json);

    // residual
    auto* res_cmd = app.add_subcommand("residual", "re-check a stored solve report");
    std::string report_path;
    double res_tol = 1e-6;
    std::uint64_t res_seed = 0;
    res_cmd->add_option("--report", report_path)->required();
    res_cmd->add_option("--tol", res_tol, "pass threshold for the weak residual");
    res_cmd->add_option("--seed", res_seed, "test-function placement seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        emit_error("cli", e.what());
        return kExitValidation;
    }

    try {
        if (*solve_cmd)
            return run_solve(solve_flags, samples, out_csv, out_json, out_disp, family_count,
                             seed, !no_residual);
        if (*spectrum_cmd) return run_spectrum(sA, sB, sx0, count, spectrum_out);
        if (*trace_cmd)
            return run_trace(plane, tA, tB, tx0, window, grid_n, trace_json, trace_csv);
        if (*reg_cmd) return run_regularize(reg_flags, eps_list, k_spec, reg_json, emit_grids);
        if (*prod_cmd)
            return run_product_check(pair, px0, mollifier, eps_start, eps_count, psi_center,
                                     psi_radius, prod_json);
        if (*res_cmd) return run_residual(report_path, res_tol, res_seed);
    } catch (const distbeam::SingularParameterError& e) {
        emit_error("singular_parameter", e.what());
        return kExitSingular;
    } catch (const distbeam::DomainError& e) {
        emit_error("validation", e.what());
        return kExitValidation;
    } catch (const distbeam::ParseError& e) {
        emit_error("parse", e.what());
        return kExitValidation;
    } catch (const distbeam::Error& e) {
        emit_error("numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitNumerical;
    }
    return 0;
}
