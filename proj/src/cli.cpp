#include "modcurv/cli.hpp"

#include "modcurv/errors.hpp"
#include "modcurv/modular.hpp"
#include "modcurv/numeric_oracle.hpp"
#include "modcurv/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace modcurv {

namespace {

struct Range {
    double a = 0, b = 0;
    int n = 0;
};

Range parse_range(const std::string& text) {
    Range r;
    std::stringstream ss(text);
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n) || !ss.eof())
        throw UsageError("range must look like a:b:n, got '" + text + "'");
    try {
        r.a = std::stod(a);
        r.b = std::stod(b);
        r.n = std::stoi(n);
    } catch (const std::logic_error&) {
        throw UsageError("range must look like a:b:n, got '" + text + "'");
    }
    if (r.n < 1 || !(r.a > 0) || !(r.b > 0)) throw UsageError("range needs positive endpoints and n ≥ 1");
    return r;
}

double range_point(const Range& r, int i) { return r.n == 1 ? r.a : r.a + (r.b - r.a) * i / (r.n - 1); }

void check_dim(int m) {
    if (m < 2 || m % 2) throw UsageError("--dim must be an even integer ≥ 2");
}

// writes to --out when given, else to `out`
void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot open output file '" + path + "'");
    f << text;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(15) << v;
    return os.str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Modular curvature engine for toric noncommutative manifolds", "modcurv"};
    app.require_subcommand(1);

    int dim = 2, seed = 0, jobs = 1, order = 8, cap = 40;
    std::string op_name = "kdelta", format = "text", which = "K", out_path, suite = "all";
    std::string s_range, t_range, h_text, theta_text = "0", table_format = "csv";
    double s = 1.0, t = 1.0, tol = -1;

    auto* derive = app.add_subcommand("derive", "derive K, G and the scalar coefficient");
    derive->add_option("--dim", dim, "even dimension ≥ 2");
    derive->add_option("--operator", op_name, "kdelta|nc4tori");
    derive->add_option("--format", format, "text|json");
    derive->add_option("--out", out_path, "output path");

    auto* eval = app.add_subcommand("eval", "evaluate K(s) or G(s,t)");
    eval->add_option("--dim", dim);
    eval->add_option("--operator", op_name);
    eval->add_option("--which", which, "K|G");
    eval->add_option("--s", s);
    eval->add_option("--t", t);
    eval->add_option("--format", format, "text|json");

    auto* table = app.add_subcommand("table", "tabulate K and G as CSV");
    table->add_option("--dim", dim);
    table->add_option("--operator", op_name);
    table->add_option("--s-range", s_range, "a:b:n")->required();
    table->add_option("--t-range", t_range, "a:b:n");
    table->add_option("--format", table_format, "csv");
    table->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify", "run an oracle suite");
    verify->add_option("--suite", suite, "algebra|symbols|integrals|matrix|gauss-bonnet|all");
    verify->add_option("--seed", seed);
    verify->add_option("--tol", tol, "override every numeric tolerance");
    verify->add_option("--jobs", jobs, "worker threads");

    auto* gb = app.add_subcommand("gauss-bonnet", "Gauss-Bonnet residual on the 2-torus");
    gb->add_option("--theta", theta_text, "deformation parameter (float)");
    gb->add_option("--h-spec", h_text, "modes 'r1,r2 : re,im' separated by ';' (default: 0.1-norm sample)");
    gb->add_option("--order", order, "series order");
    gb->add_option("--cap", cap, "support cap");
    gb->add_option("--tol", tol, "pass threshold (default 1e-6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*derive) {
            check_dim(dim);
            if (format != "text" && format != "json") throw UsageError("--format must be text or json");
            const auto rep = derive_curvature(dim, parse_operator(op_name));
            emit(format == "json" ? report_json(rep) : report_text(rep), out_path, out);
            return 0;
        }
        if (*eval) {
            check_dim(dim);
            if (which != "K" && which != "G") throw UsageError("--which must be K or G");
            if (format != "text" && format != "json") throw UsageError("--format must be text or json");
            if (!(s > 0) || !(t > 0)) throw UsageError("--s and --t must be positive");
            const auto rep = derive_curvature(dim, parse_operator(op_name));
            const double v = which == "K" ? eval_function(rep.K, s) : eval_function(rep.G, s, t);
            if (format == "json")
                out << "{\"which\": \"" << which << "\", \"s\": " << fmt(s) << ", \"t\": " << fmt(t)
                    << ", \"value\": " << fmt(v) << "}\n";
            else
                out << fmt(v) << "\n";
            return 0;
        }
        if (*table) {
            check_dim(dim);
            if (table_format != "csv") throw UsageError("table only writes csv");
            const auto rep = derive_curvature(dim, parse_operator(op_name));
            const Range rs = parse_range(s_range);
            std::ostringstream os;
            os << "s,t,K,G\n";
            if (t_range.empty()) {
                for (int i = 0; i < rs.n; ++i) {
                    const double sv = range_point(rs, i);
                    os << fmt(sv) << ",," << fmt(eval_function(rep.K, sv)) << ",\n";
                }
            } else {
                const Range rt = parse_range(t_range);
                for (int i = 0; i < rs.n; ++i)
                    for (int j = 0; j < rt.n; ++j) {
                        const double sv = range_point(rs, i), tv = range_point(rt, j);
                        os << fmt(sv) << "," << fmt(tv) << "," << fmt(eval_function(rep.K, sv)) << ","
                           << fmt(eval_function(rep.G, sv, tv)) << "\n";
                    }
            }
            emit(os.str(), out_path, out);
            return 0;
        }
        if (*verify) {
            if (jobs < 1) throw UsageError("--jobs must be positive");
            const auto tasks = verify_suite(suite);
            VerifyOptions opts{static_cast<std::uint64_t>(seed), tol, jobs};
            bool all_pass = true;
            for (const auto& r : run_checks(tasks, opts)) {
                out << format_check(r) << "\n";
                all_pass = all_pass && r.pass();
            }
            return all_pass ? 0 : 1;
        }
        if (*gb) {
            double theta = 0;
            try {
                theta = std::stod(theta_text);
            } catch (const std::logic_error&) {
                throw UsageError("--theta must be a number");
            }
            FloatElement h = sample_weyl_log(0.1);
            if (!h_text.empty()) {
                std::string lines = h_text;
                for (char& c : lines)
                    if (c == ';') c = '\n';
                h = parse_float_element(lines);
            }
            const double limit = tol >= 0 ? tol : 1e-6;
            const double r = gauss_bonnet_residual(h, SkewMatrix::standard(theta), order, cap);
            CheckResult res{"gauss_bonnet.residual", r, limit};
            out << format_check(res) << "\n";
            return res.pass() ? 0 : 1;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const PipelineError& e) {
        err << "pipeline error [" << e.stage() << "]: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace modcurv
