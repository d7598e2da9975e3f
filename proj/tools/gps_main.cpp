#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gps/specfile.hpp"
#include "gps/transform.hpp"
#include "gps/weierstrass.hpp"

using namespace gps;

namespace {

// exit codes: 0 ok, 2 parse, 3 math domain, 4 verification, 5 numeric
constexpr int EXIT_PARSE = 2;
constexpr int EXIT_MATH = 3;
constexpr int EXIT_VERIFY = 4;
constexpr int EXIT_NUMERIC = 5;

template <class Fn>
int run_guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        std::cerr << "parse error";
        if (e.line) std::cerr << " at line " << e.line;
        if (e.column) std::cerr << ", column " << e.column;
        std::cerr << ": " << e.what() << "\n";
        return EXIT_PARSE;
    } catch (const IntegrationError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return EXIT_NUMERIC;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_MATH;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return EXIT_NUMERIC;
    }
}

// ---------------------------------------------------------------------------
// series script interpreter

struct ScriptState {
    BasisPtr basis = GeneratorBasis::trivial();
    int m = 1, n = 0;
    Value cap = Value::integer(8);
    std::map<std::string, GeneralizedSeries> vars;
    std::vector<std::pair<std::string, std::string>> lets; // name -> value text
    std::ostream* out = &std::cout;

    void adopt_basis(const BasisPtr& b) {
        if (b == basis || b->equivalent(*basis)) return;
        basis = b;
        for (auto& [name, series] : vars) series = series.rebase(basis);
    }

    GeneralizedSeries& lookup(const std::string& name, int line) {
        auto it = vars.find(name);
        if (it == vars.end())
            throw ParseError("unknown series '" + name + "'", line);
        return it->second;
    }

    std::string substitute_lets(std::string text) const {
        for (const auto& [name, value] : lets) {
            std::string result;
            size_t pos = 0;
            while (pos < text.size()) {
                size_t hit = text.find(name, pos);
                if (hit == std::string::npos) {
                    result += text.substr(pos);
                    break;
                }
                bool left_ok = hit == 0 || !(std::isalnum(static_cast<unsigned char>(
                                                 text[hit - 1])) ||
                                             text[hit - 1] == '_');
                size_t end = hit + name.size();
                bool right_ok =
                    end >= text.size() ||
                    !(std::isalnum(static_cast<unsigned char>(text[end])) ||
                      text[end] == '_');
                result += text.substr(pos, hit - pos);
                if (left_ok && right_ok)
                    result += "(" + value + ")";
                else
                    result += name;
                pos = end;
            }
            text = result;
        }
        return text;
    }
};

std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> tok;
    std::string t;
    while (in >> t) tok.push_back(t);
    return tok;
}

bool is_op_keyword(const std::string& w) {
    static const std::set<std::string> ops{
        "add",          "sub",        "mul",           "scale",
        "truncate_gamma", "dx",       "dy",            "blowup_singular",
        "blowup_regular", "compose",  "reciprocal",    "pow",
        "translate_y",  "subst_puiseux", "comp_inverse", "w_divide",
        "w_prepare",    "implicit",   "implicit_lagrange", "implicit_system",
        "symmetric_reduce"};
    return ops.count(w) > 0;
}

void print_series(ScriptState& st, const std::string& name, const GeneralizedSeries& s) {
    *st.out << name << " = " << s.to_string() << "\n";
}

void exec_op(ScriptState& st, const std::vector<std::string>& targets,
             const std::vector<std::string>& tok, int line) {
    const std::string& op = tok[0];
    auto arg = [&](size_t i) -> const std::string& {
        if (i >= tok.size()) throw ParseError("missing argument for " + op, line);
        return tok[i];
    };
    auto series_arg = [&](size_t i) -> GeneralizedSeries& {
        return st.lookup(arg(i), line);
    };
    auto value_arg = [&](size_t i) { return parse_value(st.substitute_lets(arg(i))); };
    auto double_arg = [&](size_t i) { return value_arg(i).to_double(); };
    auto int_arg = [&](size_t i) { return std::stoi(arg(i)); };
    auto assign = [&](size_t which, GeneralizedSeries s) {
        st.adopt_basis(s.basis());
        auto r = s.rebase(st.basis);
        st.vars.insert_or_assign(targets.at(which), r);
        print_series(st, targets.at(which), r);
    };

    try {
        if (op == "add") {
            assign(0, linear_combination(double_arg(1), series_arg(2), double_arg(3),
                                         series_arg(4)));
        } else if (op == "sub") {
            assign(0, series_arg(1) - series_arg(2));
        } else if (op == "mul") {
            assign(0, series_arg(1) * series_arg(2));
        } else if (op == "scale") {
            assign(0, series_arg(2).scaled(double_arg(1)));
        } else if (op == "truncate_gamma") {
            auto& F = series_arg(1);
            std::vector<MonoidExponent> gamma;
            for (int i = 0; i < F.num_x(); ++i)
                gamma.push_back(
                    MonoidExponent::from_value(F.basis(), value_arg(2 + i)));
            assign(0, truncate_at(F, gamma));
        } else if (op == "dx") {
            assign(0, partial_x(series_arg(1), int_arg(2) - 1));
        } else if (op == "dy") {
            assign(0, partial_y(series_arg(1), int_arg(2) - 1));
        } else if (op == "blowup_singular") {
            assign(0, blowup_singular(series_arg(1), value_arg(2), int_arg(3) - 1,
                                      int_arg(4) - 1));
        } else if (op == "blowup_regular") {
            int i = tok.size() > 4 ? int_arg(4) - 1 : -1;
            int j = tok.size() > 5 ? int_arg(5) - 1 : -1;
            assign(0, blowup_regular(series_arg(1), value_arg(2), double_arg(3), i, j));
        } else if (op == "compose") {
            auto& F = series_arg(1);
            std::vector<GeneralizedSeries> G;
            for (size_t i = 2; i < tok.size(); ++i) G.push_back(series_arg(i));
            assign(0, compose(F, G));
        } else if (op == "reciprocal") {
            assign(0, reciprocal(series_arg(1)));
        } else if (op == "pow") {
            assign(0, pow_real(series_arg(2), double_arg(1)));
        } else if (op == "translate_y") {
            std::vector<double> shifts;
            for (size_t i = 2; i < tok.size(); ++i) shifts.push_back(double_arg(i));
            assign(0, translate_y(series_arg(1), shifts));
        } else if (op == "subst_puiseux") {
            assign(0, substitute_puiseux(series_arg(1), series_arg(2), int_arg(3) - 1));
        } else if (op == "comp_inverse") {
            assign(0, composition_inverse(series_arg(1)));
        } else if (op == "w_divide") {
            auto [q, r] = weierstrass_divide(series_arg(1), series_arg(2), int_arg(3));
            if (targets.size() != 2)
                throw ParseError("w_divide binds two names: q, r = w_divide g f d", line);
            assign(0, q);
            assign(1, r);
        } else if (op == "w_prepare") {
            auto rr = regular_order(series_arg(1));
            if (!rr.order)
                throw NotRegularError(
                    "w_prepare: regular_order = none (not regular within cap)");
            auto [u, w] = weierstrass_prepare(series_arg(1));
            if (targets.size() != 2)
                throw ParseError("w_prepare binds two names: u, w = w_prepare f", line);
            assign(0, u);
            assign(1, w);
        } else if (op == "implicit") {
            assign(0, solve_implicit(series_arg(1)));
        } else if (op == "implicit_lagrange") {
            assign(0, solve_implicit_lagrange(series_arg(1)));
        } else if (op == "implicit_system") {
            std::vector<GeneralizedSeries> fs;
            for (size_t i = 1; i < tok.size(); ++i) fs.push_back(series_arg(i));
            auto hs = solve_implicit_system(fs, static_cast<int>(fs.size()));
            if (targets.size() != hs.size())
                throw ParseError("implicit_system binds one name per component", line);
            for (size_t i = 0; i < hs.size(); ++i) assign(i, hs[i]);
        } else if (op == "symmetric_reduce") {
            assign(0, reduce_symmetric(series_arg(1), int_arg(2)));
        } else {
            throw ParseError("unknown operation '" + op + "'", line);
        }
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw Error("operation " + op + " (line " + std::to_string(line) +
                    "): " + e.what());
    }
}

int cmd_series(const std::string& path, long cap, const std::string& out_path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open script '" + path + "'");
    std::ofstream out_file;
    ScriptState st;
    st.cap = Value::integer(cap);
    if (!out_path.empty()) {
        out_file.open(out_path);
        if (!out_file) throw ParseError("cannot open output '" + out_path + "'");
        st.out = &out_file;
    }

    std::vector<std::pair<int, std::string>> lines;
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
        ++no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::string line = raw;
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        lines.emplace_back(no, line.substr(b, e - b + 1));
    }

    // infer the literal shape: largest X / Y indices used in literals
    int max_x = 1, max_y = 0;
    for (const auto& [ln, line] : lines) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string rhs = line.substr(eq + 1);
        auto first = tokenize(rhs);
        if (!first.empty() && is_op_keyword(first[0])) continue;
        for (size_t i = 0; i + 1 < rhs.size(); ++i) {
            char c = rhs[i];
            if ((c == 'X' || c == 'Y') &&
                std::isdigit(static_cast<unsigned char>(rhs[i + 1]))) {
                int idx = std::atoi(rhs.c_str() + i + 1);
                (c == 'X' ? max_x : max_y) = std::max(c == 'X' ? max_x : max_y, idx);
            } else if (c == 'Y' && max_y == 0) {
                max_y = 1;
            }
        }
    }
    st.m = max_x;
    st.n = max_y;

    for (const auto& [ln, line] : lines) {
        auto eq = line.find('=');
        std::vector<std::string> head = tokenize(eq == std::string::npos
                                                     ? line
                                                     : line.substr(0, eq));
        if (!head.empty() && head[0] == "let") {
            if (head.size() != 2 || eq == std::string::npos)
                throw ParseError("expected: let NAME = <value>", ln);
            Value v = parse_value(st.substitute_lets(line.substr(eq + 1)));
            st.adopt_basis(GeneratorBasis::extended(st.basis, {v}));
            st.lets.emplace_back(head[1], v.to_string());
            continue;
        }
        if (!head.empty() && head[0] == "show") {
            if (head.size() != 2) throw ParseError("expected: show NAME", ln);
            print_series(st, head[1], st.lookup(head[1], ln));
            continue;
        }
        if (!head.empty() && head[0] == "order") {
            if (head.size() != 2) throw ParseError("expected: order NAME", ln);
            auto rr = regular_order(st.lookup(head[1], ln));
            if (rr.order)
                *st.out << "order " << head[1] << " = " << *rr.order
                        << " leading " << rr.leading << "\n";
            else
                *st.out << "order " << head[1] << " = none\n";
            continue;
        }
        if (eq == std::string::npos)
            throw ParseError("expected an assignment or directive", ln);

        // targets (comma separated) = op args | literal
        std::vector<std::string> targets;
        {
            std::string lhs = line.substr(0, eq);
            std::string cur;
            for (char c : lhs) {
                if (c == ',') {
                    auto t = tokenize(cur);
                    if (t.size() != 1) throw ParseError("bad assignment target", ln);
                    targets.push_back(t[0]);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            auto t = tokenize(cur);
            if (t.size() != 1) throw ParseError("bad assignment target", ln);
            targets.push_back(t[0]);
        }
        std::string rhs = line.substr(eq + 1);
        auto tok = tokenize(rhs);
        if (!tok.empty() && is_op_keyword(tok[0])) {
            exec_op(st, targets, tok, ln);
        } else {
            if (targets.size() != 1)
                throw ParseError("literals bind a single name", ln);
            GeneralizedSeries s;
            try {
                s = parse_series(st.basis, st.m, st.n, st.cap,
                                 st.substitute_lets(rhs), true);
            } catch (const ParseError& e) {
                throw ParseError(std::string(e.what()), ln, e.column);
            }
            st.adopt_basis(s.basis());
            st.vars.insert_or_assign(targets[0], s.rebase(st.basis));
            print_series(st, targets[0], st.vars.at(targets[0]));
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// dulac / poincare pipelines

std::vector<std::vector<double>> parse_mu_list(const std::vector<std::string>& mus,
                                               int params) {
    std::vector<std::vector<double>> out;
    for (const auto& m : mus) {
        std::vector<double> tuple;
        std::istringstream in(m);
        std::string part;
        while (std::getline(in, part, ',')) tuple.push_back(std::stod(part));
        if (static_cast<int>(tuple.size()) != params)
            throw ParseError("--mu needs " + std::to_string(params) +
                             " comma-separated values");
        out.push_back(std::move(tuple));
    }
    if (out.empty()) out.emplace_back(params, 0.0);
    return out;
}

void write_expansion_file(const std::string& path, const DulacExpansion& expansion) {
    std::ofstream out(path);
    out << "lambda " << expansion.lambda.to_string() << "\n";
    out << "N " << expansion.N << "\n";
    out << "certified_order " << expansion.certified_order.to_string() << "\n";
    out << "series " << expansion.series.to_string() << "\n";
    for (const auto& note : expansion.notes) out << "note " << note << "\n";
}

int cmd_dulac(const std::string& path, int order_flag, const std::string& nu_flag,
              double tol_flag, int grid_flag, const std::vector<std::string>& mu_flags,
              const std::string& out_prefix) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec '" + path + "'");
    DulacJob job = parse_dulac_file(in);
    if (order_flag > 0) job.N = order_flag;
    if (!nu_flag.empty()) job.nu = parse_value(nu_flag);
    if (tol_flag > 0) job.tolerances.tol = tol_flag;
    if (grid_flag > 0) job.tolerances.grid.per_decade = grid_flag;

    auto mus = parse_mu_list(mu_flags, job.params);
    SaddleSpec saddle = job.analyze();

    bool all_passed = true;
    for (size_t k = 0; k < mus.size(); ++k) {
        std::string suffix = mus.size() > 1 ? "_mu" + std::to_string(k + 1) : "";
        DulacOptions opts;
        opts.nu_target = job.nu;
        opts.transition.tol = job.tolerances.tol;
        auto expansion = dulac_series(saddle, job.N, job.sections, mus[k], opts);
        Value nu_eff = job.nu.is_zero() ? expansion.certified_order : job.nu;
        auto report =
            verify_asymptotics(saddle, job.sections, expansion.series, nu_eff,
                               job.tolerances.grid, job.tolerances.tol, mus[k]);

        write_expansion_file(out_prefix + suffix + ".expansion.txt", expansion);
        std::ofstream csv(out_prefix + suffix + ".csv");
        write_residual_csv(csv, report.t, report.numeric, report.series, report.residual);
        std::ofstream summary(out_prefix + suffix + ".summary.txt");
        write_verification_summary(summary, report);

        std::cout << "mu";
        for (double m : mus[k]) std::cout << " " << m;
        std::cout << ": " << (report.passed ? "PASS" : "FAIL") << " (" << report.message
                  << ")\n";
        all_passed = all_passed && report.passed;
    }
    return all_passed ? 0 : EXIT_VERIFY;
}

int cmd_poincare(const std::string& path, int order_flag, const std::string& nu_flag,
                 double tol_flag, const std::vector<std::string>& mu_flags,
                 const std::string& out_prefix) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec '" + path + "'");
    PoincareJob job = parse_poincare_file(in);
    if (order_flag > 0) job.N = order_flag;
    if (!nu_flag.empty()) job.nu = parse_value(nu_flag);
    if (tol_flag > 0) job.tolerances.tol = tol_flag;

    auto mus = parse_mu_list(mu_flags, job.params);
    PolycycleSpec poly = job.polycycle();

    for (size_t k = 0; k < mus.size(); ++k) {
        std::string suffix = mus.size() > 1 ? "_mu" + std::to_string(k + 1) : "";
        auto series = poincare_series(poly, job.N, job.nu, mus[k]);

        std::vector<double> ts, numeric, svals, resid;
        for (int i = 0; i <= job.fp_resolution; ++i) {
            double t = job.fp_lo + (job.fp_hi - job.fp_lo) * i / job.fp_resolution;
            double num = poincare_map(poly, t, job.tolerances.tol, mus[k]);
            double sv = evaluate_expansion(series, series.cap(), t);
            ts.push_back(t);
            numeric.push_back(num);
            svals.push_back(sv);
            resid.push_back(std::fabs(num - sv));
        }
        auto fps = count_fixed_points(
            [&](double t) { return poincare_map(poly, t, job.tolerances.tol, mus[k]); },
            job.fp_lo, job.fp_hi, job.fp_resolution, job.tolerances.tol * 100,
            100 * job.tolerances.tol);

        std::ofstream csv(out_prefix + suffix + ".csv");
        write_residual_csv(csv, ts, numeric, svals, resid);
        std::ofstream stxt(out_prefix + suffix + ".series.txt");
        stxt << series.to_string() << "\n";
        std::ofstream summary(out_prefix + suffix + ".summary.txt");
        write_fixed_point_summary(summary, fps);

        std::cout << "mu";
        for (double m : mus[k]) std::cout << " " << m;
        std::cout << ": " << fps.count << " fixed point(s), "
                  << fps.indeterminate_cells.size() << " indeterminate cell(s)\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized power series and saddle transition toolkit"};
    app.require_subcommand(1);

    std::string script, out_path;
    long cap = 8;
    auto* series_cmd = app.add_subcommand("series", "run a series operation script");
    series_cmd->add_option("script", script, "script file")->required();
    series_cmd->add_option("--cap", cap, "series truncation cap");
    series_cmd->add_option("--out", out_path, "write results to a file");

    std::string dulac_spec, nu_flag, dulac_out = "dulac";
    int order_flag = 0, grid_flag = 0;
    double tol_flag = 0;
    std::vector<std::string> mu_flags;
    auto* dulac_cmd = app.add_subcommand("dulac", "transition-map expansion + verification");
    dulac_cmd->add_option("spec", dulac_spec, "field specification file")->required();
    dulac_cmd->add_option("--order", order_flag, "normalization order N");
    dulac_cmd->add_option("--nu", nu_flag, "verification order");
    dulac_cmd->add_option("--tol", tol_flag, "integrator tolerance");
    dulac_cmd->add_option("--grid", grid_flag, "points per decade");
    dulac_cmd->add_option("--mu", mu_flags, "parameter tuple (repeatable)");
    dulac_cmd->add_option("--out", dulac_out, "output file prefix");

    std::string poin_spec, poin_nu, poin_out = "poincare";
    int poin_order = 0;
    double poin_tol = 0;
    std::vector<std::string> poin_mu;
    auto* poin_cmd = app.add_subcommand("poincare", "return map + fixed point report");
    poin_cmd->add_option("spec", poin_spec, "polycycle specification file")->required();
    poin_cmd->add_option("--order", poin_order, "normalization order N");
    poin_cmd->add_option("--nu", poin_nu, "series order");
    poin_cmd->add_option("--tol", poin_tol, "integrator tolerance");
    poin_cmd->add_option("--mu", poin_mu, "parameter tuple (repeatable)");
    poin_cmd->add_option("--out", poin_out, "output file prefix");

    CLI11_PARSE(app, argc, argv);

    if (series_cmd->parsed())
        return run_guarded([&] { return cmd_series(script, cap, out_path); });
    if (dulac_cmd->parsed())
        return run_guarded([&] {
            return cmd_dulac(dulac_spec, order_flag, nu_flag, tol_flag, grid_flag,
                             mu_flags, dulac_out);
        });
    if (poin_cmd->parsed())
        return run_guarded([&] {
            return cmd_poincare(poin_spec, poin_order, poin_nu, poin_tol, poin_mu,
                                poin_out);
        });
    return 0;
}
