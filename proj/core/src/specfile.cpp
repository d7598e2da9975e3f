#include "gps/specfile.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace gps {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    size_t pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

/// "x^2 y^3", "x", "y^2", "1" -> exponent pair
std::pair<int, int> parse_monomial(const std::string& text, int line_no) {
    int i = 0, j = 0;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;
        char var = std::tolower(static_cast<unsigned char>(tok[0]));
        if (var != 'x' && var != 'y')
            throw ParseError("bad monomial '" + text + "'", line_no);
        int e = 1;
        size_t caret = tok.find('^');
        if (caret != std::string::npos) e = std::stoi(tok.substr(caret + 1));
        (var == 'x' ? i : j) += e;
    }
    return {i, j};
}

} // namespace

MuPoly parse_mu_poly(const std::string& text, int params) {
    // term := [+-] factor ('*' factor)*; factor := number | muK ['^' int]
    struct Lexer {
        const std::string& s;
        size_t pos = 0;
        int params;

        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool accept(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        MuPoly factor() {
            skip();
            if (pos >= s.size()) throw ParseError("unexpected end of coefficient");
            if (s[pos] == '-' || s[pos] == '+') {
                // unary sign in front of a non-numeric factor
                size_t peek = pos + 1;
                while (peek < s.size() && std::isspace(static_cast<unsigned char>(s[peek])))
                    ++peek;
                if (peek < s.size() && !std::isdigit(static_cast<unsigned char>(s[peek])) &&
                    s[peek] != '.') {
                    char sign = s[pos];
                    pos = peek;
                    MuPoly f = factor();
                    return sign == '-' ? f.scaled(-1.0) : f;
                }
            }
            if (s.compare(pos, 5, "sqrt(") == 0) {
                size_t start = pos;
                pos += 5;
                int depth = 1;
                while (pos < s.size() && depth > 0) {
                    if (s[pos] == '(') ++depth;
                    if (s[pos] == ')') --depth;
                    ++pos;
                }
                if (depth != 0) throw ParseError("unbalanced sqrt in coefficient");
                return MuPoly(params,
                              parse_value(s.substr(start, pos - start)).to_double());
            }
            if (s.compare(pos, 2, "mu") == 0) {
                pos += 2;
                size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                    ++pos;
                int idx = start == pos ? 1 : std::stoi(s.substr(start, pos - start));
                MuPoly m = MuPoly::variable(params, idx - 1);
                if (accept('^')) {
                    size_t es = pos;
                    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                        ++pos;
                    int e = std::stoi(s.substr(es, pos - es));
                    MuPoly out(params, 1.0);
                    for (int q = 0; q < e; ++q) out = out * m;
                    return out;
                }
                return m;
            }
            if (accept('(')) {
                MuPoly inner = expr();
                if (!accept(')')) throw ParseError("expected ')' in coefficient");
                return inner;
            }
            size_t start = pos;
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
            while (pos < s.size() &&
                   (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
                    s[pos] == 'e' || s[pos] == 'E' ||
                    ((s[pos] == '+' || s[pos] == '-') &&
                     (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
                ++pos;
            if (pos == start) throw ParseError("expected number in coefficient '" + s + "'");
            return MuPoly(params, std::stod(s.substr(start, pos - start)));
        }
        MuPoly term() {
            MuPoly v = factor();
            for (;;) {
                skip();
                if (accept('*'))
                    v = v * factor();
                else
                    return v;
            }
        }
        MuPoly expr() {
            MuPoly v = term();
            for (;;) {
                skip();
                if (accept('+'))
                    v = v + term();
                else if (accept('-'))
                    v = v - term();
                else
                    return v;
            }
        }
    } lex{text, 0, params};
    MuPoly out = lex.expr();
    lex.skip();
    if (lex.pos != text.size())
        throw ParseError("trailing characters in coefficient '" + text + "'");
    return out;
}

namespace {

struct SectionedFile {
    // sections in order: (name, index, lines-with-numbers)
    struct Section {
        std::string name;
        int index = 1;
        std::vector<std::pair<int, std::string>> lines;
    };
    std::vector<Section> sections;
    std::vector<std::pair<int, std::string>> preamble;
};

SectionedFile read_sections(std::istream& in) {
    SectionedFile out;
    std::string raw;
    int line_no = 0;
    SectionedFile::Section* cur = nullptr;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            std::string head = trim(line.substr(1, line.size() - 2));
            SectionedFile::Section sec;
            std::istringstream hs(head);
            hs >> sec.name;
            if (!(hs >> sec.index)) sec.index = 1;
            out.sections.push_back(std::move(sec));
            cur = &out.sections.back();
        } else if (cur) {
            cur->lines.emplace_back(line_no, line);
        } else {
            out.preamble.emplace_back(line_no, line);
        }
    }
    return out;
}

double parse_double_value(const std::string& text) { return parse_value(text).to_double(); }

/// Builds one DulacJob from field/saddle/sections/orders/tolerances blocks.
struct VertexBlocks {
    const SectionedFile::Section* field = nullptr;
    const SectionedFile::Section* saddle = nullptr;
    const SectionedFile::Section* sections = nullptr;
};

DulacJob job_from_blocks(int params, const VertexBlocks& blocks) {
    if (!blocks.field) throw ParseError("missing [field] section");
    int cap = 10;
    ParamSeries2 P(params, cap), Q(params, cap);
    for (const auto& [ln, line] : blocks.field->lines) {
        std::istringstream ls(line);
        std::string comp;
        ls >> comp;
        std::string rest;
        std::getline(ls, rest);
        size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw ParseError("expected 'P <monomial> : <coefficient>'", ln);
        auto [i, j] = parse_monomial(trim(rest.substr(0, colon)), ln);
        MuPoly c = parse_mu_poly(trim(rest.substr(colon + 1)), params);
        if (comp == "P" || comp == "p")
            P.add_term(i, j, c);
        else if (comp == "Q" || comp == "q")
            Q.add_term(i, j, c);
        else
            throw ParseError("field component must be P or Q", ln);
    }

    DulacJob job;
    job.params = params;
    job.field = PlanarAnalyticField(params, P, Q);

    if (blocks.saddle) {
        for (const auto& [ln, line] : blocks.saddle->lines) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            std::string rest;
            std::getline(ls, rest);
            rest = trim(rest);
            if (key == "eigenvalues") {
                if (rest == "auto") continue;
                auto parts = split_commas(rest);
                if (parts.size() != 2)
                    throw ParseError("eigenvalues need two values or 'auto'", ln);
                job.eigenvalues = {parse_value(parts[0]), parse_value(parts[1])};
            } else {
                throw ParseError("unknown saddle key '" + key + "'", ln);
            }
        }
    }

    if (blocks.sections) {
        for (const auto& [ln, line] : blocks.sections->lines) {
            std::istringstream ls(line);
            std::string key, val;
            ls >> key >> val;
            if (key == "x0")
                job.sections.x0 = parse_double_value(val);
            else if (key == "y0")
                job.sections.y0 = parse_double_value(val);
            else if (key == "eps")
                job.sections.eps = parse_double_value(val);
            else
                throw ParseError("unknown sections key '" + key + "'", ln);
        }
    }
    return job;
}

void apply_common(DulacJob& job, const SectionedFile& file) {
    for (const auto& sec : file.sections) {
        if (sec.name == "orders") {
            for (const auto& [ln, line] : sec.lines) {
                std::istringstream ls(line);
                std::string key, val;
                ls >> key >> val;
                if (key == "N")
                    job.N = std::stoi(val);
                else if (key == "nu")
                    job.nu = parse_value(val);
                else
                    throw ParseError("unknown orders key '" + key + "'", ln);
            }
        } else if (sec.name == "tolerances") {
            for (const auto& [ln, line] : sec.lines) {
                std::istringstream ls(line);
                std::string key, val;
                ls >> key >> val;
                if (key == "tol")
                    job.tolerances.tol = parse_double_value(val);
                else if (key == "grid")
                    job.tolerances.grid.per_decade = std::stoi(val);
                else if (key == "t_lo")
                    job.tolerances.grid.t_lo = parse_double_value(val);
                else if (key == "t_hi")
                    job.tolerances.grid.t_hi = parse_double_value(val);
                else
                    throw ParseError("unknown tolerances key '" + key + "'", ln);
            }
        }
    }
}

int parse_params(const SectionedFile& file) {
    int params = 0;
    for (const auto& [ln, line] : file.preamble) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "params") {
            ls >> params;
        } else {
            throw ParseError("unknown directive '" + key + "' before the first section",
                             ln);
        }
    }
    return params;
}

} // namespace

SaddleSpec DulacJob::analyze() const {
    if (eigenvalues)
        return analyze_saddle(field, eigenvalues->first, eigenvalues->second);
    return analyze_saddle(field);
}

DulacJob parse_dulac_file(std::istream& in) {
    SectionedFile file = read_sections(in);
    int params = parse_params(file);
    VertexBlocks blocks;
    for (const auto& sec : file.sections) {
        if (sec.name == "field") blocks.field = &sec;
        if (sec.name == "saddle") blocks.saddle = &sec;
        if (sec.name == "sections") blocks.sections = &sec;
    }
    DulacJob job = job_from_blocks(params, blocks);
    apply_common(job, file);
    return job;
}

PoincareJob parse_poincare_file(std::istream& in) {
    SectionedFile file = read_sections(in);
    PoincareJob job;
    job.params = parse_params(file);

    std::map<int, VertexBlocks> vertex_blocks;
    std::map<int, const SectionedFile::Section*> corner_blocks;
    for (const auto& sec : file.sections) {
        if (sec.name == "field") vertex_blocks[sec.index].field = &sec;
        if (sec.name == "saddle") vertex_blocks[sec.index].saddle = &sec;
        if (sec.name == "sections") vertex_blocks[sec.index].sections = &sec;
        if (sec.name == "corner") corner_blocks[sec.index] = &sec;
    }
    if (vertex_blocks.empty()) throw ParseError("no [field <k>] sections found");

    int expected = 1;
    for (const auto& [idx, blocks] : vertex_blocks) {
        if (idx != expected)
            throw ParseError("vertex indices must be consecutive from 1; missing " +
                             std::to_string(expected));
        ++expected;
        DulacJob vjob = job_from_blocks(job.params, blocks);
        apply_common(vjob, file);
        job.vertices.push_back(std::move(vjob));

        CornerMap corner = CornerMap::identity();
        auto it = corner_blocks.find(idx);
        if (it != corner_blocks.end()) {
            for (const auto& [ln, line] : it->second->lines) {
                std::istringstream ls(line);
                std::string key;
                ls >> key;
                std::string rest;
                std::getline(ls, rest);
                if (key == "coeffs") {
                    corner.coeffs.clear();
                    for (const auto& part : split_commas(trim(rest)))
                        corner.coeffs.push_back(parse_double_value(part));
                } else if (key == "radius") {
                    corner.radius = parse_double_value(trim(rest));
                } else {
                    throw ParseError("unknown corner key '" + key + "'", ln);
                }
            }
        }
        job.corners.push_back(std::move(corner));
    }

    for (const auto& sec : file.sections) {
        if (sec.name != "fixed_points") continue;
        for (const auto& [ln, line] : sec.lines) {
            std::istringstream ls(line);
            std::string key, val;
            ls >> key >> val;
            if (key == "a")
                job.fp_lo = parse_double_value(val);
            else if (key == "b")
                job.fp_hi = parse_double_value(val);
            else if (key == "resolution")
                job.fp_resolution = std::stoi(val);
            else
                throw ParseError("unknown fixed_points key '" + key + "'", ln);
        }
    }
    if (!job.vertices.empty()) {
        job.N = job.vertices.front().N;
        job.nu = job.vertices.front().nu;
        job.tolerances = job.vertices.front().tolerances;
    }
    return job;
}

PolycycleSpec PoincareJob::polycycle() const {
    PolycycleSpec poly;
    poly.params = params;
    for (size_t i = 0; i < vertices.size(); ++i)
        poly.vertices.push_back(
            {vertices[i].analyze(), vertices[i].sections, corners[i]});
    return poly;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void write_residual_csv(std::ostream& out, const std::vector<double>& t,
                        const std::vector<double>& numeric,
                        const std::vector<double>& series,
                        const std::vector<double>& residual) {
    out << "t,numeric,series,residual\n";
    for (size_t i = 0; i < t.size(); ++i)
        out << fmt17(t[i]) << ',' << fmt17(numeric[i]) << ',' << fmt17(series[i]) << ','
            << fmt17(residual[i]) << '\n';
}

void write_verification_summary(std::ostream& out, const VerificationReport& report) {
    out << "pass " << (report.passed ? "true" : "false") << "\n"
        << "slope " << fmt17(report.slope) << "\n"
        << "nu " << report.nu.to_string() << "\n"
        << "margin " << fmt17(report.margin) << "\n"
        << "noise_floor_pass " << (report.noise_floor_pass ? "true" : "false") << "\n"
        << "monotone_lower_half " << (report.monotone_lower_half ? "true" : "false")
        << "\n"
        << "message " << report.message << "\n";
}

void write_fixed_point_summary(std::ostream& out, const FixedPointReport& report) {
    out << "fixed_points " << report.count << "\n";
    for (const auto& b : report.brackets)
        out << "bracket " << fmt17(b.lo) << " " << fmt17(b.hi) << " root " << fmt17(b.root)
            << "\n";
    for (const auto& [lo, hi] : report.indeterminate_cells)
        out << "indeterminate " << fmt17(lo) << " " << fmt17(hi) << "\n";
}

} // namespace gps
