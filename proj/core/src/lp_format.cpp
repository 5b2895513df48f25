#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "shp/solver.hpp"

namespace shp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// x<j> for binaries, w<j> for continuous auxiliaries
std::string var_name(const BinaryLinearProgram& p, int j) {
    if (j < p.num_binary) return "x" + std::to_string(j);
    return "w" + std::to_string(j - p.num_binary);
}

void write_terms(std::ostream& os, const BinaryLinearProgram& p,
                 const std::vector<std::pair<int, double>>& terms) {
    bool first = true;
    for (auto [j, c] : terms) {
        if (c == 0.0) continue;
        if (first) {
            os << fmt(c) << " " << var_name(p, j);
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ") << fmt(std::fabs(c)) << " " << var_name(p, j);
        }
    }
    if (first) os << "0 " << var_name(p, 0);
}

}  // namespace

std::string lp_to_string(const BinaryLinearProgram& p) {
    std::ostringstream os;
    os << "Minimize\n obj:";
    bool any = false;
    for (int j = 0; j < p.num_vars(); ++j) {
        if (p.objective[j] == 0.0) continue;
        if (!any) {
            os << " " << fmt(p.objective[j]) << " " << var_name(p, j);
            any = true;
        } else {
            os << (p.objective[j] < 0 ? " - " : " + ") << fmt(std::fabs(p.objective[j])) << " "
               << var_name(p, j);
        }
    }
    os << "\nSubject To\n";
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
        os << " c" << r << ": ";
        write_terms(os, p, p.rows[r].terms);
        const char* rel = p.rows[r].rel == Relation::LE ? "<=" : (p.rows[r].rel == Relation::GE ? ">=" : "=");
        os << " " << rel << " " << fmt(p.rows[r].rhs) << "\n";
    }
    os << "Bounds\n";
    for (int j = 0; j < p.num_vars(); ++j) {
        const double lo = p.lower[j], hi = p.upper[j];
        os << " ";
        if (!std::isfinite(lo) && !std::isfinite(hi)) {
            os << var_name(p, j) << " free\n";
            continue;
        }
        if (std::isfinite(lo))
            os << fmt(lo) << " <= ";
        else
            os << "-inf <= ";
        os << var_name(p, j);
        if (std::isfinite(hi))
            os << " <= " << fmt(hi);
        else
            os << " <= inf";
        os << "\n";
    }
    os << "Binary\n";
    for (int j = 0; j < p.num_binary; ++j) os << " x" << j;
    if (p.num_binary > 0) os << "\n";
    os << "End\n";
    return os.str();
}

void export_lp(const BinaryLinearProgram& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write LP file: " + path);
    out << lp_to_string(p);
}

namespace {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> toks;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            toks.push_back(cur);
            cur.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\') {  // comment to end of line
            flush();
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (c == ':') {
            flush();
            continue;
        }
        if (c == '+') {
            if (!cur.empty() && (cur.back() == 'e' || cur.back() == 'E')) {
                cur += c;  // exponent sign inside a number
                continue;
            }
            flush();
            toks.push_back("+");
            continue;
        }
        if (c == '<' || c == '>' || c == '=') {
            flush();
            std::string rel(1, c);
            if (i + 1 < text.size() && text[i + 1] == '=') {
                rel += '=';
                ++i;
            }
            toks.push_back(rel);
            continue;
        }
        if (c == '-') {
            // minus: exponent sign inside a number, leading sign, or operator
            if (!cur.empty() && (cur.back() == 'e' || cur.back() == 'E')) {
                cur += c;
                continue;
            }
            if (cur.empty()) {
                cur += c;
                continue;
            }
            flush();
            cur += c;
            continue;
        }
        cur += c;
    }
    flush();
    return toks;
}

bool is_number(const std::string& s, double& out) {
    if (s == "-inf" || s == "-Inf") {
        out = -std::numeric_limits<double>::infinity();
        return true;
    }
    if (s == "+inf" || s == "inf" || s == "Inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end && *end == '\0' && end != s.c_str();
}

bool parse_var(const std::string& s, int& idx, bool& binary) {
    if (s.size() < 2) return false;
    if (s[0] == 'x')
        binary = true;
    else if (s[0] == 'w')
        binary = false;
    else
        return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    idx = std::stoi(s.substr(1));
    return true;
}

}  // namespace

BinaryLinearProgram lp_from_string(const std::string& text) {
    const auto toks = tokenize(text);
    enum Section { None, Objective, Constraints, Bounds, Binaries };
    Section sec = None;

    int max_bin = -1, max_cont = -1;
    struct RawRow {
        std::vector<std::tuple<bool, int, double>> terms;  // (is_binary, idx, coef)
        Relation rel = Relation::LE;
        double rhs = 0.0;
    };
    std::vector<std::tuple<bool, int, double>> obj_terms;
    std::vector<RawRow> raw_rows;
    std::map<std::pair<bool, int>, std::pair<double, double>> bounds;

    std::size_t i = 0;
    auto lower = [](std::string s) {
        for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };

    std::vector<std::tuple<bool, int, double>>* target = nullptr;
    double sign = 1.0;
    double pending_coef = 1.0;
    bool have_coef = false;

    auto note_var = [&](bool bin, int idx) {
        if (bin)
            max_bin = std::max(max_bin, idx);
        else
            max_cont = std::max(max_cont, idx);
    };

    while (i < toks.size()) {
        const std::string t = toks[i];
        const std::string lt = lower(t);
        if (lt == "minimize" || lt == "maximise" || lt == "minimise" || lt == "min") {
            sec = Objective;
            target = &obj_terms;
            sign = 1.0;
            have_coef = false;
            ++i;
            continue;
        }
        if (lt == "subject") {
            sec = Constraints;
            target = nullptr;
            ++i;
            if (i < toks.size() && lower(toks[i]) == "to") ++i;
            continue;
        }
        if (lt == "st" || lt == "s.t.") {
            sec = Constraints;
            target = nullptr;
            ++i;
            continue;
        }
        if (lt == "bounds") {
            sec = Bounds;
            ++i;
            continue;
        }
        if (lt == "binary" || lt == "binaries" || lt == "bin") {
            sec = Binaries;
            ++i;
            continue;
        }
        if (lt == "end") break;

        if (sec == Objective || sec == Constraints) {
            // row label ("obj" / "c0") tokens are names not followed by digits rule:
            // labels were emitted before ':' which tokenizer dropped; they parse as
            // bare words here. Skip anything that is neither number, sign, rel, nor var.
            if (t == "+") {
                sign = 1.0;
                ++i;
                continue;
            }
            if (t == "-") {
                sign = -1.0;
                ++i;
                continue;
            }
            if (t == "<=" || t == ">=" || t == "=") {
                // finish current row: next token is rhs
                double rhs = 0.0;
                if (i + 1 >= toks.size() || !is_number(toks[i + 1], rhs))
                    throw std::runtime_error("LP parse: expected rhs after relation");
                if (sec != Constraints) throw std::runtime_error("LP parse: relation in objective");
                raw_rows.back().rel = t == "<=" ? Relation::LE : (t == ">=" ? Relation::GE : Relation::EQ);
                raw_rows.back().rhs = rhs;
                target = nullptr;
                i += 2;
                continue;
            }
            double num;
            int idx;
            bool bin;
            if (is_number(t, num)) {
                pending_coef = sign * num;
                have_coef = true;
                sign = 1.0;
                ++i;
                continue;
            }
            if (parse_var(t, idx, bin)) {
                if (sec == Constraints && target == nullptr) {
                    raw_rows.emplace_back();
                    target = &raw_rows.back().terms;
                }
                double c = have_coef ? pending_coef : sign;
                target->emplace_back(bin, idx, c);
                note_var(bin, idx);
                have_coef = false;
                sign = 1.0;
                ++i;
                continue;
            }
            // row label such as "c0" (tokenizer removed the colon): starts a new row
            if (sec == Constraints) {
                raw_rows.emplace_back();
                target = &raw_rows.back().terms;
            }
            ++i;
            continue;
        }

        if (sec == Bounds) {
            // forms: "lo <= var <= hi", "var free"
            double lo;
            int idx;
            bool bin;
            if (is_number(t, lo)) {
                if (i + 2 < toks.size() && toks[i + 1] == "<=" && parse_var(toks[i + 2], idx, bin)) {
                    double hi = std::numeric_limits<double>::infinity();
                    std::size_t next = i + 3;
                    if (next + 1 < toks.size() && toks[next] == "<=") {
                        if (!is_number(toks[next + 1], hi))
                            throw std::runtime_error("LP parse: bad upper bound");
                        next += 2;
                    }
                    bounds[{bin, idx}] = {lo, hi};
                    note_var(bin, idx);
                    i = next;
                    continue;
                }
            }
            if (parse_var(t, idx, bin)) {
                if (i + 1 < toks.size() && lower(toks[i + 1]) == "free") {
                    bounds[{bin, idx}] = {-std::numeric_limits<double>::infinity(),
                                          std::numeric_limits<double>::infinity()};
                    note_var(bin, idx);
                    i += 2;
                    continue;
                }
            }
            ++i;
            continue;
        }

        if (sec == Binaries) {
            int idx;
            bool bin;
            if (parse_var(t, idx, bin) && bin) note_var(true, idx);
            ++i;
            continue;
        }
        ++i;
    }

    BinaryLinearProgram p;
    p.num_binary = max_bin + 1;
    p.num_continuous = max_cont + 1;
    p.objective.assign(p.num_vars(), 0.0);
    p.lower.assign(p.num_vars(), 0.0);
    p.upper.assign(p.num_vars(), 0.0);
    for (int j = 0; j < p.num_binary; ++j) {
        p.lower[j] = 0.0;
        p.upper[j] = 1.0;
    }
    for (int j = 0; j < p.num_continuous; ++j) {
        p.lower[p.num_binary + j] = 0.0;
        p.upper[p.num_binary + j] = std::numeric_limits<double>::infinity();
    }
    auto global = [&](bool bin, int idx) { return bin ? idx : p.num_binary + idx; };
    for (auto [bin, idx, c] : obj_terms) p.objective[global(bin, idx)] += c;
    for (const auto& rr : raw_rows) {
        LinearConstraint row;
        row.rel = rr.rel;
        row.rhs = rr.rhs;
        for (auto [bin, idx, c] : rr.terms) row.terms.emplace_back(global(bin, idx), c);
        p.rows.push_back(std::move(row));
    }
    for (auto& [key, lohi] : bounds) {
        const int j = global(key.first, key.second);
        p.lower[j] = lohi.first;
        p.upper[j] = lohi.second;
    }
    return p;
}

BinaryLinearProgram import_lp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open LP file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return lp_from_string(ss.str());
}

}  // namespace shp
