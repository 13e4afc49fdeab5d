#ifndef CARLITZ_IO_HPP
#define CARLITZ_IO_HPP

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "carlitz/frac.hpp"
#include "carlitz/lseries.hpp"

namespace carlitz {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "carlitz-lab/1";

// ---------------------------------------------------------------------------
// Printing. Canonical text forms: theta is `T`, the indeterminates are
// `t1`, `t2`; terms descend by theta-degree, monomials descend in graded
// lex; GF(q) constants print as integers below p and as `g<code>` above.
// ---------------------------------------------------------------------------
namespace iodetail {

inline std::string code_str(const GFContext* F, code_t c) {
    if (c < F->p()) return std::to_string(c);
    return "g" + std::to_string(c);
}

inline std::string monomial_str(const GFContext* F, code_t c, int i, int j) {
    std::string var;
    if (i > 0) {
        var += "t1";
        if (i > 1) var += "^" + std::to_string(i);
    }
    if (j > 0) {
        if (!var.empty()) var += "*";
        var += "t2";
        if (j > 1) var += "^" + std::to_string(j);
    }
    if (var.empty()) return code_str(F, c);
    if (c == 1) return var;
    return code_str(F, c) + "*" + var;
}

}  // namespace iodetail

// polynomial part of a coefficient-field element
inline std::string bpoly_to_string(const GFContext* F, const BPoly& b) {
    if (bis_zero(b)) return "0";
    // collect monomials, graded lex descending
    struct Term {
        int i, j;
        code_t c;
    };
    std::vector<Term> terms;
    for (size_t j = 0; j < b.size(); ++j)
        for (size_t i = 0; i < b[j].size(); ++i)
            if (b[j][i]) terms.push_back({static_cast<int>(i), static_cast<int>(j), b[j][i]});
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& bb) {
        int da = a.i + a.j, db = bb.i + bb.j;
        if (da != db) return da > db;
        if (a.j != bb.j) return a.j > bb.j;
        return a.i > bb.i;
    });
    std::string out;
    for (const auto& t : terms) {
        if (!out.empty()) out += "+";
        out += iodetail::monomial_str(F, t.c, t.i, t.j);
    }
    return out;
}

inline std::string kelem_to_string(const KElem& x) {
    if (x.is_zero()) return "0";
    const GFContext* F = x.gf();
    if (x.is_scalar()) return iodetail::code_str(F, x.scalar_code());
    std::string num = bpoly_to_string(F, x.num());
    if (x.is_polynomial()) return num;
    return "(" + num + ")/(" + bpoly_to_string(F, x.den()) + ")";
}

inline std::string theta_poly_to_string(const ThetaPoly& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (int k = f.deg(); k >= 0; --k) {
        KElem c = f.coeff(k);
        if (c.is_zero()) continue;
        if (!out.empty()) out += "+";
        std::string cs = kelem_to_string(c);
        bool needs_parens = cs.find('+') != std::string::npos && cs.front() != '(';
        if (needs_parens) cs = "(" + cs + ")";
        if (k == 0) {
            out += cs;
        } else {
            std::string tpart = k == 1 ? "T" : "T^" + std::to_string(k);
            out += (c.is_one() ? tpart : cs + "*" + tpart);
        }
    }
    return out;
}

inline std::string theta_frac_to_string(const ThetaFrac& f) {
    if (f.is_polynomial()) return theta_poly_to_string(f.num());
    return "(" + theta_poly_to_string(f.num()) + ")/(" + theta_poly_to_string(f.den()) + ")";
}

// ---------------------------------------------------------------------------
// Parsing: grammar over + - * ^ / with parentheses, variables T, t1, t2,
// integer constants and g-codes. Parse errors carry the offset.
// ---------------------------------------------------------------------------
namespace iodetail {

class Parser {
  public:
    Parser(const std::string& s, const KField* f) : s_(s), f_(f) {}

    ThetaFrac parse() {
        ThetaFrac r = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return r;
    }

  private:
    [[noreturn]] void fail(const std::string& what) {
        throw UsageError("parse error at position " + std::to_string(pos_) + ": " + what);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    ThetaFrac expr() {
        ThetaFrac acc = term();
        while (true) {
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else return acc;
        }
    }
    ThetaFrac term() {
        ThetaFrac acc = factor();
        while (true) {
            if (eat('*')) acc = acc * factor();
            else if (eat('/')) acc = acc / factor();
            else return acc;
        }
    }
    ThetaFrac factor() {
        if (eat('-')) return -factor();
        ThetaFrac base = atom();
        if (eat('^')) {
            std::int64_t e = integer();
            if (e < 0) fail("negative exponent");
            ThetaFrac r = ThetaFrac::one(f_);
            ThetaFrac b = base;
            while (e > 0) {
                if (e & 1) r = r * b;
                b = b * b;
                e >>= 1;
            }
            return r;
        }
        return base;
    }
    ThetaFrac atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ThetaFrac r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (c == 'T') {
            ++pos_;
            return ThetaFrac(ThetaPoly::theta(f_));
        }
        if (c == 't') {
            ++pos_;
            if (pos_ >= s_.size() || (s_[pos_] != '1' && s_[pos_] != '2'))
                fail("expected t1 or t2");
            int idx = s_[pos_] - '1';
            ++pos_;
            if (idx >= f_->s) fail("t-variable not available in this field");
            return ThetaFrac(ThetaPoly::constant(KElem::t_var(f_, idx)));
        }
        if (c == 'g') {
            ++pos_;
            std::int64_t code = integer();
            if (code < 0 || code >= f_->k->size()) fail("g-code out of range");
            return ThetaFrac(ThetaPoly::constant(KElem::scalar(f_, code)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::int64_t v = integer();
            return ThetaFrac(ThetaPoly::constant(KElem::from_int(f_, v)));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    std::int64_t integer() {
        skip_ws();
        size_t start = pos_;
        bool neg = false;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            neg = true;
            ++pos_;
        }
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        if (pos_ == start + (neg ? 1 : 0)) fail("expected an integer");
        return neg ? -v : v;
    }

    const std::string& s_;
    const KField* f_;
    size_t pos_ = 0;
};

}  // namespace iodetail

inline ThetaFrac parse_theta_frac(const std::string& s, const KField* f) {
    return iodetail::Parser(s, f).parse();
}

inline ThetaPoly parse_theta_poly(const std::string& s, const KField* f) {
    ThetaFrac r = parse_theta_frac(s, f);
    if (!r.is_polynomial()) throw UsageError("expected a polynomial, got a fraction: " + s);
    return r.num();
}

inline KElem parse_kelem(const std::string& s, const KField* f) {
    ThetaFrac r = parse_theta_frac(s, f);
    if (r.num().deg() > 0 || r.den().deg() > 0)
        throw UsageError("expected a coefficient (no T): " + s);
    if (r.is_zero()) return KElem::zero(f);
    return r.num().coeff(0) / r.den().coeff(0);
}

inline std::string laurent_to_string(const LaurentSeries& x) {
    std::string out;
    for (std::int64_t d = x.top_deg(); d >= -x.prec() && !x.is_zero(); --d) {
        KElem c = x.coeff(d);
        if (c.is_zero()) continue;
        if (!out.empty()) out += "+";
        std::string cs = kelem_to_string(c);
        bool parens = cs.find('+') != std::string::npos && cs.front() != '(';
        if (parens) cs = "(" + cs + ")";
        if (d == 0) {
            out += cs;
        } else {
            std::string tp = "T^" + std::to_string(d);
            if (d == 1) tp = "T";
            out += c.is_one() ? tp : cs + "*" + tp;
        }
    }
    if (out.empty()) out = "0";
    out += " + O(T^" + std::to_string(-(x.prec() + 1)) + ")";
    return out;
}

// ---------------------------------------------------------------------------
// JSON forms.
// ---------------------------------------------------------------------------
inline json field_to_json(const KField* f) {
    json j;
    j["p"] = f->p();
    j["e"] = f->e();
    j["s"] = f->s;
    if (f->m() != 1) j["m"] = f->m();
    return j;
}

inline const KField* field_from_json(const json& j) {
    int m = j.contains("m") ? j.at("m").get<int>() : 1;
    return KField::get(j.at("p").get<std::int64_t>(), j.at("e").get<int>(), m,
                       j.at("s").get<int>());
}

inline json laurent_to_json(const LaurentSeries& x) {
    json j;
    j["prec"] = x.prec();
    json terms = json::array();
    for (std::int64_t d = x.top_deg(); d >= -x.prec(); --d) {
        if (x.is_zero()) break;
        KElem c = x.coeff(d);
        if (c.is_zero()) continue;
        terms.push_back({{"deg", d}, {"coeff", kelem_to_string(c)}});
    }
    j["terms"] = terms;
    j["field"] = field_to_json(x.field());
    return j;
}

inline LaurentSeries laurent_from_json(const json& j) {
    const KField* f = field_from_json(j.at("field"));
    LaurentSeries x(f, j.at("prec").get<std::int64_t>());
    for (const auto& t : j.at("terms"))
        x.set(t.at("deg").get<std::int64_t>(),
              parse_kelem(t.at("coeff").get<std::string>(), f));
    return x;
}

inline json lvalue_to_json(const LValue& v) {
    json j;
    j["schema"] = kSchema;
    j["kind"] = "lvalue";
    j["module"] = v.module_desc;
    j["n"] = v.n;
    j["s"] = v.s;
    j["prec"] = v.prec;
    j["degree_bound"] = v.degree_bound;
    j["method"] = v.method == LMethod::euler ? "euler" : "sum";
    j["value"] = laurent_to_json(v.value);
    return j;
}

inline json finite_module_to_json(const FiniteModule& M) {
    json j;
    j["dim"] = M.dim();
    json rows = json::array();
    for (int i = 0; i < M.dim(); ++i) {
        json row = json::array();
        for (int k = 0; k < M.dim(); ++k) row.push_back(kelem_to_string(M.T.at(i, k)));
        rows.push_back(row);
    }
    j["theta_matrix"] = rows;
    return j;
}

inline FiniteModule finite_module_from_json(const json& j, const KField* f) {
    int n = j.at("dim").get<int>();
    Matrix<KElem> T(n, n, KElem::zero(f));
    const auto& rows = j.at("theta_matrix");
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            T.at(i, k) = parse_kelem(rows.at(i).at(k).get<std::string>(), f);
    return FiniteModule{f, std::move(T)};
}

template <class E>
json skew_to_json(const SkewPolyT<E>& g) {
    json out = json::array();
    for (int j = 0; j <= g.tau_deg(); ++j) {
        json entry;
        entry["tau_deg"] = j;
        json rows = json::array();
        for (int r = 0; r < g.dim(); ++r) {
            json row = json::array();
            for (int c = 0; c < g.dim(); ++c) {
                if constexpr (std::is_same_v<E, ThetaPoly>)
                    row.push_back(theta_poly_to_string(g.coeffs()[j].at(r, c)));
                else
                    row.push_back(theta_frac_to_string(g.coeffs()[j].at(r, c)));
            }
            rows.push_back(row);
        }
        entry["matrix"] = rows;
        out.push_back(entry);
    }
    return out;
}

template <class E>
std::string skew_to_string(const SkewPolyT<E>& g) {
    if (g.is_zero()) return "0";
    std::string out;
    for (int j = 0; j <= g.tau_deg(); ++j) {
        if (!out.empty()) out += " + ";
        out += "[";
        for (int r = 0; r < g.dim(); ++r) {
            if (r) out += "; ";
            out += "[";
            for (int c = 0; c < g.dim(); ++c) {
                if (c) out += ", ";
                if constexpr (std::is_same_v<E, ThetaPoly>)
                    out += theta_poly_to_string(g.coeffs()[j].at(r, c));
                else
                    out += theta_frac_to_string(g.coeffs()[j].at(r, c));
            }
            out += "]";
        }
        out += "]tau^" + std::to_string(j);
    }
    return out;
}

// {"module": "C^n"|"E_alpha", "n": ..., "alpha": ..., "coeffs": [{"j", "matrix"}]}
inline json exp_series_to_json(const AndersonModule& E, const std::vector<Matrix<FactoredFrac>>& coef) {
    json j;
    j["schema"] = kSchema;
    j["kind"] = "exp-series";
    auto alpha = E.e_alpha_form();
    bool is_cn = alpha && *alpha == ThetaPoly::one(E.field());
    j["module"] = is_cn ? "C^n" : "E_alpha";
    j["n"] = E.dim();
    j["alpha"] = alpha ? theta_poly_to_string(*alpha) : std::string("-");
    json coeffs = json::array();
    for (size_t k = 0; k < coef.size(); ++k) {
        json entry;
        entry["j"] = k;
        json rows = json::array();
        for (int r = 0; r < E.dim(); ++r) {
            json row = json::array();
            for (int c = 0; c < E.dim(); ++c)
                row.push_back(theta_frac_to_string(coef[k].at(r, c).to_frac()));
            rows.push_back(row);
        }
        entry["matrix"] = rows;
        coeffs.push_back(entry);
    }
    j["coeffs"] = coeffs;
    return j;
}

}  // namespace carlitz

#endif
