#ifndef CARLITZ_CLI_APP_HPP
#define CARLITZ_CLI_APP_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "carlitz/carlitz.hpp"

namespace carlitz_cli {

using namespace carlitz;

struct Options {
    std::int64_t q = 2;
    int s = 0;
    int n = 1;
    std::int64_t prec = 10;
    int order = 4;
    std::string method = "both";
    std::string format = "text";
    std::string module = "carlitz";
    std::string alpha_str;
    std::string prime_str;
    std::string a_str;
    std::string chi = "all";
    std::string lattice = "preset:zeta1";
    std::string h_str = "1";
    std::string out_path;
};

inline std::pair<std::int64_t, int> split_prime_power(std::int64_t q) {
    if (q < 2) throw UsageError("q must be a prime power >= 2");
    std::int64_t p = 0;
    for (std::int64_t d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) return {q, 1};
    int e = 0;
    std::int64_t t = q;
    while (t % p == 0) {
        t /= p;
        ++e;
    }
    if (t != 1) throw UsageError("q must be a prime power");
    return {p, e};
}

inline const KField* make_field(const Options& o) {
    auto [p, e] = split_prime_power(o.q);
    return KField::get(p, e, 1, o.s);
}

inline AndersonModule make_module(const Options& o, const KField* f) {
    std::string m = o.module;
    if (m == "carlitz") return carlitz_module(f);
    if (m == "cn" || m == "C^n") return e_alpha_module(ThetaPoly::one(f), o.n);
    if (m == "e-alpha" || m == "E_alpha") {
        if (o.alpha_str.empty()) throw UsageError("--alpha is required for module e-alpha");
        ThetaPoly alpha = parse_theta_poly(o.alpha_str, f);
        return e_alpha_module(alpha, o.n);
    }
    throw UsageError("unknown module '" + m + "' (use carlitz, cn, or e-alpha)");
}

inline bool is_irreducible(const GFContext* base, const ThetaPoly& f) {
    if (f.deg() < 1) return false;
    for (const auto& P : enumerate_primes(base, std::max(1, f.deg() / 2))) {
        ThetaPoly q, r;
        divrem(f, P.lift(f.field()), q, r);
        if (r.is_zero()) return f.deg() == P.deg();
    }
    return true;
}

inline PrimePoly parse_prime(const std::string& s, const KField* f) {
    ThetaPoly p = parse_theta_poly(s, f);
    if (p.is_zero() || !p.is_monic()) throw UsageError("--prime must be monic");
    for (const auto& c : p.coeffs())
        if (!c.is_scalar() || !f->k->in_subfield(f->base, c.scalar_code()))
            throw UsageError("--prime must have GF(q) coefficients");
    if (!is_irreducible(f->base, p)) throw UsageError("--prime is not irreducible");
    PrimePoly P;
    P.base = f->base;
    for (int i = 0; i <= p.deg(); ++i)
        P.c.push_back(f->k->restrict_to(f->base, p.coeff(i).scalar_code()));
    return P;
}

inline json config_echo(const std::string& cmd, const Options& o) {
    json j;
    j["command"] = cmd;
    j["q"] = o.q;
    j["s"] = o.s;
    j["n"] = o.n;
    j["prec"] = o.prec;
    if (cmd == "zeta" || cmd == "pellarin" || cmd == "euler-check") j["method"] = o.method;
    if (cmd == "exp-coeffs") j["order"] = o.order;
    if (cmd == "fitting" || cmd == "exp-coeffs") {
        j["module"] = o.module;
        if (!o.alpha_str.empty()) j["alpha"] = o.alpha_str;
    }
    if (cmd == "fitting") j["prime"] = o.prime_str;
    if (cmd == "goss" || cmd == "cyclotomic") j["a"] = o.a_str;
    if (cmd == "goss") j["chi"] = o.chi;
    if (cmd == "class-check") {
        j["module"] = o.module;
        j["lattice"] = o.lattice;
        j["h"] = o.h_str;
    }
    return j;
}

// ---------------------------------------------------------------------------
// command bodies; each returns the JSON report and fills a text rendering
// ---------------------------------------------------------------------------

inline json cmd_lvalue_pair(const Options& o, const std::string& cmd, std::string& text) {
    const KField* f = make_field(o);
    std::optional<LValue> ev, sv;
    if (o.method == "euler" || o.method == "both") {
        ThetaPoly alpha = o.s ? lsdetail::pellarin_alpha(f, o.s) : ThetaPoly::one(f);
        ev = euler_product(e_alpha_module(alpha, o.n), o.prec);
    }
    if (o.method == "sum" || o.method == "both") {
        sv = o.s ? pellarin_value(f, o.n, o.prec) : carlitz_zeta(f, o.n, o.prec);
    }
    json j;
    j["schema"] = kSchema;
    j["config"] = config_echo(cmd, o);
    std::ostringstream ts;
    if (ev) {
        j["euler"] = lvalue_to_json(*ev);
        ts << "euler: " << laurent_to_string(ev->value) << "\n";
    }
    if (sv) {
        j["sum"] = lvalue_to_json(*sv);
        ts << "sum:   " << laurent_to_string(sv->value) << "\n";
    }
    if (ev && sv) {
        bool ok = agree(ev->value, sv->value);
        j["agree"] = ok;
        LaurentSeries res = ev->value - sv->value;
        j["residual_valuation"] =
            res.is_zero() ? json("inf") : json(res.valuation());
        ts << "agree: " << (ok ? "true" : "false") << "\n";
    }
    text = ts.str();
    return j;
}

inline json cmd_fitting(const Options& o, std::string& text) {
    const KField* f = make_field(o);
    AndersonModule E = make_module(o, f);
    PrimePoly P = parse_prime(o.prime_str, f);
    FiniteModule lie = lie_mod_p(E, P);
    FiniteModule em = e_mod_p(E, P);
    ThetaPoly gl = fitting_generator(lie);
    ThetaPoly ge = fitting_generator(em);
    json j;
    j["schema"] = kSchema;
    j["config"] = config_echo("fitting", o);
    j["lie"] = theta_poly_to_string(gl);
    j["e"] = theta_poly_to_string(ge);
    json inv = json::array();
    for (const auto& d : invariant_factors(em)) inv.push_back(theta_poly_to_string(d));
    j["e_invariant_factors"] = inv;
    if (auto alpha = E.e_alpha_form()) j["rho"] = kelem_to_string(rho(*alpha, P));
    text = theta_poly_to_string(ge) + "\n";
    return j;
}

inline json cmd_exp_coeffs(const Options& o, std::string& text) {
    const KField* f = make_field(o);
    AndersonModule E = make_module(o, f);
    ExpSeries S = exp_coefficients(E, o.order);
    json j = exp_series_to_json(E, S.coef);
    j["config"] = config_echo("exp-coeffs", o);
    std::ostringstream ts;
    for (int k = 0; k <= S.order(); ++k) {
        ts << "e_" << k << ":";
        for (int r = 0; r < E.dim(); ++r)
            for (int c = 0; c < E.dim(); ++c)
                ts << " " << theta_frac_to_string(S.coef[k].at(r, c).to_frac());
        ts << "\n";
    }
    text = ts.str();
    return j;
}

inline json cmd_class_check(const Options& o, std::string& text) {
    if (o.module != "carlitz")
        throw UsageError("class-check currently ships the carlitz preset only");
    if (o.lattice != "preset:zeta1")
        throw UsageError("unknown lattice '" + o.lattice + "' (use preset:zeta1)");
    const KField* f = make_field(o);
    AndersonModule C = carlitz_module(f);
    std::int64_t wp = 2 * o.prec + 8;
    LValue z = carlitz_zeta(f, 1, wp);
    LatticeBasis lat{{LieVector{z.value}}};
    ThetaPoly h = parse_theta_poly(o.h_str, f);
    ClassFormulaReport rep = class_formula_residual(C, lat, h, o.prec);
    // membership certificate: exp maps the generator into the integral points
    LieVector img = exp_eval(C, LieVector{z.value}, o.prec);
    LaurentSeries cert = img[0] - LaurentSeries::one(f, o.prec);
    bool exp_ok = cert.is_zero();
    json j;
    j["schema"] = kSchema;
    j["config"] = config_echo("class-check", o);
    j["pass"] = rep.pass;
    j["residual_valuation"] =
        rep.residual_valuation >= kValInf ? json("inf") : json(rep.residual_valuation);
    j["lhs"] = lvalue_to_json(rep.lhs);
    j["rhs"] = laurent_to_json(rep.rhs);
    j["lattice_index"] = laurent_to_json(rep.index);
    j["exp_generator_certified"] = exp_ok;
    std::ostringstream ts;
    ts << (rep.pass ? "PASS" : "FAIL") << " residual valuation ";
    if (rep.residual_valuation >= kValInf) ts << "inf";
    else ts << rep.residual_valuation;
    ts << " (prec " << o.prec << ")\n";
    ts << "exp certificate: " << (exp_ok ? "ok" : "FAILED") << "\n";
    text = ts.str();
    return j;
}

inline json cmd_goss(const Options& o, std::string& text) {
    Options oo = o;
    oo.s = 0;
    const KField* f = make_field(oo);
    ThetaPoly a = parse_theta_poly(o.a_str, f);
    CycField L(a);
    std::vector<Character> chis;
    if (o.chi == "all") {
        chis = all_characters(L);
    } else if (o.chi == "1") {
        Character c;
        c.N.assign(L.factors().size(), 0);
        chis.push_back(c);
    } else {
        Character c;
        std::stringstream ss(o.chi);
        std::string tok;
        while (std::getline(ss, tok, ',')) c.N.push_back(std::stoll(tok));
        if (c.N.size() != L.factors().size())
            throw UsageError("--chi needs one exponent per prime factor of a");
        for (size_t i = 0; i < c.N.size(); ++i)
            if (c.N[i] < 0 || c.N[i] >= L.component_orders()[i])
                throw UsageError("--chi exponent out of range");
        chis.push_back(c);
    }
    json comps = json::array();
    std::ostringstream ts;
    for (const auto& chi : chis) {
        LValue v = goss_l_value(L, chi, o.n, o.prec);
        std::string name;
        for (size_t i = 0; i < chi.N.size(); ++i)
            name += (i ? "," : "") + std::to_string(chi.N[i]);
        comps.push_back({{"chi", name}, {"value", lvalue_to_json(v)}});
        ts << "chi=(" << name << "): " << laurent_to_string(v.value) << "\n";
    }
    json j;
    j["schema"] = kSchema;
    j["config"] = config_echo("goss", o);
    j["components"] = comps;
    text = ts.str();
    return j;
}

inline json cmd_cyclotomic(const Options& o, std::string& text) {
    Options oo = o;
    oo.s = 0;
    const KField* f = make_field(oo);
    ThetaPoly a = parse_theta_poly(o.a_str, f);
    CycField L(a);
    EtaCertificate cert = eta_generator_check(L);
    json j;
    j["schema"] = kSchema;
    j["config"] = config_echo("cyclotomic", o);
    {
        std::string phi;
        const auto& Phi = L.defining_poly();
        for (size_t i = Phi.size(); i-- > 0;) {
            if (Phi[i].is_zero()) continue;
            if (!phi.empty()) phi += "+";
            std::string cs = theta_poly_to_string(Phi[i]);
            if (cs.find('+') != std::string::npos) cs = "(" + cs + ")";
            if (i == 0) phi += cs;
            else if (cs == "1") phi += "x^" + std::to_string(i);
            else phi += cs + "*x^" + std::to_string(i);
        }
        j["phi"] = phi;
    }
    j["group_order"] = L.group_order();
    json chars = json::array();
    bool all_tau = true;
    for (const auto& chi : all_characters(L)) {
        std::string name;
        for (size_t i = 0; i < chi.N.size(); ++i)
            name += (i ? "," : "") + std::to_string(chi.N[i]);
        bool ok = gauss_thakur_tau_equation(L, chi);
        all_tau = all_tau && ok;
        chars.push_back({{"chi", name}, {"tau_equation", ok}});
    }
    j["characters"] = chars;
    j["eta_pass"] = cert.pass;
    j["eta_det"] = theta_poly_to_string(cert.det);
    std::ostringstream ts;
    ts << "phi: " << j["phi"].get<std::string>() << "\n";
    ts << "group order: " << L.group_order() << "\n";
    ts << "tau equations: " << (all_tau ? "ok" : "FAILED") << "\n";
    ts << "eta generator: " << (cert.pass ? "PASS" : "FAIL") << " (det "
       << theta_poly_to_string(cert.det) << ")\n";
    text = ts.str();
    return j;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact function-field L-values and class-formula checks"};
    app.set_config("--config", "", "TOML config mirroring the flags");
    app.require_subcommand(1);

    Options o;
    auto add_common = [&](CLI::App* c, bool with_n = true) {
        c->add_option("--q", o.q, "base field size (prime power)");
        if (with_n) c->add_option("--n", o.n, "weight / module dimension");
        c->add_option("--prec", o.prec, "absolute 1/T precision");
        c->add_option("--format", o.format, "json|text")
            ->check(CLI::IsMember({"json", "text"}));
        c->add_option("--out", o.out_path, "write the report to a file");
    };

    auto* zeta = app.add_subcommand("zeta", "Carlitz zeta value");
    add_common(zeta);
    zeta->add_option("--method", o.method, "euler|sum|both")
        ->check(CLI::IsMember({"euler", "sum", "both"}));

    auto* pell = app.add_subcommand("pellarin", "Pellarin L-value");
    add_common(pell);
    pell->add_option("--s", o.s, "number of t-variables (1 or 2)");
    pell->add_option("--method", o.method, "euler|sum|both")
        ->check(CLI::IsMember({"euler", "sum", "both"}));

    auto* goss = app.add_subcommand("goss", "Goss L-values for a cyclotomic conductor");
    add_common(goss);
    goss->add_option("--a", o.a_str, "squarefree monic conductor")->required();
    goss->add_option("--chi", o.chi, "\"all\", \"1\", or exponents \"N1,N2\"");

    auto* fit = app.add_subcommand("fitting", "Fitting generators at a prime");
    add_common(fit);
    fit->add_option("--module", o.module, "carlitz|cn|e-alpha");
    fit->add_option("--alpha", o.alpha_str, "twist polynomial for e-alpha");
    fit->add_option("--s", o.s, "t-variables available to alpha");
    fit->add_option("--prime", o.prime_str, "monic irreducible over GF(q)")->required();

    auto* expc = app.add_subcommand("exp-coeffs", "exponential coefficient matrices");
    add_common(expc);
    expc->add_option("--module", o.module, "carlitz|cn|e-alpha");
    expc->add_option("--alpha", o.alpha_str, "twist polynomial for e-alpha");
    expc->add_option("--s", o.s, "t-variables available to alpha");
    expc->add_option("--order", o.order, "truncation order in tau");

    auto* ec = app.add_subcommand("euler-check", "Euler product vs direct summation");
    add_common(ec);
    ec->add_option("--s", o.s, "number of t-variables (0..2)");

    auto* cc = app.add_subcommand("class-check", "class formula residual");
    add_common(cc, false);
    cc->add_option("--module", o.module, "carlitz");
    cc->add_option("--lattice", o.lattice, "preset:zeta1");
    cc->add_option("--h", o.h_str, "class module Fitting generator");

    auto* cyc = app.add_subcommand("cyclotomic", "cyclotomic field diagnostics");
    add_common(cyc, false);
    cyc->add_option("--a", o.a_str, "squarefree monic conductor")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help() << std::flush;
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    std::string cmd;
    for (auto* sc : app.get_subcommands()) cmd = sc->get_name();

    try {
        split_prime_power(o.q);  // validate early
        if (o.s < 0 || o.s > 2) throw UsageError("s must be 0, 1 or 2");
        std::string text;
        json j;
        if (cmd == "zeta") {
            if (o.s != 0) throw UsageError("zeta takes s = 0");
            j = cmd_lvalue_pair(o, "zeta", text);
        } else if (cmd == "pellarin") {
            if (o.s < 1) throw UsageError("pellarin needs --s 1 or --s 2");
            j = cmd_lvalue_pair(o, "pellarin", text);
        } else if (cmd == "euler-check") {
            Options oo = o;
            oo.method = "both";
            j = cmd_lvalue_pair(oo, "euler-check", text);
        } else if (cmd == "fitting") {
            j = cmd_fitting(o, text);
        } else if (cmd == "exp-coeffs") {
            j = cmd_exp_coeffs(o, text);
        } else if (cmd == "class-check") {
            j = cmd_class_check(o, text);
        } else if (cmd == "goss") {
            j = cmd_goss(o, text);
        } else if (cmd == "cyclotomic") {
            j = cmd_cyclotomic(o, text);
        } else {
            throw UsageError("unknown command");
        }
        std::string rendered = (o.format == "json") ? j.dump(2) + "\n" : text;
        if (!o.out_path.empty()) {
            std::ofstream f(o.out_path, std::ios::binary);
            if (!f) throw DomainError("cannot open output file: " + o.out_path);
            f << rendered;
        } else {
            out << rendered;
        }
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        json ej;
        ej["schema"] = kSchema;
        ej["error"] = {{"kind", "computation"}, {"message", e.what()}};
        err << ej.dump(2) << "\n";
        return 1;
    }
}

}  // namespace carlitz_cli

#endif
