#ifndef CARLITZ_CYCLOTOMIC_HPP
#define CARLITZ_CYCLOTOMIC_HPP

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "carlitz/lseries.hpp"

namespace carlitz {

// coefficients embedded into a larger constant field (same p, e; m | m')
inline ThetaPoly embed_scalars(const ThetaPoly& f, const KField* to) {
    const KField* from = f.field();
    std::vector<KElem> c;
    c.reserve(f.deg() + 1);
    for (int i = 0; i <= f.deg(); ++i)
        c.push_back(KElem::scalar(to, to->k->embed(from->k, f.coeff(i).scalar_code())));
    return ThetaPoly(to, std::move(c));
}

// ---------------------------------------------------------------------------
// Carlitz action polynomials. C_b(x) is GF(q)-linear; we keep the
// x^(q^i)-coefficients and expand to a dense x-polynomial on demand.
// ---------------------------------------------------------------------------
namespace cydetail {

// linear coefficients of C_b: entry i multiplies x^(q^i)
inline std::vector<ThetaPoly> carlitz_linear(const ThetaPoly& b) {
    const KField* f = b.field();
    // C_{theta^(j+1)} = theta*C_{theta^j} + (C_{theta^j})^q
    std::vector<std::vector<ThetaPoly>> pow;  // pow[j] = coefficients of C_{theta^j}
    pow.push_back({ThetaPoly::one(f)});
    for (int j = 1; j <= b.deg(); ++j) {
        const auto& prev = pow.back();
        std::vector<ThetaPoly> cur(prev.size() + 1, ThetaPoly::zero(f));
        ThetaPoly th = ThetaPoly::theta(f);
        for (size_t i = 0; i < prev.size(); ++i) {
            cur[i] = cur[i] + th * prev[i];
            cur[i + 1] = cur[i + 1] + frobenius_twist(prev[i], 1);
        }
        pow.push_back(std::move(cur));
    }
    std::vector<ThetaPoly> out(b.deg() + 1, ThetaPoly::zero(f));
    for (int j = 0; j <= b.deg(); ++j) {
        KElem c = b.coeff(j);
        if (c.is_zero()) continue;
        for (size_t i = 0; i < pow[j].size(); ++i) out[i] = out[i] + pow[j][i] * c;
    }
    while (!out.empty() && out.back().is_zero()) out.pop_back();
    return out;
}

// dense x-polynomial over ThetaPoly
using XPoly = std::vector<ThetaPoly>;

inline XPoly to_dense(const std::vector<ThetaPoly>& lin, std::int64_t q) {
    if (lin.empty()) return {};
    std::int64_t top = 1;
    for (size_t i = 1; i < lin.size(); ++i) top *= q;
    if (top > (1 << 20)) throw UsageError("carlitz polynomial too large");
    const KField* f = lin[0].field();
    XPoly out(top + 1, ThetaPoly::zero(f));
    std::int64_t pw = 1;
    for (size_t i = 0; i < lin.size(); ++i) {
        out[pw] = lin[i];
        if (i + 1 < lin.size()) pw *= q;
    }
    return out;
}

inline void xp_trim(XPoly& a) {
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline XPoly xp_mul(const XPoly& a, const XPoly& b) {
    if (a.empty() || b.empty()) return {};
    const KField* f = a[0].field();
    XPoly r(a.size() + b.size() - 1, ThetaPoly::zero(f));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] = r[i + j] + a[i] * b[j];
    }
    xp_trim(r);
    return r;
}

// division by a divisor monic in x; exact by construction
inline XPoly xp_divexact_monic(XPoly a, const XPoly& b) {
    if (b.empty() || !b.back().is_monic())
        throw InternalError("cyclotomic: divisor not monic in x");
    const KField* f = b[0].field();
    if (a.size() < b.size()) {
        xp_trim(a);
        if (!a.empty()) throw InternalError("cyclotomic: division not exact");
        return {};
    }
    XPoly q(a.size() - b.size() + 1, ThetaPoly::zero(f));
    for (size_t sh = a.size() - b.size() + 1; sh-- > 0;) {
        ThetaPoly c = a[sh + b.size() - 1];
        if (c.is_zero()) continue;
        q[sh] = c;
        for (size_t i = 0; i < b.size(); ++i) a[sh + i] = a[sh + i] - c * b[i];
    }
    xp_trim(a);
    if (!a.empty()) throw InternalError("cyclotomic: division not exact");
    return q;
}

// reduce mod a monic-in-x polynomial
inline XPoly xp_mod(XPoly a, const XPoly& m) {
    const size_t dm = m.size() - 1;
    while (a.size() > dm) {
        ThetaPoly c = a.back();
        size_t sh = a.size() - 1 - dm;
        if (!c.is_zero())
            for (size_t i = 0; i < dm; ++i) a[sh + i] = a[sh + i] - c * m[i];
        a.pop_back();
        xp_trim(a);
        if (a.size() <= dm) break;
    }
    return a;
}

}  // namespace cydetail

// Phi_a(x): the minimal polynomial of a generator of the a-torsion, from
// the Moebius product of the Carlitz polynomials of the monic divisors
inline cydetail::XPoly cyclotomic_poly(const ThetaPoly& a) {
    const KField* f = a.field();
    if (a.is_zero() || !a.is_monic() || a.deg() < 1)
        throw DomainError("cyclotomic_poly: a must be monic of positive degree");
    // factor a and reject square factors
    std::vector<ThetaPoly> primes;
    ThetaPoly rest = a;
    for (const auto& P : enumerate_primes(f->base, a.deg())) {
        ThetaPoly Pl = P.lift(f);
        ThetaPoly q, r;
        divrem(rest, Pl, q, r);
        if (!r.is_zero()) continue;
        ThetaPoly q2, r2;
        divrem(q, Pl, q2, r2);
        if (r2.is_zero()) throw DomainError("cyclotomic_poly: a must be squarefree");
        primes.push_back(Pl);
        rest = q;
        if (rest.deg() == 0) break;
    }
    std::int64_t units = 1;
    for (const auto& P : primes) {
        std::int64_t qd = 1;
        for (int i = 0; i < P.deg(); ++i) qd *= f->q();
        units *= qd - 1;
        if (units > 2000) throw UsageError("cyclotomic_poly: group too large");
    }
    // divisors e of a with their Moebius signs; e squarefree automatically
    cydetail::XPoly num{ThetaPoly::one(f)}, den{ThetaPoly::one(f)};
    size_t r = primes.size();
    for (size_t mask = 0; mask < (size_t(1) << r); ++mask) {
        ThetaPoly e = ThetaPoly::one(f);
        int bits = 0;
        for (size_t i = 0; i < r; ++i)
            if (mask & (size_t(1) << i)) {
                e = e * primes[i];
                ++bits;
            }
        ThetaPoly cof = divexact(a, e);
        auto lin = cydetail::carlitz_linear(cof);
        auto dense = cydetail::to_dense(lin, f->q());
        if (bits % 2 == 0) num = cydetail::xp_mul(num, dense);
        else den = cydetail::xp_mul(den, dense);
    }
    return cydetail::xp_divexact_monic(num, den);
}

// smallest-code root of P in GF(q^deg P)
inline GFElem teichmuller_root(const PrimePoly& P) {
    const GFContext* big = GFContext::get(P.base->p(), P.base->deg() * P.deg());
    for (code_t c = 0; c < big->size(); ++c) {
        code_t acc = 0;
        for (int i = P.deg(); i >= 0; --i)
            acc = big->add(big->mul(acc, c), big->embed(P.base, P.c[i]));
        if (acc == 0) return GFElem{c, big};
    }
    throw InternalError("teichmuller_root: no root found");
}

// the Teichmueller character value b(zeta_P); errors if P | b
inline GFElem teichmuller(const PrimePoly& P, const ThetaPoly& b) {
    GFElem z = teichmuller_root(P);
    const GFContext* big = z.F;
    const KField* fb = b.field();
    code_t acc = 0;
    for (int i = b.deg(); i >= 0; --i) {
        if (!b.coeff(i).is_scalar())
            throw DomainError("teichmuller: b must have constant coefficients");
        acc = big->add(big->mul(acc, z.v), big->embed(fb->k, b.coeff(i).scalar_code()));
    }
    if (acc == 0) throw DomainError("teichmuller: b vanishes mod P");
    return GFElem{acc, big};
}

// a character of (A/a)^* as Teichmueller exponents per prime factor
struct Character {
    std::vector<std::int64_t> N;  // 0 <= N_i <= q^(d_i) - 2

    bool trivial() const {
        for (auto v : N)
            if (v) return false;
        return true;
    }
};

// ---------------------------------------------------------------------------
// The cyclotomic field of a squarefree conductor: O_L = A[x]/(Phi_a), with
// the Galois action through the Carlitz polynomials and everything needed
// for Gauss-Thakur sums. Elements of F (x) O_L are x-polynomials over
// F[theta] where F is the compositum of the character value fields.
// ---------------------------------------------------------------------------
class CycField {
  public:
    using OLElem = cydetail::XPoly;  // over the compositum field, deg_x < Da

    explicit CycField(const ThetaPoly& a) : a_(a) {
        const KField* f = a.field();
        if (f->m() != 1 || f->s != 0)
            throw UsageError("CycField: conductor lives over GF(q)[theta]");
        base_ = f;
        Phi_base_ = cyclotomic_poly(a);
        Da_ = static_cast<int>(Phi_base_.size()) - 1;
        // factorization (ascending degree/code), roots, compositum
        for (const auto& P : enumerate_primes(f->base, a.deg())) {
            ThetaPoly Pl = P.lift(f);
            ThetaPoly q, r;
            divrem(a_, Pl, q, r);
            if (!r.is_zero()) continue;
            primes_.push_back(P);
        }
        int lcm = 1;
        for (const auto& P : primes_) lcm = std::lcm(lcm, P.deg());
        F_ = KField::get(f->p(), f->e(), lcm, 0);
        for (const auto& P : primes_) {
            GFElem z = teichmuller_root(P);
            zeta_.push_back(KElem::scalar(F_, F_->k->embed(z.F, z.v)));
            std::int64_t qd = 1;
            for (int i = 0; i < P.deg(); ++i) qd *= f->q();
            ord_.push_back(qd - 1);
        }
        Phi_F_.reserve(Phi_base_.size());
        for (const auto& c : Phi_base_) Phi_F_.push_back(embed_scalars(c, F_));
        // coprime residues representing the Galois group
        std::uint64_t total = 1;
        for (int i = 0; i < a_.deg(); ++i) total *= f->q();
        for (std::uint64_t code = 1; code < total; ++code) {
            std::vector<KElem> cf;
            std::uint64_t t = code;
            for (int i = 0; i < a_.deg(); ++i) {
                cf.push_back(KElem::scalar(f, f->k->embed(f->base, static_cast<code_t>(t % f->q()))));
                t /= f->q();
            }
            ThetaPoly b(f, std::move(cf));
            if (gcd(b, a_).deg() == 0) reps_.push_back(b);
        }
    }

    const ThetaPoly& conductor() const { return a_; }
    const KField* base_field() const { return base_; }
    const KField* value_field() const { return F_; }
    const std::vector<PrimePoly>& factors() const { return primes_; }
    const std::vector<std::int64_t>& component_orders() const { return ord_; }
    const cydetail::XPoly& defining_poly() const { return Phi_base_; }
    int degree() const { return Da_; }
    std::int64_t group_order() const {
        std::int64_t n = 1;
        for (auto o : ord_) n *= o;
        return n;
    }
    const std::vector<ThetaPoly>& group_reps() const { return reps_; }
    const KElem& zeta(int i) const { return zeta_[i]; }

    OLElem zero() const { return OLElem{}; }
    OLElem one() const { return OLElem{ThetaPoly::one(F_)}; }
    OLElem lambda() const {
        return OLElem{ThetaPoly::zero(F_), ThetaPoly::one(F_)};
    }

    OLElem add(const OLElem& x, const OLElem& y) const {
        OLElem r(std::max(x.size(), y.size()), ThetaPoly::zero(F_));
        for (size_t i = 0; i < x.size(); ++i) r[i] = r[i] + x[i];
        for (size_t i = 0; i < y.size(); ++i) r[i] = r[i] + y[i];
        cydetail::xp_trim(r);
        return r;
    }
    OLElem neg(OLElem x) const {
        for (auto& c : x) c = -c;
        return x;
    }
    OLElem mul(const OLElem& x, const OLElem& y) const {
        return cydetail::xp_mod(cydetail::xp_mul(x, y), Phi_F_);
    }
    OLElem scale(const OLElem& x, const KElem& c) const {
        OLElem r = x;
        for (auto& v : r) v = v * c;
        cydetail::xp_trim(r);
        return r;
    }
    OLElem scale_poly(const OLElem& x, const ThetaPoly& c) const {
        OLElem r = x;
        for (auto& v : r) v = v * c;
        cydetail::xp_trim(r);
        return r;
    }

    // sigma_b: fixes F and theta, sends lambda to C_b(lambda)
    OLElem galois_apply(const ThetaPoly& b, const OLElem& x) const {
        if (gcd(b, a_).deg() != 0)
            throw DomainError("galois_apply: representative not coprime to the conductor");
        OLElem im = carlitz_image(b);
        OLElem acc = zero();
        for (size_t i = x.size(); i-- > 0;) {
            acc = mul(acc, im);
            acc = add(acc, OLElem{x[i]});
        }
        return acc;
    }

    // tau = 1 (x) (q-power on the integral side): theta -> theta^q, x -> x^q
    OLElem tau(const OLElem& x) const {
        OLElem xq = pow_q(lambda());
        OLElem acc = zero();
        for (size_t i = x.size(); i-- > 0;) {
            acc = mul(acc, xq);
            acc = add(acc, OLElem{frobenius_twist(x[i], 1)});
        }
        return acc;
    }

    // q-th power mod Phi
    OLElem pow_q(const OLElem& x) const {
        OLElem r = one(), p = x;
        std::int64_t e = base_->q();
        while (e > 0) {
            if (e & 1) r = mul(r, p);
            p = mul(p, p);
            e >>= 1;
        }
        return r;
    }

    // the Carlitz action C_b evaluated at a point of F (x) O_L
    OLElem carlitz_eval(const ThetaPoly& b, const OLElem& pt) const {
        auto lin = cydetail::carlitz_linear(b);
        OLElem acc = zero();
        OLElem pw = pt;
        for (size_t i = 0; i < lin.size(); ++i) {
            if (i > 0) pw = pow_q(pw);
            if (!lin[i].is_zero()) acc = add(acc, scale_poly(pw, embed_scalars(lin[i], F_)));
        }
        return acc;
    }

    // C_b(lambda) mod Phi
    OLElem carlitz_image(const ThetaPoly& b) const { return carlitz_eval(b, lambda()); }

    // lambda_P for a prime factor: the image of lambda under C_(a/P)
    OLElem lambda_for(int i) const {
        ThetaPoly cof = divexact(a_, primes_[i].lift(base_));
        return carlitz_image(cof);
    }

    friend bool operator==(const CycField&, const CycField&) = delete;

  private:
    OLElem mono(size_t k) const {
        OLElem r(k + 1, ThetaPoly::zero(F_));
        r[k] = ThetaPoly::one(F_);
        return r;
    }

    const KField* base_;
    const KField* F_;
    ThetaPoly a_;
    cydetail::XPoly Phi_base_, Phi_F_;
    int Da_ = 0;
    std::vector<PrimePoly> primes_;
    std::vector<std::int64_t> ord_;
    std::vector<KElem> zeta_;
    std::vector<ThetaPoly> reps_;
};

// all characters, odometer order over the exponent ranges
inline std::vector<Character> all_characters(const CycField& L) {
    std::vector<Character> out;
    const auto& ord = L.component_orders();
    Character cur;
    cur.N.assign(ord.size(), 0);
    while (true) {
        out.push_back(cur);
        size_t i = 0;
        while (i < ord.size() && cur.N[i] == ord[i] - 1) cur.N[i++] = 0;
        if (i == ord.size()) break;
        ++cur.N[i];
    }
    return out;
}

// chi(sigma_b) = prod b(zeta_i)^(N_i) in the compositum; zero iff b shares
// a factor with the conductor of chi
inline KElem character_value(const CycField& L, const Character& chi, const ThetaPoly& b) {
    const KField* F = L.value_field();
    KElem acc = KElem::one(F);
    for (size_t i = 0; i < chi.N.size(); ++i) {
        if (!chi.N[i]) continue;
        KElem v = embed_scalars(b, F).eval(L.zeta(static_cast<int>(i)));
        if (v.is_zero()) return KElem::zero(F);
        acc = acc * v.pow(chi.N[i]);
    }
    return acc;
}

// the Gauss-Thakur sum of chi
inline CycField::OLElem gauss_thakur(const CycField& L, const Character& chi) {
    const KField* F = L.value_field();
    CycField::OLElem g = L.one();
    const auto& primes = L.factors();
    for (size_t i = 0; i < chi.N.size(); ++i) {
        if (!chi.N[i]) continue;
        std::int64_t Ni = chi.N[i];
        int d = primes[i].deg();
        CycField::OLElem lamP = L.lambda_for(static_cast<int>(i));
        // digit j of N_i picks g(omega^(q^j)) with multiplicity
        std::int64_t digits = Ni;
        for (int j = 0; j < d; ++j) {
            std::int64_t Nij = digits % L.base_field()->q();
            digits /= L.base_field()->q();
            if (!Nij) continue;
            // g(omega^(q^j)) = -sum over units b mod P of b(zeta)^(-q^j) C_b(lambda_P)
            CycField::OLElem s = L.zero();
            std::int64_t qj = 1;
            for (int t = 0; t < j; ++t) qj *= L.base_field()->q();
            std::uint64_t total = 1;
            for (int t = 0; t < d; ++t) total *= L.base_field()->q();
            for (std::uint64_t code = 1; code < total; ++code) {
                std::vector<KElem> cf;
                std::uint64_t t = code;
                for (int l = 0; l < d; ++l) {
                    cf.push_back(KElem::scalar(
                        L.base_field(),
                        L.base_field()->k->embed(L.base_field()->base,
                                                 static_cast<code_t>(t % L.base_field()->q()))));
                    t /= L.base_field()->q();
                }
                ThetaPoly res(L.base_field(), std::move(cf));
                KElem w = embed_scalars(res, F).eval(L.zeta(static_cast<int>(i)));
                if (w.is_zero())
                    throw InternalError("gauss_thakur: nonzero residue evaluates to zero");
                s = L.add(s, L.scale(L.carlitz_eval(res, lamP), w.pow(-qj)));
            }
            s = L.neg(s);
            for (std::int64_t rep = 0; rep < Nij; ++rep) g = L.mul(g, s);
        }
    }
    return g;
}

// alpha(chi) = prod (zeta_i^(q^j) - theta)^(N_ij) over F[theta]
inline ThetaPoly alpha_of_character(const CycField& L, const Character& chi) {
    const KField* F = L.value_field();
    ThetaPoly acc = ThetaPoly::one(F);
    for (size_t i = 0; i < chi.N.size(); ++i) {
        if (!chi.N[i]) continue;
        std::int64_t digits = chi.N[i];
        KElem z = L.zeta(static_cast<int>(i));
        for (int j = 0; j < L.factors()[i].deg(); ++j) {
            std::int64_t Nij = digits % L.base_field()->q();
            digits /= L.base_field()->q();
            KElem zqj = KElem::scalar(F, F->k->pow(z.scalar_code(),
                                                   [&] {
                                                       std::int64_t e = 1;
                                                       for (int t = 0; t < j; ++t)
                                                           e *= L.base_field()->q();
                                                       return e;
                                                   }()));
            ThetaPoly fac = ThetaPoly::constant(zqj) - ThetaPoly::theta(F);
            for (std::int64_t rep = 0; rep < Nij; ++rep) acc = acc * fac;
        }
    }
    return acc;
}

// tau(g(chi)) should equal alpha(chi) * g(chi)
inline bool gauss_thakur_tau_equation(const CycField& L, const Character& chi) {
    auto g = gauss_thakur(L, chi);
    auto lhs = L.tau(g);
    auto rhs = L.scale_poly(g, alpha_of_character(L, chi));
    return lhs == rhs;
}

// eta = sum of all Gauss-Thakur sums; PASS iff {sigma(eta)} is an A-basis
// of A[x]/(Phi_a), certified by the determinant being a nonzero constant
struct EtaCertificate {
    bool pass = false;
    ThetaPoly det;
};

inline EtaCertificate eta_generator_check(const CycField& L) {
    const KField* base = L.base_field();
    CycField::OLElem eta = L.zero();
    for (const auto& chi : all_characters(L)) eta = L.add(eta, gauss_thakur(L, chi));
    // eta must have coefficients in A
    int Da = L.degree();
    std::vector<std::vector<ThetaPoly>> M(Da, std::vector<ThetaPoly>(Da, ThetaPoly::zero(base)));
    int col = 0;
    for (const auto& b : L.group_reps()) {
        auto im = L.galois_apply(b, eta);
        for (size_t i = 0; i < im.size(); ++i) {
            std::vector<KElem> cf;
            for (int t = 0; t <= im[i].deg(); ++t) {
                code_t c = im[i].coeff(t).scalar_code();
                if (!L.value_field()->k->in_subfield(base->k, c))
                    throw InternalError("eta_generator_check: coefficient outside A");
                cf.push_back(KElem::scalar(base, L.value_field()->k->restrict_to(base->k, c)));
            }
            M[i][col] = ThetaPoly(base, std::move(cf));
        }
        ++col;
    }
    // fraction-free determinant over A
    EtaCertificate cert;
    ThetaPoly prev = ThetaPoly::one(base);
    int sign = 1;
    int n = Da;
    for (int k = 0; k < n - 1; ++k) {
        if (M[k][k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (!M[i][k].is_zero()) { piv = i; break; }
            if (piv < 0) {
                cert.det = ThetaPoly::zero(base);
                return cert;
            }
            std::swap(M[k], M[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                M[i][j] = divexact(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev);
            M[i][k] = ThetaPoly::zero(base);
        }
        prev = M[k][k];
    }
    cert.det = sign < 0 ? -M[n - 1][n - 1] : M[n - 1][n - 1];
    cert.pass = !cert.det.is_zero() && cert.det.deg() == 0;
    return cert;
}

// ---------------------------------------------------------------------------
// Goss L-values and the equivariant assembly.
// ---------------------------------------------------------------------------

// degree of the value field GF(q)(chi) over GF(q): the smallest m with
// q^m * N_i = N_i mod (q^(d_i) - 1) for all i
inline int character_field_degree(const CycField& L, const Character& chi) {
    const auto& ord = L.component_orders();
    for (int m = 1;; ++m) {
        bool ok = true;
        std::int64_t qm = 1;
        for (int t = 0; t < m; ++t) qm *= L.base_field()->q();
        for (size_t i = 0; i < chi.N.size(); ++i)
            if ((chi.N[i] * (qm % ord[i])) % ord[i] != chi.N[i] % ord[i]) {
                ok = false;
                break;
            }
        if (ok) return m;
    }
}

// L(n, chi) over the compositum field (internal form)
inline LaurentSeries goss_l_value_compositum(const CycField& L, const Character& chi, int n,
                                             std::int64_t N) {
    if (n < 1) throw UsageError("goss_l_value: n >= 1 required");
    const KField* F = L.value_field();
    LaurentSeries acc = LaurentSeries::one(F, N);
    int D = static_cast<int>(N / n);
    // conductor of chi
    ThetaPoly fchi = ThetaPoly::one(L.base_field());
    for (size_t i = 0; i < chi.N.size(); ++i)
        if (chi.N[i]) fchi = fchi * L.factors()[i].lift(L.base_field());
    for (int d = 1; d <= D; ++d) {
        std::uint64_t sz = 1;
        for (int i = 0; i < d; ++i) {
            sz *= F->q();
            if (sz > (std::uint64_t(1) << 24))
                throw DomainError("goss_l_value: precision out of reach");
        }
        for_each_prime_of_degree(F->base, d, [&](std::uint64_t code) {
            PrimePoly P = PrimePoly::from_code(F->base, d, code);
            ThetaPoly Pb = P.lift(L.base_field());
            ThetaPoly q, r;
            divrem(fchi, Pb, q, r);
            if (r.is_zero()) return;  // P divides the conductor
            KElem cv = character_value(L, chi, Pb);
            if (cv.is_zero()) return;
            ThetaPoly Pl = P.lift(F);
            LaurentSeries invPn = LaurentSeries::from_poly(Pl, N + std::int64_t(n) * d).inverse();
            LaurentSeries ipow = invPn;
            for (int rep = 1; rep < n; ++rep) ipow = ipow * invPn;
            LaurentSeries factor = LaurentSeries::one(F, N);
            LaurentSeries term = LaurentSeries::one(F, N);
            KElem cj = KElem::one(F);
            for (int j = 1; std::int64_t(j) * n * d <= N; ++j) {
                term = (term * ipow).truncated(N);
                cj = cj * cv;
                factor = factor + term * cj;
            }
            acc = (acc * factor).truncated(N);
        });
    }
    return acc;
}

// restrict compositum coefficients into GF(q)(chi)
inline LValue goss_l_value(const CycField& L, const Character& chi, int n, std::int64_t N) {
    LaurentSeries big = goss_l_value_compositum(L, chi, n, N);
    int m = character_field_degree(L, chi);
    const KField* small = KField::get(L.base_field()->p(), L.base_field()->e(), m, 0);
    LaurentSeries out(small, N);
    for (std::int64_t d = big.top_deg(); d >= -N; --d) {
        if (big.is_zero()) break;
        KElem c = big.coeff(d);
        if (c.is_zero()) continue;
        code_t code = c.scalar_code();
        if (!L.value_field()->k->in_subfield(small->k, code))
            throw InternalError("goss_l_value: coefficient outside the value field");
        out.set(d, KElem::scalar(small, L.value_field()->k->restrict_to(small->k, code)));
    }
    LValue v;
    v.value = out;
    v.module_desc = "goss";
    v.n = n;
    v.s = 0;
    v.prec = N;
    v.degree_bound = static_cast<int>(N / n);
    v.method = LMethod::euler;
    return v;
}

// the group-ring element sum_chi L(n, chi) e_chi, both per character and on
// the group basis
struct EquivariantL {
    std::vector<std::pair<Character, LValue>> components;
    // sigma-basis coefficients over the compositum, aligned with group_reps()
    std::vector<LaurentSeries> sigma_coeffs;
};

inline EquivariantL equivariant_l(const CycField& L, int n, std::int64_t N) {
    const KField* F = L.value_field();
    std::int64_t h = L.group_order();
    if (h % F->p() == 0)
        throw InternalError("equivariant_l: group order divisible by p");
    EquivariantL out;
    std::vector<LaurentSeries> comp_full;
    for (const auto& chi : all_characters(L)) {
        comp_full.push_back(goss_l_value_compositum(L, chi, n, N));
        out.components.push_back({chi, goss_l_value(L, chi, n, N)});
    }
    KElem invh = KElem::from_int(F, h).inv();
    auto chis = all_characters(L);
    for (const auto& b : L.group_reps()) {
        LaurentSeries c(F, N);
        for (size_t k = 0; k < chis.size(); ++k) {
            KElem cv = character_value(L, chis[k], b);
            // chi^{-1}(sigma_b) = cv^{-1}; cv != 0 since b is coprime to a
            c = c + comp_full[k] * cv.inv();
        }
        out.sigma_coeffs.push_back(c * invh);
    }
    return out;
}

// monic per-component Fitting generators of a module presented by chi
struct GroupRingFitting {
    std::vector<std::pair<Character, ThetaPoly>> components;
};

inline GroupRingFitting group_ring_fitting(const std::vector<std::pair<Character, FiniteModule>>& comps) {
    GroupRingFitting out;
    for (const auto& [chi, M] : comps) out.components.push_back({chi, fitting_generator(M)});
    return out;
}

}  // namespace carlitz

#endif
