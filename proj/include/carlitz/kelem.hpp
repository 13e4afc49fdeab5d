#ifndef CARLITZ_KELEM_HPP
#define CARLITZ_KELEM_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "carlitz/errors.hpp"
#include "carlitz/gf.hpp"

namespace carlitz {

using code_t = GFContext::code_t;

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a GF context (codes, ascending degree,
// trimmed; empty vector = zero). These are the t1-coefficients of bivariate
// polynomials below.
// ---------------------------------------------------------------------------
using UPoly = std::vector<code_t>;

inline void utrim(UPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline bool uis_zero(const UPoly& a) { return a.empty(); }

inline UPoly uadd(const GFContext* F, const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = F->add(r[i], b[i]);
    utrim(r);
    return r;
}

inline UPoly uneg(const GFContext* F, UPoly a) {
    for (auto& c : a) c = F->neg(c);
    return a;
}

inline UPoly usub(const GFContext* F, const UPoly& a, const UPoly& b) {
    return uadd(F, a, uneg(F, b));
}

inline UPoly umul(const GFContext* F, const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j]) r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
    }
    utrim(r);
    return r;
}

inline UPoly uscale(const GFContext* F, UPoly a, code_t c) {
    if (c == 0) return {};
    for (auto& x : a) x = F->mul(x, c);
    return a;
}

// division with remainder; b must be nonzero
inline void udivrem(const GFContext* F, UPoly a, const UPoly& b, UPoly& q, UPoly& r) {
    if (b.empty()) throw DomainError("UPoly: division by zero");
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    code_t lcinv = F->inv(b.back());
    while (a.size() >= b.size() && !a.empty()) {
        code_t c = F->mul(a.back(), lcinv);
        size_t shift = a.size() - b.size();
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i)
            a[shift + i] = F->sub(a[shift + i], F->mul(c, b[i]));
        utrim(a);
    }
    utrim(q);
    r = std::move(a);
}

inline UPoly udivexact(const GFContext* F, const UPoly& a, const UPoly& b) {
    UPoly q, r;
    udivrem(F, a, b, q, r);
    if (!r.empty()) throw InternalError("UPoly: division not exact");
    return q;
}

inline UPoly ugcd(const GFContext* F, UPoly a, UPoly b) {
    while (!b.empty()) {
        UPoly q, r;
        udivrem(F, a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) a = uscale(F, a, F->inv(a.back()));  // monic
    return a;
}

inline code_t ueval(const GFContext* F, const UPoly& a, code_t x) {
    code_t acc = 0;
    for (size_t i = a.size(); i-- > 0;) acc = F->add(F->mul(acc, x), a[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// Bivariate polynomials in (t1, t2): coefficient of t2^j is a UPoly in t1.
// With one variable everything lives in row 0; with zero variables in a
// single code. Monomial order is graded lex, ties broken by the t2 exponent.
// ---------------------------------------------------------------------------
using BPoly = std::vector<UPoly>;

inline void btrim(BPoly& a) {
    while (!a.empty() && a.back().empty()) a.pop_back();
}

inline bool bis_zero(const BPoly& a) { return a.empty(); }

inline BPoly bconst(code_t c) {
    if (c == 0) return {};
    return {UPoly{c}};
}

inline bool bis_const(const BPoly& a) {
    return a.empty() || (a.size() == 1 && a[0].size() <= 1);
}

inline code_t bconst_value(const BPoly& a) {
    if (a.empty()) return 0;
    return a[0].empty() ? 0 : a[0][0];
}

inline BPoly badd(const GFContext* F, const BPoly& a, const BPoly& b) {
    BPoly r(std::max(a.size(), b.size()));
    for (size_t j = 0; j < r.size(); ++j) {
        const UPoly* x = j < a.size() ? &a[j] : nullptr;
        const UPoly* y = j < b.size() ? &b[j] : nullptr;
        if (x && y) r[j] = uadd(F, *x, *y);
        else if (x) r[j] = *x;
        else if (y) r[j] = *y;
    }
    btrim(r);
    return r;
}

inline BPoly bneg(const GFContext* F, BPoly a) {
    for (auto& row : a) row = uneg(F, row);
    return a;
}

inline BPoly bsub(const GFContext* F, const BPoly& a, const BPoly& b) {
    return badd(F, a, bneg(F, b));
}

inline BPoly bmul(const GFContext* F, const BPoly& a, const BPoly& b) {
    if (a.empty() || b.empty()) return {};
    BPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].empty()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (b[j].empty()) continue;
            r[i + j] = uadd(F, r[i + j], umul(F, a[i], b[j]));
        }
    }
    btrim(r);
    return r;
}

inline BPoly bscale(const GFContext* F, BPoly a, code_t c) {
    if (c == 0) return {};
    for (auto& row : a) row = uscale(F, row, c);
    return a;
}

// leading monomial under graded lex (t1 < t2): returns (i, j, coeff)
struct BLead {
    int i = 0, j = 0;
    code_t c = 0;
};

inline BLead blead(const BPoly& a) {
    BLead best;
    bool first = true;
    for (size_t j = 0; j < a.size(); ++j) {
        if (a[j].empty()) continue;
        int i = static_cast<int>(a[j].size()) - 1;
        int jj = static_cast<int>(j);
        if (first || i + jj > best.i + best.j ||
            (i + jj == best.i + best.j && jj > best.j)) {
            best = {i, jj, a[j][i]};
            first = false;
        }
    }
    return best;
}

inline int btotal_deg(const BPoly& a) {
    if (a.empty()) return -1;
    BLead l = blead(a);
    return l.i + l.j;
}

// content in t1: gcd of all UPoly rows
inline UPoly bcontent(const GFContext* F, const BPoly& a) {
    UPoly g;
    for (const auto& row : a)
        if (!row.empty()) g = ugcd(F, g, row);
    return g;
}

inline BPoly bdiv_content(const GFContext* F, const BPoly& a, const UPoly& c) {
    BPoly r = a;
    for (auto& row : r)
        if (!row.empty()) row = udivexact(F, row, c);
    return r;
}

// exact division (throws InternalError if not exact)
inline BPoly bdivexact(const GFContext* F, const BPoly& a, const BPoly& b);

namespace kdetail {

// pseudo-remainder in t2 of A by B (deg_t2 A >= deg_t2 B, B nonzero):
// lc(B)^(da-db+1) * A  mod B, coefficients staying polynomial
inline BPoly bprem(const GFContext* F, BPoly A, const BPoly& B) {
    int db = static_cast<int>(B.size()) - 1;
    const UPoly& lb = B[db];
    while (!A.empty() && static_cast<int>(A.size()) - 1 >= db) {
        int da = static_cast<int>(A.size()) - 1;
        UPoly la = A[da];
        // A := lb*A - la*t2^(da-db)*B; the t2^da terms cancel
        BPoly r(da);
        for (int j = 0; j < da; ++j) {
            UPoly x = A[j].empty() ? UPoly{} : umul(F, lb, A[j]);
            int bj = j - (da - db);
            if (bj >= 0 && bj < db && !B[bj].empty())
                x = usub(F, x, umul(F, la, B[bj]));
            r[j] = std::move(x);
        }
        btrim(r);
        A = std::move(r);
    }
    return A;
}

}  // namespace kdetail

// gcd of bivariate polynomials, leading coefficient normalized to 1
inline BPoly bgcd(const GFContext* F, BPoly a, BPoly b) {
    btrim(a);
    btrim(b);
    if (a.empty()) std::swap(a, b);
    if (b.empty()) {
        if (a.empty()) return a;
        BLead l = blead(a);
        return bscale(F, a, F->inv(l.c));
    }
    UPoly ca = bcontent(F, a), cb = bcontent(F, b);
    BPoly pa = bdiv_content(F, a, ca), pb = bdiv_content(F, b, cb);
    UPoly cg = ugcd(F, ca, cb);
    // primitive PRS in t2
    if (pa.size() < pb.size()) std::swap(pa, pb);
    while (!pb.empty()) {
        BPoly r = kdetail::bprem(F, pa, pb);
        pa = std::move(pb);
        pb = std::move(r);
        if (!pb.empty()) {
            UPoly c = bcontent(F, pb);
            pb = bdiv_content(F, pb, c);
        }
    }
    // gcd of primitive parts with t2-degree 0 is necessarily a unit
    if (pa.size() == 1) pa = {UPoly{1}};
    BPoly g = bmul(F, pa, BPoly{cg});
    BLead l = blead(g);
    return bscale(F, g, F->inv(l.c));
}

inline BPoly bdivexact(const GFContext* F, const BPoly& a, const BPoly& b) {
    if (bis_zero(b)) throw DomainError("BPoly: division by zero");
    if (bis_zero(a)) return {};
    if (bis_const(b)) return bscale(F, a, F->inv(bconst_value(b)));
    BPoly rem = a, q;
    int db = static_cast<int>(b.size()) - 1;
    const UPoly& lb = b[db];
    q.assign(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, UPoly{});
    while (!rem.empty() && static_cast<int>(rem.size()) - 1 >= db) {
        int da = static_cast<int>(rem.size()) - 1;
        UPoly qc = udivexact(F, rem[da], lb);
        q[da - db] = qc;
        for (int j = 0; j <= db; ++j) {
            if (b[j].empty()) continue;
            rem[j + da - db] = usub(F, rem[j + da - db], umul(F, qc, b[j]));
        }
        btrim(rem);
    }
    if (!rem.empty()) throw InternalError("BPoly: division not exact");
    btrim(q);
    return q;
}

inline code_t beval(const GFContext* F, const BPoly& a, code_t t1, code_t t2) {
    code_t acc = 0;
    for (size_t j = a.size(); j-- > 0;)
        acc = F->add(F->mul(acc, t2), ueval(F, a[j], t1));
    return acc;
}

// ---------------------------------------------------------------------------
// Coefficient field description: k = GF(p^(e*m))(t1,...,ts) with s <= 2.
// q = p^e is the size of the base field that the Frobenius twist raises to.
// ---------------------------------------------------------------------------
class KField {
  public:
    const GFContext* k;     // coefficient constants GF(p^(e*m))
    const GFContext* base;  // GF(q), q = p^e
    int s;                  // number of t variables

    std::int64_t p() const { return base->p(); }
    std::int64_t q() const { return base->size(); }
    int e() const { return base->deg(); }
    int m() const { return k->deg() / base->deg(); }

    static const KField* get(std::int64_t p, int e, int m, int s) {
        if (s < 0 || s > 2) throw UsageError("KField: 0 <= s <= 2 required");
        if (e < 1 || m < 1) throw UsageError("KField: e, m >= 1 required");
        static std::mutex mu;
        static std::map<std::tuple<std::int64_t, int, int, int>,
                        std::unique_ptr<KField>> reg;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(p, e, m, s);
        auto it = reg.find(key);
        if (it == reg.end()) {
            auto f = std::unique_ptr<KField>(new KField);
            f->k = GFContext::get(p, e * m);
            f->base = GFContext::get(p, e);
            f->s = s;
            it = reg.emplace(key, std::move(f)).first;
        }
        return it->second.get();
    }

  private:
    KField() = default;
};

// ---------------------------------------------------------------------------
// An element of the coefficient field: a reduced fraction of BPoly with the
// denominator's leading coefficient 1. Constants are stored inline and never
// touch the heap, which keeps dense theta-polynomials over plain GF(q) cheap.
// ---------------------------------------------------------------------------
class KElem {
  public:
    KElem() : fld_(nullptr), sc_(0) {}

    static KElem zero(const KField* f) { return KElem(f, 0); }
    static KElem one(const KField* f) { return KElem(f, 1); }
    static KElem scalar(const KField* f, code_t c) { return KElem(f, c); }
    static KElem from_int(const KField* f, std::int64_t v) {
        return KElem(f, f->k->from_int(v));
    }
    // t1 (idx 0) or t2 (idx 1)
    static KElem t_var(const KField* f, int idx) {
        if (idx < 0 || idx >= f->s) throw UsageError("KElem: t variable out of range");
        BPoly n;
        if (idx == 0) n = {UPoly{0, 1}};
        else n = {UPoly{}, UPoly{1}};
        return KElem(f, std::move(n), bconst(1));
    }
    static KElem from_poly(const KField* f, BPoly num) {
        return KElem(f, std::move(num), bconst(1));
    }
    static KElem from_frac(const KField* f, BPoly num, BPoly den) {
        return KElem(f, std::move(num), std::move(den));
    }

    const KField* field() const { return fld_; }
    bool is_scalar() const { return rat_ == nullptr; }
    bool is_zero() const { return is_scalar() ? sc_ == 0 : false; }
    bool is_one() const { return is_scalar() && sc_ == 1; }
    code_t scalar_code() const {
        if (!is_scalar()) throw InternalError("KElem: not a scalar");
        return sc_;
    }
    // numerator/denominator views (valid for any element)
    BPoly num() const { return is_scalar() ? bconst(sc_) : rat_->num; }
    BPoly den() const { return is_scalar() ? bconst(1) : rat_->den; }
    bool is_polynomial() const { return is_scalar() || bis_const(rat_->den); }

    friend KElem operator+(const KElem& a, const KElem& b) {
        a.check(b);
        if (a.is_scalar() && b.is_scalar())
            return KElem(a.fld_, a.gf()->add(a.sc_, b.sc_));
        const GFContext* F = a.gf();
        // a.n/a.d + b.n/b.d
        BPoly n = badd(F, bmul(F, a.num(), b.den()), bmul(F, b.num(), a.den()));
        BPoly d = bmul(F, a.den(), b.den());
        return KElem(a.fld_, std::move(n), std::move(d));
    }
    friend KElem operator-(const KElem& a, const KElem& b) { return a + (-b); }
    KElem operator-() const {
        if (is_scalar()) return KElem(fld_, gf()->neg(sc_));
        return KElem(fld_, bneg(gf(), rat_->num), rat_->den);
    }
    friend KElem operator*(const KElem& a, const KElem& b) {
        a.check(b);
        if (a.is_scalar() && b.is_scalar())
            return KElem(a.fld_, a.gf()->mul(a.sc_, b.sc_));
        if (a.is_zero() || b.is_zero()) return zero(a.fld_);
        const GFContext* F = a.gf();
        return KElem(a.fld_, bmul(F, a.num(), b.num()), bmul(F, a.den(), b.den()));
    }
    friend KElem operator/(const KElem& a, const KElem& b) {
        a.check(b);
        if (b.is_zero()) throw DomainError("KElem: division by zero");
        if (a.is_scalar() && b.is_scalar())
            return KElem(a.fld_, a.gf()->mul(a.sc_, a.gf()->inv(b.sc_)));
        const GFContext* F = a.gf();
        return KElem(a.fld_, bmul(F, a.num(), b.den()), bmul(F, a.den(), b.num()));
    }
    KElem inv() const {
        if (is_zero()) throw DomainError("KElem: inverse of zero");
        if (is_scalar()) return KElem(fld_, gf()->inv(sc_));
        return KElem(fld_, rat_->den, rat_->num);
    }
    KElem pow(std::int64_t e) const {
        if (e < 0) return inv().pow(-e);
        KElem r = one(fld_), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const KElem& a, const KElem& b) {
        if (a.fld_ != b.fld_) return false;
        if (a.is_scalar() && b.is_scalar()) return a.sc_ == b.sc_;
        return a.num() == b.num() && a.den() == b.den();
    }
    friend bool operator!=(const KElem& a, const KElem& b) { return !(a == b); }

    // substitute values for (t1, t2); result is a constant code
    code_t eval(code_t t1, code_t t2) const {
        if (is_scalar()) return sc_;
        const GFContext* F = gf();
        code_t n = beval(F, rat_->num, t1, t2);
        code_t d = beval(F, rat_->den, t1, t2);
        if (d == 0) throw DomainError("KElem: evaluation hits a pole");
        return F->mul(n, F->inv(d));
    }

    const GFContext* gf() const { return fld_->k; }

  private:
    struct KRat {
        BPoly num, den;
    };

    KElem(const KField* f, code_t c) : fld_(f), sc_(c) {}

    KElem(const KField* f, BPoly n, BPoly d) : fld_(f), sc_(0) {
        const GFContext* F = f->k;
        btrim(n);
        btrim(d);
        if (bis_zero(d)) throw DomainError("KElem: zero denominator");
        if (bis_zero(n)) return;  // canonical zero
        if (bis_const(d)) {
            code_t u = F->inv(bconst_value(d));
            if (bis_const(n)) {
                sc_ = F->mul(bconst_value(n), u);
                return;
            }
            auto r0 = std::make_shared<KRat>();
            r0->num = bscale(F, n, u);
            r0->den = bconst(1);
            rat_ = std::move(r0);
            return;
        }
        BPoly g = bgcd(F, n, d);
        if (!bis_const(g)) {
            n = bdivexact(F, n, g);
            d = bdivexact(F, d, g);
        }
        BLead ld = blead(d);
        code_t u = F->inv(ld.c);
        n = bscale(F, n, u);
        d = bscale(F, d, u);
        if (bis_const(n) && bis_const(d)) {
            sc_ = F->mul(bconst_value(n), F->inv(bconst_value(d)));
            return;
        }
        auto r = std::make_shared<KRat>();
        r->num = std::move(n);
        r->den = std::move(d);
        rat_ = std::move(r);
    }

    void check(const KElem& o) const {
        if (fld_ != o.fld_) throw InternalError("KElem: mixed fields");
    }

    const KField* fld_;
    code_t sc_;
    std::shared_ptr<const KRat> rat_;
};

}  // namespace carlitz

#endif
