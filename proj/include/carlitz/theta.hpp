#ifndef CARLITZ_THETA_HPP
#define CARLITZ_THETA_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "carlitz/errors.hpp"
#include "carlitz/kelem.hpp"

namespace carlitz {

// valuation sentinel for the zero element
inline constexpr std::int64_t kValInf = std::int64_t(1) << 60;

// ---------------------------------------------------------------------------
// Polynomials in theta over a coefficient field k = GF(p^(e*m))(t1,...,ts).
// Coefficients ascending, trimmed. The representation is dense; the usual
// case (constants in GF(q)) multiplies through a flat code-array kernel.
// ---------------------------------------------------------------------------
class ThetaPoly {
  public:
    ThetaPoly() : fld_(nullptr) {}
    explicit ThetaPoly(const KField* f) : fld_(f) {}
    ThetaPoly(const KField* f, std::vector<KElem> coeffs)
        : fld_(f), c_(std::move(coeffs)) {
        trim();
    }

    static ThetaPoly zero(const KField* f) { return ThetaPoly(f); }
    static ThetaPoly one(const KField* f) { return constant(KElem::one(f)); }
    static ThetaPoly constant(const KElem& c) {
        ThetaPoly r(c.field());
        if (!c.is_zero()) r.c_.push_back(c);
        return r;
    }
    static ThetaPoly theta(const KField* f) {
        ThetaPoly r(f);
        r.c_ = {KElem::zero(f), KElem::one(f)};
        return r;
    }
    // c * theta^k
    static ThetaPoly monomial(const KElem& c, int k) {
        ThetaPoly r(c.field());
        if (c.is_zero()) return r;
        r.c_.assign(k + 1, KElem::zero(c.field()));
        r.c_[k] = c;
        return r;
    }
    // from integer residues, ascending degree
    static ThetaPoly from_ints(const KField* f, const std::vector<std::int64_t>& v) {
        std::vector<KElem> c;
        c.reserve(v.size());
        for (auto x : v) c.push_back(KElem::from_int(f, x));
        return ThetaPoly(f, std::move(c));
    }
    // from GF codes, ascending degree
    static ThetaPoly from_codes(const KField* f, const std::vector<code_t>& v) {
        std::vector<KElem> c;
        c.reserve(v.size());
        for (auto x : v) c.push_back(KElem::scalar(f, x));
        return ThetaPoly(f, std::move(c));
    }

    const KField* field() const { return fld_; }
    bool is_zero() const { return c_.empty(); }
    int deg() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<KElem>& coeffs() const { return c_; }
    KElem coeff(int i) const {
        if (i < 0 || i >= static_cast<int>(c_.size())) return KElem::zero(fld_);
        return c_[i];
    }
    KElem lead() const {
        if (c_.empty()) throw DomainError("ThetaPoly: leading coefficient of zero");
        return c_.back();
    }
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }
    bool is_constant() const { return c_.size() <= 1; }

    std::int64_t valuation() const { return c_.empty() ? kValInf : -deg(); }

    friend ThetaPoly operator+(const ThetaPoly& a, const ThetaPoly& b) {
        a.check(b);
        ThetaPoly r(a.fld_);
        r.c_.resize(std::max(a.c_.size(), b.c_.size()), KElem::zero(a.fld_));
        for (size_t i = 0; i < a.c_.size(); ++i) r.c_[i] = a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
        r.trim();
        return r;
    }
    ThetaPoly operator-() const {
        ThetaPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend ThetaPoly operator-(const ThetaPoly& a, const ThetaPoly& b) { return a + (-b); }
    friend ThetaPoly operator*(const ThetaPoly& a, const ThetaPoly& b);
    friend ThetaPoly operator*(const ThetaPoly& a, const KElem& s) {
        ThetaPoly r = a;
        for (auto& x : r.c_) x = x * s;
        r.trim();
        return r;
    }

    ThetaPoly shifted(int k) const {  // * theta^k
        if (is_zero() || k == 0) return *this;
        ThetaPoly r(fld_);
        r.c_.assign(c_.size() + k, KElem::zero(fld_));
        for (size_t i = 0; i < c_.size(); ++i) r.c_[i + k] = c_[i];
        return r;
    }

    friend bool operator==(const ThetaPoly& a, const ThetaPoly& b) {
        return a.fld_ == b.fld_ && a.c_ == b.c_;
    }
    friend bool operator!=(const ThetaPoly& a, const ThetaPoly& b) { return !(a == b); }

    KElem eval(const KElem& x) const {
        KElem acc = KElem::zero(fld_);
        for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // all coefficients are GF constants (no t part, no denominators)
    bool all_scalar() const {
        for (const auto& x : c_)
            if (!x.is_scalar()) return false;
        return true;
    }
    std::vector<code_t> codes() const {
        std::vector<code_t> v(c_.size());
        for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i].scalar_code();
        return v;
    }

    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

  private:
    void check(const ThetaPoly& o) const {
        if (fld_ != o.fld_) throw InternalError("ThetaPoly: mixed fields");
    }

    const KField* fld_;
    std::vector<KElem> c_;
};

namespace thdetail {

// Flat convolution of code arrays. p = 2 and p = 3 prime fields get
// branchless arithmetic; everything else goes through the GF tables.
inline std::vector<code_t> conv_codes(const GFContext* F, const std::vector<code_t>& a,
                                      const std::vector<code_t>& b) {
    std::vector<code_t> r(a.size() + b.size() - 1, 0);
    if (F->p() == 2 && F->deg() == 1) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (size_t j = 0; j < b.size(); ++j) r[i + j] ^= b[j];
        }
    } else if (F->p() == 3 && F->deg() == 1) {
        for (size_t i = 0; i < a.size(); ++i) {
            code_t ai = a[i];
            if (!ai) continue;
            code_t* rr = r.data() + i;
            const code_t* bb = b.data();
            size_t nb = b.size();
            for (size_t j = 0; j < nb; ++j) {
                code_t m = ai * bb[j];
                m -= 3 * (m >= 3);      // 4 -> 1
                code_t s = rr[j] + m;
                s -= 3 * (s >= 3);
                rr[j] = s;
            }
        }
    } else {
        for (size_t i = 0; i < a.size(); ++i) {
            if (!a[i]) continue;
            for (size_t j = 0; j < b.size(); ++j)
                if (b[j]) r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
        }
    }
    return r;
}

}  // namespace thdetail

inline ThetaPoly operator*(const ThetaPoly& a, const ThetaPoly& b) {
    a.check(b);
    if (a.is_zero() || b.is_zero()) return ThetaPoly::zero(a.fld_);
    if (a.all_scalar() && b.all_scalar()) {
        auto r = thdetail::conv_codes(a.fld_->k, a.codes(), b.codes());
        return ThetaPoly::from_codes(a.fld_, r);
    }
    ThetaPoly r(a.fld_);
    r.c_.assign(a.c_.size() + b.c_.size() - 1, KElem::zero(a.fld_));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size(); ++j)
            if (!b.c_[j].is_zero()) r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

// division with remainder (coefficients form a field)
inline void divrem(const ThetaPoly& a, const ThetaPoly& b, ThetaPoly& q, ThetaPoly& r) {
    if (b.is_zero()) throw DomainError("ThetaPoly: division by zero");
    const KField* f = a.field();
    std::vector<KElem> rem(a.coeffs());
    int db = b.deg();
    KElem lcinv = b.lead().inv();
    // positions of nonzero divisor coefficients; sparse divisors are common
    std::vector<int> supp;
    for (int i = 0; i <= db; ++i)
        if (!b.coeff(i).is_zero()) supp.push_back(i);
    std::vector<KElem> qu;
    int da = static_cast<int>(rem.size()) - 1;
    while (!rem.empty() && static_cast<int>(rem.size()) - 1 >= db) {
        da = static_cast<int>(rem.size()) - 1;
        KElem c = rem.back() * lcinv;
        int shift = da - db;
        if (static_cast<int>(qu.size()) < shift + 1) qu.resize(shift + 1, KElem::zero(f));
        qu[shift] = c;
        for (int i : supp) rem[shift + i] = rem[shift + i] - c * b.coeff(i);
        while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
    }
    q = ThetaPoly(f, std::move(qu));
    r = ThetaPoly(f, std::move(rem));
}

inline ThetaPoly operator%(const ThetaPoly& a, const ThetaPoly& b) {
    ThetaPoly q, r;
    divrem(a, b, q, r);
    return r;
}

inline ThetaPoly operator/(const ThetaPoly& a, const ThetaPoly& b) {
    ThetaPoly q, r;
    divrem(a, b, q, r);
    return q;
}

inline ThetaPoly divexact(const ThetaPoly& a, const ThetaPoly& b) {
    ThetaPoly q, r;
    divrem(a, b, q, r);
    if (!r.is_zero()) throw InternalError("ThetaPoly: division not exact");
    return q;
}

// monic gcd
inline ThetaPoly gcd(ThetaPoly a, ThetaPoly b) {
    while (!b.is_zero()) {
        ThetaPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a = a * a.lead().inv();
    return a;
}

// unit * monic decomposition; rejects zero
inline std::pair<KElem, ThetaPoly> monicize(const ThetaPoly& f) {
    if (f.is_zero()) throw DomainError("monicize: zero input");
    KElem u = f.lead();
    return {u, f * u.inv()};
}

inline std::int64_t gauss_valuation(const ThetaPoly& f) { return f.valuation(); }
inline std::int64_t gauss_valuation(const KElem& x) { return x.is_zero() ? kValInf : 0; }

// theta |-> theta^(q^k), coefficients fixed
inline ThetaPoly frobenius_twist(const ThetaPoly& f, int k) {
    if (k == 0 || f.is_zero()) return f;
    std::int64_t step = 1;
    for (int i = 0; i < k; ++i) {
        step *= f.field()->q();
        if (step * f.deg() > (std::int64_t(1) << 26))
            throw DomainError("frobenius_twist: degree overflow");
    }
    std::vector<KElem> c(f.deg() * step + 1, KElem::zero(f.field()));
    for (int i = 0; i <= f.deg(); ++i) c[i * step] = f.coeff(i);
    return ThetaPoly(f.field(), std::move(c));
}

// binomial coefficient mod p via Lucas
inline std::int64_t binom_mod_p(std::int64_t n, std::int64_t k, std::int64_t p) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    while (n > 0 || k > 0) {
        std::int64_t nd = n % p, kd = k % p;
        if (kd > nd) return 0;
        // small Pascal row
        std::int64_t c = 1;
        for (std::int64_t i = 0; i < kd; ++i) c = c * (nd - i) / (i + 1);
        r = (r * (c % p)) % p;
        n /= p;
        k /= p;
    }
    return r;
}

// j-th hyperderivative: theta^k -> binom(k, j) theta^(k-j)
inline ThetaPoly hyperderivative(int j, const ThetaPoly& f) {
    if (j < 0) throw UsageError("hyperderivative: j >= 0 required");
    if (j == 0) return f;
    const KField* fl = f.field();
    std::int64_t p = fl->p();
    std::vector<KElem> c;
    for (int k = j; k <= f.deg(); ++k) {
        std::int64_t b = binom_mod_p(k, j, p);
        c.push_back(f.coeff(k) * KElem::from_int(fl, b));
    }
    return ThetaPoly(fl, std::move(c));
}

// Resultant in theta, as the fraction-free (Bareiss) determinant of the
// Sylvester matrix. With this convention Res(f, c - theta) = f(c) for
// monic f, and Res(P, alpha) is the product of alpha over the roots of a
// monic P.
inline KElem resultant(const ThetaPoly& f, const ThetaPoly& g) {
    const KField* fl = f.field();
    if (f.is_zero() && g.is_zero()) throw DomainError("resultant: both inputs zero");
    int m = f.deg(), n = g.deg();
    if (f.is_zero() || g.is_zero()) {
        const ThetaPoly& nz = f.is_zero() ? g : f;
        return nz.deg() == 0 ? KElem::one(fl) : KElem::zero(fl);
    }
    if (m == 0) return f.coeff(0).pow(n);
    if (n == 0) return g.coeff(0).pow(m);
    int N = m + n;
    std::vector<KElem> M(N * N, KElem::zero(fl));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) M[i * N + i + j] = f.coeff(m - j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) M[(n + i) * N + i + j] = g.coeff(n - j);
    // Bareiss elimination with exact divisions
    KElem prev = KElem::one(fl);
    int sign = 1;
    for (int k = 0; k < N - 1; ++k) {
        if (M[k * N + k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < N; ++i)
                if (!M[i * N + k].is_zero()) { piv = i; break; }
            if (piv < 0) return KElem::zero(fl);
            for (int j = 0; j < N; ++j) std::swap(M[k * N + j], M[piv * N + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; ++i) {
            for (int j = k + 1; j < N; ++j)
                M[i * N + j] =
                    (M[i * N + j] * M[k * N + k] - M[i * N + k] * M[k * N + j]) / prev;
            M[i * N + k] = KElem::zero(fl);
        }
        prev = M[k * N + k];
    }
    KElem det = M[(N - 1) * N + (N - 1)];
    if (sign < 0) det = -det;
    return det;
}

}  // namespace carlitz

#endif
