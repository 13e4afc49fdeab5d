#ifndef CARLITZ_GF_HPP
#define CARLITZ_GF_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "carlitz/errors.hpp"

namespace carlitz {

// Arithmetic context for a finite field GF(p^n).
//
// Elements are integer codes 0..p^n-1: the code of sum(d_i x^i) is
// sum(d_i p^i) where x is the fixed generator of GF(p^n) over GF(p).
// The modulus is the Conway polynomial, found by deterministic search
// (primitivity + norm-compatibility with all proper subfield moduli,
// minimal in the alternating-sign lexicographic order). Conway moduli
// make the power map x_sub -> x^((p^n-1)/(p^m-1)) a field embedding
// GF(p^m) -> GF(p^n) whenever m | n, which is how cross-field values
// (character values, roots of primes) are moved around.
//
// Contexts are interned and immutable; elements carry a context pointer.
class GFContext {
  public:
    using code_t = std::int64_t;

    // Interned accessor; builds tables on first use for a given (p, n).
    static const GFContext* get(std::int64_t p, int n);

    std::int64_t p() const { return p_; }
    int deg() const { return n_; }
    std::int64_t size() const { return q_; }
    const std::vector<std::int64_t>& modulus() const { return modulus_; }

    code_t add(code_t a, code_t b) const {
        if (tab_) return add_tab_[a * q_ + b];
        return add_slow(a, b);
    }
    code_t sub(code_t a, code_t b) const { return add(a, neg(b)); }
    code_t neg(code_t a) const {
        if (tab_) return neg_tab_[a];
        return neg_slow(a);
    }
    code_t mul(code_t a, code_t b) const {
        if (tab_) return mul_tab_[a * q_ + b];
        return mul_slow(a, b);
    }
    code_t inv(code_t a) const {
        if (a == 0) throw DomainError("GF: inverse of zero");
        if (tab_) return inv_tab_[a];
        return pow(a, q_ - 2);
    }
    code_t pow(code_t a, std::int64_t e) const;

    // Frobenius x -> x^(p^k).
    code_t frob(code_t a, int k = 1) const;

    // Code of a prime-field element given as an integer residue.
    code_t from_int(std::int64_t v) const {
        v %= p_;
        if (v < 0) v += p_;
        return v;
    }

    // Embedding of a subfield context (sub->deg() must divide deg()).
    // Deterministic: maps the subfield generator to gen^((q-1)/(q_sub-1)).
    code_t embed(const GFContext* sub, code_t a) const;

    // Preimage under embed(sub, .); throws InternalError if a is not in
    // the image (callers use it only after a membership check).
    code_t restrict_to(const GFContext* sub, code_t a) const;

    // True iff a lies in the embedded copy of sub.
    bool in_subfield(const GFContext* sub, code_t a) const;

  private:
    GFContext(std::int64_t p, int n);

    code_t add_slow(code_t a, code_t b) const;
    code_t neg_slow(code_t a) const;
    code_t mul_slow(code_t a, code_t b) const;

    std::int64_t p_;
    int n_;
    std::int64_t q_;
    std::vector<std::int64_t> modulus_;  // length n_+1, monic

    bool tab_ = false;
    std::vector<std::uint16_t> add_tab_, mul_tab_;
    std::vector<std::uint16_t> neg_tab_, inv_tab_, frob_tab_;

    mutable std::mutex embed_mu_;
    mutable std::map<const GFContext*, std::vector<code_t>> embed_cache_;
    const std::vector<code_t>& embed_table(const GFContext* sub) const;
};

namespace gfdetail {

// Dense GF(p) polynomial helpers used only for context construction.
using PVec = std::vector<std::int64_t>;

inline void ptrim(PVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

inline PVec pmulmod(const PVec& a, const PVec& b, const PVec& mod, std::int64_t p) {
    PVec r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    // reduce mod the monic modulus
    int dm = static_cast<int>(mod.size()) - 1;
    for (int i = static_cast<int>(r.size()) - 1; i >= dm; --i) {
        std::int64_t c = r[i];
        if (!c) continue;
        r[i] = 0;
        for (int j = 0; j < dm; ++j)
            r[i - dm + j] = ((r[i - dm + j] - c * mod[j]) % p + p) % p;
    }
    r.resize(dm);
    return r;
}

inline PVec ppowmod(PVec base, std::int64_t e, const PVec& mod, std::int64_t p) {
    base = pmulmod(base, PVec{1}, mod, p);
    PVec r = pmulmod(PVec{1}, PVec{1}, mod, p);
    while (e > 0) {
        if (e & 1) r = pmulmod(r, base, mod, p);
        base = pmulmod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

inline std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> fs;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) fs.push_back(n);
    return fs;
}

}  // namespace gfdetail

inline GFContext::GFContext(std::int64_t p, int n) : p_(p), n_(n) {
    using namespace gfdetail;
    if (p < 2 || n < 1) throw UsageError("GF: need p >= 2, n >= 1");
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) throw UsageError("GF: characteristic must be prime");
    q_ = 1;
    for (int i = 0; i < n; ++i) {
        q_ *= p;
        if (q_ > (std::int64_t(1) << 40)) throw UsageError("GF: field too large");
    }

    // Conway moduli of all proper divisor degrees (needed for compatibility).
    std::vector<std::pair<int, PVec>> subs;
    for (int m = 1; m < n; ++m)
        if (n % m == 0) subs.emplace_back(m, GFContext::get(p, m)->modulus_);

    auto factors = prime_factors(q_ - 1);

    // Candidates in alternating-sign lex order: word w_i = (-1)^(n-i) a_i,
    // compared from the top coefficient down.
    std::vector<std::int64_t> w(n, 0);
    bool found = false;
    while (true) {
        PVec f(n + 1, 0);
        f[n] = 1;
        for (int i = 0; i < n; ++i) {
            std::int64_t s = ((n - i) % 2 == 0) ? w[i] : (p - w[i]) % p;
            f[i] = s;
        }
        // primitivity of x mod f (implies irreducibility)
        bool ok = f[0] != 0 || n == 1;
        if (ok) {
            PVec x{0, 1};
            ok = true;
            PVec xe = ppowmod(x, q_ - 1, f, p);
            ptrim(xe);
            if (!(xe.size() == 1 && xe[0] == 1)) ok = false;
            if (ok)
                for (auto r : factors) {
                    PVec y = ppowmod(x, (q_ - 1) / r, f, p);
                    ptrim(y);
                    if (y.size() == 1 && y[0] == 1) { ok = false; break; }
                }
            if (ok)
                for (auto& [m, cm] : subs) {
                    std::int64_t qm = 1;
                    for (int i = 0; i < m; ++i) qm *= p;
                    PVec y = ppowmod(x, (q_ - 1) / (qm - 1), f, p);
                    // evaluate the degree-m Conway polynomial at y
                    PVec acc{cm[m] % p};
                    for (int i = m - 1; i >= 0; --i) {
                        acc = pmulmod(acc, y, f, p);
                        if (acc.empty()) acc.resize(1, 0);
                        acc[0] = (acc[0] + cm[i]) % p;
                    }
                    ptrim(acc);
                    if (!acc.empty()) { ok = false; break; }
                }
        }
        if (ok) {
            modulus_ = f;
            found = true;
            break;
        }
        // next word (odometer, least-significant position = w[0] ... we
        // advance from the low-degree end so the top word stays smallest)
        int i = 0;
        while (i < n && w[i] == p - 1) { w[i] = 0; ++i; }
        if (i == n) break;
        ++w[i];
    }
    if (!found) throw InternalError("GF: no primitive polynomial found");

    if (q_ <= 1024) {
        tab_ = true;
        add_tab_.resize(q_ * q_);
        mul_tab_.resize(q_ * q_);
        neg_tab_.resize(q_);
        inv_tab_.resize(q_);
        frob_tab_.resize(q_);
        for (code_t a = 0; a < q_; ++a) {
            neg_tab_[a] = static_cast<std::uint16_t>(neg_slow(a));
            for (code_t b = 0; b < q_; ++b) {
                add_tab_[a * q_ + b] = static_cast<std::uint16_t>(add_slow(a, b));
                mul_tab_[a * q_ + b] = static_cast<std::uint16_t>(mul_slow(a, b));
            }
        }
        inv_tab_[0] = 0;
        for (code_t a = 1; a < q_; ++a) inv_tab_[a] = static_cast<std::uint16_t>(pow(a, q_ - 2));
        for (code_t a = 0; a < q_; ++a) frob_tab_[a] = static_cast<std::uint16_t>(pow(a, p_));
    }
}

inline GFContext::code_t GFContext::add_slow(code_t a, code_t b) const {
    code_t r = 0, mult = 1;
    while (a || b) {
        std::int64_t da = a % p_, db = b % p_;
        r += ((da + db) % p_) * mult;
        a /= p_;
        b /= p_;
        mult *= p_;
    }
    return r;
}

inline GFContext::code_t GFContext::neg_slow(code_t a) const {
    code_t r = 0, mult = 1;
    while (a) {
        std::int64_t d = a % p_;
        r += ((p_ - d) % p_) * mult;
        a /= p_;
        mult *= p_;
    }
    return r;
}

inline GFContext::code_t GFContext::mul_slow(code_t a, code_t b) const {
    // schoolbook in the polynomial basis, reduced by the modulus
    std::vector<std::int64_t> da, db;
    for (code_t x = a; x; x /= p_) da.push_back(x % p_);
    for (code_t x = b; x; x /= p_) db.push_back(x % p_);
    if (da.empty() || db.empty()) return 0;
    std::vector<std::int64_t> r(da.size() + db.size(), 0);
    for (size_t i = 0; i < da.size(); ++i)
        for (size_t j = 0; j < db.size(); ++j)
            r[i + j] = (r[i + j] + da[i] * db[j]) % p_;
    for (int i = static_cast<int>(r.size()) - 1; i >= n_; --i) {
        std::int64_t c = r[i];
        if (!c) continue;
        r[i] = 0;
        for (int j = 0; j < n_; ++j)
            r[i - n_ + j] = ((r[i - n_ + j] - c * modulus_[j]) % p_ + p_) % p_;
    }
    code_t out = 0, mult = 1;
    for (int i = 0; i < n_; ++i) {
        if (i < static_cast<int>(r.size())) out += r[i] * mult;
        mult *= p_;
    }
    return out;
}

inline GFContext::code_t GFContext::pow(code_t a, std::int64_t e) const {
    if (e < 0) {
        a = inv(a);
        e = -e;
    }
    code_t r = 1;
    while (e > 0) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

inline GFContext::code_t GFContext::frob(code_t a, int k) const {
    k %= n_;
    if (k < 0) k += n_;
    for (int i = 0; i < k; ++i) a = tab_ ? frob_tab_[a] : pow(a, p_);
    return a;
}

inline const std::vector<GFContext::code_t>& GFContext::embed_table(const GFContext* sub) const {
    std::lock_guard<std::mutex> lock(embed_mu_);
    auto it = embed_cache_.find(sub);
    if (it != embed_cache_.end()) return it->second;
    if (sub->p_ != p_ || n_ % sub->n_ != 0)
        throw UsageError("GF: embedding requires a subfield of the same characteristic");
    // The subfield generator maps to gen^((q-1)/(q_sub-1)); gen has code p.
    code_t y = pow(code_t(p_), (q_ - 1) / (sub->q_ - 1));
    std::vector<code_t> tab(sub->q_);
    for (code_t c = 0; c < sub->q_; ++c) {
        std::vector<std::int64_t> digits;
        for (code_t x = c; x; x /= p_) digits.push_back(x % p_);
        code_t acc = 0;
        for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
            acc = mul(acc, y);
            acc = add(acc, from_int(digits[i]));
        }
        tab[c] = acc;
    }
    return embed_cache_.emplace(sub, std::move(tab)).first->second;
}

inline GFContext::code_t GFContext::embed(const GFContext* sub, code_t a) const {
    if (sub == this) return a;
    return embed_table(sub)[a];
}

inline bool GFContext::in_subfield(const GFContext* sub, code_t a) const {
    if (sub == this) return true;
    // x in GF(p^m) iff x^(p^m) == x
    code_t f = a;
    for (int i = 0; i < sub->deg(); ++i) f = frob(f, 1);
    return f == a;
}

inline GFContext::code_t GFContext::restrict_to(const GFContext* sub, code_t a) const {
    if (sub == this) return a;
    const auto& tab = embed_table(sub);
    for (code_t c = 0; c < sub->size(); ++c)
        if (tab[c] == a) return c;
    throw InternalError("GF: element not in subfield");
}

inline const GFContext* GFContext::get(std::int64_t p, int n) {
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, int>, std::unique_ptr<GFContext>> registry;
    auto key = std::make_pair(p, n);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = registry.find(key);
        if (it != registry.end()) return it->second.get();
    }
    // Construction recurses into get() for subfield moduli, so it must not
    // hold the registry lock. A racing duplicate is dropped by emplace.
    auto ctx = std::unique_ptr<GFContext>(new GFContext(p, n));
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.emplace(key, std::move(ctx)).first;
    return it->second.get();
}

// A field element: code plus context. Value semantics, cheap to copy.
struct GFElem {
    GFContext::code_t v = 0;
    const GFContext* F = nullptr;

    GFElem() = default;
    GFElem(GFContext::code_t code, const GFContext* ctx) : v(code), F(ctx) {}

    bool is_zero() const { return v == 0; }
    bool is_one() const { return v == 1; }

    friend GFElem operator+(GFElem a, GFElem b) { return {a.F->add(a.v, b.v), a.F}; }
    friend GFElem operator-(GFElem a, GFElem b) { return {a.F->sub(a.v, b.v), a.F}; }
    friend GFElem operator*(GFElem a, GFElem b) { return {a.F->mul(a.v, b.v), a.F}; }
    friend GFElem operator/(GFElem a, GFElem b) { return {a.F->mul(a.v, b.F->inv(b.v)), a.F}; }
    GFElem operator-() const { return {F->neg(v), F}; }
    GFElem inv() const { return {F->inv(v), F}; }
    GFElem pow(std::int64_t e) const { return {F->pow(v, e), F}; }
    friend bool operator==(GFElem a, GFElem b) { return a.v == b.v && a.F == b.F; }
    friend bool operator!=(GFElem a, GFElem b) { return !(a == b); }
};

}  // namespace carlitz

#endif
