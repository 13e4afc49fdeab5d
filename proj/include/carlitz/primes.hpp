#ifndef CARLITZ_PRIMES_HPP
#define CARLITZ_PRIMES_HPP

#include <cstdint>
#include <map>
#include <mutex>
#include <vector>

#include "carlitz/errors.hpp"
#include "carlitz/theta.hpp"

namespace carlitz {

inline int mobius(int n) {
    int r = 1;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            r = -r;
        }
    if (n > 1) r = -r;
    return r;
}

// number of monic irreducibles of degree d over GF(q)
inline std::int64_t irreducible_count(std::int64_t q, int d) {
    std::int64_t s = 0;
    for (int e = 1; e <= d; ++e)
        if (d % e == 0) {
            std::int64_t t = mobius(d / e);
            std::int64_t pw = 1;
            for (int i = 0; i < e; ++i) pw *= q;
            s += t * pw;
        }
    return s / d;
}

// A monic irreducible of A = GF(q)[theta]; coefficients are GF(q) codes,
// ascending, with the leading 1 stored. Ordered by (degree, code) where
// code packs the non-leading coefficients base q.
struct PrimePoly {
    const GFContext* base = nullptr;
    std::vector<code_t> c;

    int deg() const { return static_cast<int>(c.size()) - 1; }

    std::uint64_t code() const {
        std::uint64_t v = 0;
        for (int i = deg() - 1; i >= 0; --i) v = v * base->size() + c[i];
        return v;
    }

    static PrimePoly from_code(const GFContext* base, int d, std::uint64_t code) {
        PrimePoly P;
        P.base = base;
        P.c.resize(d + 1);
        for (int i = 0; i < d; ++i) {
            P.c[i] = static_cast<code_t>(code % base->size());
            code /= base->size();
        }
        P.c[d] = 1;
        return P;
    }

    // view in k[theta] for a coefficient field containing GF(q)
    ThetaPoly lift(const KField* f) const {
        if (f->base != base) throw InternalError("PrimePoly: base field mismatch");
        std::vector<KElem> v;
        v.reserve(c.size());
        for (auto x : c) v.push_back(KElem::scalar(f, f->k->embed(base, x)));
        return ThetaPoly(f, std::move(v));
    }

    friend bool operator==(const PrimePoly& a, const PrimePoly& b) {
        return a.base == b.base && a.c == b.c;
    }
};

namespace pdetail {

inline constexpr std::uint64_t kSieveLimit = std::uint64_t(1) << 30;

// primes of degree exactly d as packed codes, ascending; memoized for the
// small degrees that sieving larger ones needs
const std::vector<std::uint64_t>& small_prime_codes(const GFContext* base, int d);

// digit-add functors for the sieve walk; prime fields avoid the tables
struct SieveAddF2 {
    static code_t add(code_t a, code_t b) { return a ^ b; }
};
struct SieveAddF3 {
    static code_t add(code_t a, code_t b) {
        code_t s = a + b;
        return s - 3 * (s >= 3);
    }
};
struct SieveAddGen {
    const GFContext* F;
    code_t add(code_t a, code_t b) const { return F->add(a, b); }
};

// Degree-one factors are detected by evaluation: walk all codes once with
// an odometer, keeping every f(c) updated incrementally per digit change.
template <class Add>
void sieve_mark_linear(const Add& ops, const GFContext* base, int d,
                       std::vector<std::uint64_t>& bits) {
    const std::int64_t q = base->size();
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    const int nc = static_cast<int>(q) - 1;  // evaluation points c = 1..q-1
    // vals[c-1] tracks f(c); c = 0 reduces to the low-digit test.
    // Every digit transition adds a precomputed row:
    //   inc[v][i][*]: digit value v -> v+1 at position i adds (elem(v+1)-elem(v)) c^i
    //   res[i][*]:    digit q-1 -> 0 at position i adds -elem(q-1) c^i
    std::vector<code_t> vals(nc, 0);
    std::vector<std::vector<code_t>> res(d, std::vector<code_t>(nc));
    std::vector<std::vector<std::vector<code_t>>> inc(
        q - 1, std::vector<std::vector<code_t>>(d, std::vector<code_t>(nc)));
    for (int c = 1; c < static_cast<int>(q); ++c) {
        code_t acc = 1;
        for (int i = 0; i < d; ++i) {
            for (std::int64_t v = 0; v + 1 < q; ++v)
                inc[v][i][c - 1] = base->mul(base->sub(v + 1, v), acc);
            res[i][c - 1] = base->mul(base->neg(q - 1), acc);
            acc = base->mul(acc, c);
        }
        vals[c - 1] = acc;  // leading term c^d of the monic polynomial
    }
    std::vector<code_t> dig(d, 0);
    for (std::uint64_t code = 0;; ++code) {
        bool zero = dig[0] == 0;
        for (int c = 0; c < nc; ++c) zero |= (vals[c] == 0);
        if (zero) bits[code >> 6] |= std::uint64_t(1) << (code & 63);
        if (code + 1 == total) break;
        int i = 0;
        while (dig[i] == q - 1) {
            dig[i] = 0;
            const code_t* row = res[i].data();
            for (int c = 0; c < nc; ++c) vals[c] = ops.add(vals[c], row[c]);
            ++i;
        }
        const code_t* row = inc[dig[i]][i].data();
        dig[i] += 1;
        for (int c = 0; c < nc; ++c) vals[c] = ops.add(vals[c], row[c]);
    }
}

template <class Add>
void sieve_walk(const Add& ops, const GFContext* base, int d,
                std::vector<std::uint64_t>& bits) {
    const std::int64_t q = base->size();
    auto mark = [&](std::uint64_t idx) { bits[idx >> 6] |= std::uint64_t(1) << (idx & 63); };
    std::vector<code_t> prod(d + 1);
    std::vector<std::uint64_t> pow(d + 1);
    pow[0] = 1;
    for (int i = 1; i <= d; ++i) pow[i] = pow[i - 1] * q;

    sieve_mark_linear(ops, base, d, bits);
    for (int e = 2; e * 2 <= d; ++e) {
        const auto& plist = small_prime_codes(base, e);
        int md = d - e;  // cofactor degree
        for (std::uint64_t pcode : plist) {
            std::vector<code_t> P(e + 1);
            {
                std::uint64_t t = pcode;
                for (int i = 0; i < e; ++i) {
                    P[i] = static_cast<code_t>(t % q);
                    t /= q;
                }
                P[e] = 1;
            }
            // rows of delta*P per digit step: code v -> v+1 adds
            // (elem(v+1)-elem(v))*P; a reset q-1 -> 0 adds -elem(q-1)*P
            std::vector<std::vector<code_t>> inc_row(q - 1, std::vector<code_t>(e + 1));
            for (std::int64_t v = 0; v + 1 < q; ++v) {
                code_t dta = base->sub(v + 1, v);
                for (int i = 0; i <= e; ++i) inc_row[v][i] = base->mul(dta, P[i]);
            }
            std::vector<code_t> reset_row(e + 1);
            {
                code_t dta = base->neg(q - 1);
                for (int i = 0; i <= e; ++i) reset_row[i] = base->mul(dta, P[i]);
            }

            std::fill(prod.begin(), prod.end(), 0);
            for (int i = 0; i <= e; ++i) prod[md + i] = P[i];
            std::uint64_t idx = 0;
            for (int i = d - 1; i >= 0; --i) idx = idx * q + prod[i];
            std::vector<code_t> mdig(md, 0);
            mark(idx);
            while (true) {
                int j = 0;
                while (j < md && mdig[j] == q - 1) ++j;
                if (j == md) break;
                for (int r = 0; r < j; ++r) {
                    mdig[r] = 0;
                    for (int i = 0; i <= e; ++i) {
                        code_t ov = prod[r + i];
                        code_t nv = ops.add(ov, reset_row[i]);
                        prod[r + i] = nv;
                        idx += (std::uint64_t)(nv - ov) * pow[r + i];
                    }
                }
                {
                    const auto& row = inc_row[mdig[j]];
                    mdig[j] += 1;
                    for (int i = 0; i <= e; ++i) {
                        code_t ov = prod[j + i];
                        code_t nv = ops.add(ov, row[i]);
                        prod[j + i] = nv;
                        idx += (std::uint64_t)(nv - ov) * pow[j + i];
                    }
                }
                mark(idx);
            }
        }
    }
}

// Composite marks for all monic polynomials of degree d (bit set = has a
// factor of degree < d). For every known prime P of degree e <= d/2 the
// cofactor runs through all monic polynomials of degree d-e; the product's
// coefficient vector and packed code are updated incrementally per digit
// change (cost O(deg P) per cofactor step, not O(d)).
inline std::vector<std::uint64_t> composite_bits(const GFContext* base, int d) {
    const std::int64_t q = base->size();
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= q;
        if (total > kSieveLimit) throw UsageError("prime sieve: degree too large");
    }
    std::vector<std::uint64_t> bits((total + 63) / 64, 0);
    if (d == 1) return bits;
    if (base->p() == 2 && base->deg() == 1) sieve_walk(SieveAddF2{}, base, d, bits);
    else if (base->p() == 3 && base->deg() == 1) sieve_walk(SieveAddF3{}, base, d, bits);
    else sieve_walk(SieveAddGen{base}, base, d, bits);
    return bits;
}

// cached variant for the L-series kernels (several cells share one sieve)
inline const std::vector<std::uint64_t>& composite_bits_cached(const GFContext* base, int d) {
    static std::mutex mu;
    static std::map<std::pair<const GFContext*, int>, std::vector<std::uint64_t>> reg;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = reg.find({base, d});
        if (it != reg.end()) return it->second;
    }
    auto bits = composite_bits(base, d);
    std::lock_guard<std::mutex> lock(mu);
    return reg.emplace(std::make_pair(base, d), std::move(bits)).first->second;
}

// streams all monic irreducibles of degree exactly d in ascending code order
template <class Fn>
void for_each_prime(const GFContext* base, int d, Fn&& fn) {
    const std::int64_t q = base->size();
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= q;
    std::vector<std::uint64_t> bits = composite_bits(base, d);
    for (std::uint64_t c = 0; c < total; ++c)
        if (!(bits[c >> 6] & (std::uint64_t(1) << (c & 63)))) fn(c);
}

inline const std::vector<std::uint64_t>& small_prime_codes(const GFContext* base, int d) {
    static std::mutex mu;
    static std::map<std::pair<const GFContext*, int>, std::vector<std::uint64_t>> reg;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = reg.find({base, d});
        if (it != reg.end()) return it->second;
    }
    std::vector<std::uint64_t> codes;
    for_each_prime(base, d, [&](std::uint64_t c) { codes.push_back(c); });
    std::lock_guard<std::mutex> lock(mu);
    return reg.emplace(std::make_pair(base, d), std::move(codes)).first->second;
}

}  // namespace pdetail

// all monic irreducibles with degree <= max_deg, ordered by (degree, code)
inline std::vector<PrimePoly> enumerate_primes(const GFContext* base, int max_deg) {
    if (max_deg < 1) throw UsageError("enumerate_primes: max_deg >= 1 required");
    std::vector<PrimePoly> out;
    for (int d = 1; d <= max_deg; ++d) {
        std::uint64_t sz = 1;
        bool huge = false;
        for (int i = 0; i < d; ++i) {
            sz *= base->size();
            if (sz > (std::uint64_t(1) << 26)) { huge = true; break; }
        }
        if (huge) throw UsageError("enumerate_primes: list would be too large");
        pdetail::for_each_prime(base, d,
                                [&](std::uint64_t c) { out.push_back(PrimePoly::from_code(base, d, c)); });
    }
    return out;
}

// streaming access for the L-series kernels
template <class Fn>
void for_each_prime_of_degree(const GFContext* base, int d, Fn&& fn) {
    pdetail::for_each_prime(base, d, std::forward<Fn>(fn));
}

// raw composite marks (bit = composite) over monic degree-d codes
inline std::vector<std::uint64_t> prime_sieve_bits(const GFContext* base, int d) {
    return pdetail::composite_bits(base, d);
}

}  // namespace carlitz

#endif
