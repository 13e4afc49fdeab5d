#ifndef CARLITZ_LSERIES_HPP
#define CARLITZ_LSERIES_HPP

#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "carlitz/finite_module.hpp"

namespace carlitz {

// worker cap: CARLITZ_LAB_THREADS, else hardware concurrency
inline int worker_count() {
    if (const char* env = std::getenv("CARLITZ_LAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

enum class LMethod { euler, sum };

struct LValue {
    LaurentSeries value;
    std::string module_desc;
    int n = 1;
    int s = 0;
    std::int64_t prec = 0;
    int degree_bound = 0;  // largest prime/summand degree that contributed
    LMethod method = LMethod::euler;
};

struct ClassFormulaReport {
    LValue lhs;                // Euler-product side
    LaurentSeries rhs;         // lattice index times class-module generator
    LaurentSeries index;       // the lattice index factor
    LaurentSeries residual;    // lhs - rhs
    std::int64_t residual_valuation = 0;  // kValInf when the residual vanishes
    std::int64_t prec = 0;
    bool pass = false;
};

namespace lsdetail {

// ---------------------------------------------------------------------------
// Shapes of the twist polynomial alpha that get dedicated kernels.
// ---------------------------------------------------------------------------
enum class AlphaKind { one, pellarin, general };

inline AlphaKind classify_alpha(const ThetaPoly& alpha, int s) {
    const KField* f = alpha.field();
    if (alpha == ThetaPoly::one(f)) return AlphaKind::one;
    if (f->m() == 1 && s >= 1 && s <= 2) {
        ThetaPoly pell = ThetaPoly::constant(KElem::t_var(f, 0)) -
                         ThetaPoly::theta(f);
        if (s == 2)
            pell = pell * (ThetaPoly::constant(KElem::t_var(f, 1)) - ThetaPoly::theta(f));
        if (alpha == pell) return AlphaKind::pellarin;
    }
    return AlphaKind::general;
}

inline ThetaPoly pellarin_alpha(const KField* f, int s) {
    ThetaPoly a = ThetaPoly::one(f);
    for (int i = 0; i < s; ++i)
        a = a * (ThetaPoly::constant(KElem::t_var(f, i)) - ThetaPoly::theta(f));
    return a;
}

// resultant by the Euclidean recursion; cheap when one degree is small
inline KElem resultant_rec(const ThetaPoly& f, const ThetaPoly& g) {
    const KField* fl = f.field();
    if (f.is_zero() || g.is_zero()) {
        const ThetaPoly& nz = f.is_zero() ? g : f;
        if (f.is_zero() && g.is_zero()) throw DomainError("resultant: both zero");
        return nz.deg() == 0 ? KElem::one(fl) : KElem::zero(fl);
    }
    if (g.deg() == 0) return g.coeff(0).pow(f.deg());
    if (f.deg() == 0) return f.coeff(0).pow(g.deg());
    if (f.deg() < g.deg()) {
        KElem r = resultant_rec(g, f);
        if ((f.deg() & 1) && (g.deg() & 1)) r = -r;
        return r;
    }
    ThetaPoly quo, rem;
    divrem(f, g, quo, rem);
    if (rem.is_zero()) return KElem::zero(fl);
    // res(f,g) = (-1)^(mn) lc(g)^(m-e) res(g, rem), e = deg rem
    KElem r = resultant_rec(g, rem);
    r = r * g.lead().pow(f.deg() - rem.deg());
    if ((f.deg() & 1) && (g.deg() & 1)) r = -r;
    return r;
}

// ---------------------------------------------------------------------------
// Field-op microkernels. The enumerated Euler accumulation runs these per
// prime, so the prime fields get branchless arithmetic.
// ---------------------------------------------------------------------------
struct OpsF2 {
    static std::uint32_t add(std::uint32_t a, std::uint32_t b) { return a ^ b; }
    static std::uint32_t mul(std::uint32_t a, std::uint32_t b) { return a & b; }
    static std::uint32_t neg(std::uint32_t a) { return a; }
};
struct OpsF3 {
    static std::uint32_t add(std::uint32_t a, std::uint32_t b) {
        std::uint32_t s = a + b;
        return s - 3u * (s >= 3u);
    }
    static std::uint32_t mul(std::uint32_t a, std::uint32_t b) {
        std::uint32_t m = a * b;
        return m - 3u * (m >= 3u) - 3u * (m >= 6u);
    }
    static std::uint32_t neg(std::uint32_t a) { return (3u - a) % 3u; }
};
struct OpsGen {
    const GFContext* F;
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>(F->add(a, b));
    }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>(F->mul(a, b));
    }
    std::uint32_t neg(std::uint32_t a) const { return static_cast<std::uint32_t>(F->neg(a)); }
};

// Per-degree accumulator for the additive regime (only first and second
// powers of a factor can reach the precision window). Slot v holds the
// coefficient of theta^(-v) as a flat (t1,t2)-grid over GF(q); gs is the
// grid stride (max t-degree + 1). s = 0 uses a 1x1 grid.
struct BlockAccum {
    int d = 0, n = 1, s = 0, N = 0;
    int gs1 = 1;                            // grid size for the x_P sums
    int gs2 = 1;                            // grid size for the x_P^2 sums
    std::vector<std::vector<std::uint32_t>> t1;  // [v - n*d] -> grid
    std::vector<std::vector<std::uint32_t>> t2;  // [v - 2*n*d] -> grid
    bool want_pairs = false;

    void init(int d_, int n_, int s_, int N_, bool pairs) {
        d = d_;
        n = n_;
        s = s_;
        N = N_;
        want_pairs = pairs;
        gs1 = s ? d + 1 : 1;
        gs2 = s ? 2 * d + 1 : 1;
        int k1 = N - n * d;
        t1.assign(k1 + 1, std::vector<std::uint32_t>(
                              static_cast<size_t>(gs1) * (s == 2 ? gs1 : 1), 0));
        if (want_pairs) {
            int k2 = N - 2 * n * d;
            t2.assign(k2 + 1, std::vector<std::uint32_t>(
                                  static_cast<size_t>(gs2) * (s == 2 ? gs2 : 1), 0));
        }
    }

    void merge(const BlockAccum& o, const GFContext* F) {
        for (size_t v = 0; v < t1.size(); ++v)
            for (size_t i = 0; i < t1[v].size(); ++i)
                t1[v][i] = static_cast<std::uint32_t>(F->add(t1[v][i], o.t1[v][i]));
        for (size_t v = 0; v < t2.size(); ++v)
            for (size_t i = 0; i < t2[v].size(); ++i)
                t2[v][i] = static_cast<std::uint32_t>(F->add(t2[v][i], o.t2[v][i]));
    }
};

// inverse-series coefficients of 1/P from the top: b_0 = 1,
// b_k = -sum_{i=1..min(k,d)} a_{d-i} b_{k-i}
template <class Ops>
inline void inv_top_series(const Ops& ops, const std::uint32_t* cf, int d, int K,
                           std::uint32_t* b) {
    b[0] = 1;
    for (int k = 1; k <= K; ++k) {
        std::uint32_t acc = 0;
        int lim = k < d ? k : d;
        for (int i = 1; i <= lim; ++i) acc = ops.add(acc, ops.mul(cf[d - i], b[k - i]));
        b[k] = ops.neg(acc);
    }
}

// truncated power of a short series: out = in^n mod x^(K+1)
template <class Ops>
inline void series_pow(const Ops& ops, const std::uint32_t* in, int K, int n,
                       std::uint32_t* out) {
    std::vector<std::uint32_t> acc(K + 1, 0), tmp(K + 1, 0);
    acc[0] = 1;
    for (int rep = 0; rep < n; ++rep) {
        std::fill(tmp.begin(), tmp.end(), 0);
        for (int i = 0; i <= K; ++i) {
            if (!acc[i]) continue;
            for (int j = 0; i + j <= K; ++j)
                if (in[j]) tmp[i + j] = ops.add(tmp[i + j], ops.mul(acc[i], in[j]));
        }
        acc.swap(tmp);
    }
    for (int i = 0; i <= K; ++i) out[i] = acc[i];
}

// one prime's contribution in the additive regime
template <class Ops>
void accumulate_prime(const Ops& ops, BlockAccum& A, const std::uint32_t* cf) {
    const int d = A.d, n = A.n, s = A.s, N = A.N;
    const int K1 = N - n * d;
    std::uint32_t bulk[128];
    std::uint32_t bn[128];
    inv_top_series(ops, cf, d, K1, bulk);
    if (n == 1) {
        for (int k = 0; k <= K1; ++k) bn[k] = bulk[k];
    } else {
        series_pow(ops, bulk, K1, n, bn);
    }
    if (s == 0) {
        for (int k = 0; k <= K1; ++k)
            A.t1[k][0] = ops.add(A.t1[k][0], bn[k]);
    } else if (s == 1) {
        for (int k = 0; k <= K1; ++k) {
            if (!bn[k]) continue;
            auto* row = A.t1[k].data();
            for (int i = 0; i <= d; ++i)
                if (cf[i]) row[i] = ops.add(row[i], ops.mul(bn[k], cf[i]));
        }
    } else {
        const int gs = A.gs1;
        for (int k = 0; k <= K1; ++k) {
            if (!bn[k]) continue;
            auto* row = A.t1[k].data();
            for (int i = 0; i <= d; ++i) {
                if (!cf[i]) continue;
                std::uint32_t w = ops.mul(bn[k], cf[i]);
                auto* rr = row + static_cast<size_t>(i) * gs;
                for (int j = 0; j <= d; ++j) rr[j] = ops.add(rr[j], ops.mul(w, cf[j]));
            }
        }
    }
    if (!A.want_pairs) return;
    // second powers: x_P^2 lands at valuations >= 2nd
    const int K2 = N - 2 * n * d;
    std::uint32_t b2[128];
    std::fill(b2, b2 + K2 + 1, 0);
    for (int i = 0; i <= K2; ++i) {
        if (!bn[i]) continue;
        for (int j = 0; i + j <= K2; ++j)
            if (bn[j]) b2[i + j] = ops.add(b2[i + j], ops.mul(bn[i], bn[j]));
    }
    // squared coefficient vector w2 = conv(cf, cf), degree 2d
    std::vector<std::uint32_t> w2(2 * d + 1, 0);
    if (s >= 1) {
        for (int i = 0; i <= d; ++i) {
            if (!cf[i]) continue;
            for (int j = 0; j <= d; ++j)
                if (cf[j]) w2[i + j] = ops.add(w2[i + j], ops.mul(cf[i], cf[j]));
        }
    }
    if (s == 0) {
        for (int k = 0; k <= K2; ++k) A.t2[k][0] = ops.add(A.t2[k][0], b2[k]);
    } else if (s == 1) {
        for (int k = 0; k <= K2; ++k) {
            if (!b2[k]) continue;
            auto* row = A.t2[k].data();
            for (int i = 0; i <= 2 * d; ++i)
                if (w2[i]) row[i] = ops.add(row[i], ops.mul(b2[k], w2[i]));
        }
    } else {
        const int gs = A.gs2;
        for (int k = 0; k <= K2; ++k) {
            if (!b2[k]) continue;
            auto* row = A.t2[k].data();
            for (int i = 0; i <= 2 * d; ++i) {
                if (!w2[i]) continue;
                std::uint32_t w = ops.mul(b2[k], w2[i]);
                auto* rr = row + static_cast<size_t>(i) * gs;
                for (int j = 0; j <= 2 * d; ++j) rr[j] = ops.add(rr[j], ops.mul(w, w2[j]));
            }
        }
    }
}

// grid -> coefficient-field element
inline KElem grid_to_kelem(const KField* f, const std::vector<std::uint32_t>& g, int gs,
                           int s) {
    if (s == 0) return KElem::scalar(f, g[0]);
    int rows = (s == 2) ? gs : 1;
    BPoly b(rows);
    for (int j = 0; j < rows; ++j) {
        UPoly row(gs, 0);
        for (int i = 0; i < gs; ++i)
            row[i] = (s == 2) ? g[static_cast<size_t>(i) * gs + j] : g[i];
        utrim(row);
        b[j] = std::move(row);
    }
    btrim(b);
    if (bis_zero(b)) return KElem::zero(f);
    return KElem::from_poly(f, std::move(b));
}

// Scan the sieve for degree d, accumulating across a worker pool; results
// merge in fixed chunk order (exact arithmetic makes any order identical).
// The coefficient vector is maintained as a base-q odometer, so decoding a
// candidate costs O(1) amortized rather than d divisions.
template <class Ops, class Body>
void scan_primes(const Ops&, const GFContext* base, int d, int workers, Body&& body,
                 std::vector<BlockAccum>& accs) {
    const std::vector<std::uint64_t>& bits = pdetail::composite_bits_cached(base, d);
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= base->size();
    workers = std::max(1, std::min(workers, 8));
    std::vector<std::thread> pool;
    std::uint64_t chunk = (total + workers - 1) / workers;
    const std::int64_t q = base->size();
    for (int w = 0; w < workers; ++w) {
        std::uint64_t lo = w * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi]() {
            std::uint32_t cf[64];
            std::uint64_t t = lo;
            for (int i = 0; i < d; ++i) {
                cf[i] = static_cast<std::uint32_t>(t % q);
                t /= q;
            }
            cf[d] = 1;
            for (std::uint64_t c = lo; c < hi; ++c) {
                if (!(bits[c >> 6] & (std::uint64_t(1) << (c & 63)))) body(accs[w], cf);
                // odometer step
                int i = 0;
                while (i < d && cf[i] == q - 1) cf[i++] = 0;
                if (i < d) ++cf[i];
            }
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace lsdetail

}  // namespace carlitz

#include "carlitz/lseries_dp.hpp"

namespace carlitz {
namespace lsdetail {

// ---------------------------------------------------------------------------
// Per-degree Euler blocks. A block is the truncated product of the factors
// [Lie]/[E] = P^n/(P^n - rho(P)) over the primes of one degree, reported as
// a Laurent series congruent to 1.
// ---------------------------------------------------------------------------

struct EulerPlan {
    AlphaKind kind;
    ThetaPoly alpha;
    int n;
    int s;
    std::int64_t N;
};

// small-degree path: per-prime factor series, multiplied into the block
inline LaurentSeries block_by_factor_products(const EulerPlan& pl, int d) {
    const KField* f = pl.alpha.field();
    const std::int64_t N = pl.N;
    LaurentSeries block = LaurentSeries::one(f, N);
    for_each_prime_of_degree(f->base, d, [&](std::uint64_t code) {
        PrimePoly P = PrimePoly::from_code(f->base, d, code);
        ThetaPoly Pl = P.lift(f);
        KElem r;
        switch (pl.kind) {
            case AlphaKind::one: r = KElem::one(f); break;
            case AlphaKind::pellarin: {
                r = Pl.eval(KElem::t_var(f, 0));
                if (pl.s == 2) r = r * Pl.eval(KElem::t_var(f, 1));
                break;
            }
            default: r = resultant_rec(Pl, pl.alpha);
        }
        // factor = (1 - r/P^n)^(-1) = 1 + sum_j r^j / P^(nj)
        LaurentSeries invPn = LaurentSeries::from_poly(Pl, N + std::int64_t(pl.n) * d).inverse();
        LaurentSeries ipow = invPn;
        for (int rep = 1; rep < pl.n; ++rep) ipow = ipow * invPn;
        LaurentSeries factor = LaurentSeries::one(f, N);
        LaurentSeries term = LaurentSeries::one(f, N);
        KElem rj = KElem::one(f);
        for (int j = 1; std::int64_t(j) * pl.n * d <= N; ++j) {
            term = (term * ipow).truncated(N);
            rj = rj * r;
            factor = factor + term * rj;
        }
        if (factor.valuation() != 0 || !(factor.coeff(0).is_one()))
            throw InternalError("euler factor does not start at 1");
        // every omitted digit of the factor is below the stated valuation
        block = (block * factor).truncated(N);
    });
    return block;
}

// additive path driver: accumulate power sums over the sieve, then combine
inline LaurentSeries block_additive(const EulerPlan& pl, int d, bool pairs, int workers) {
    const KField* f = pl.alpha.field();
    const GFContext* base = f->base;
    std::vector<BlockAccum> accs(std::max(1, std::min(workers, 8)));
    for (auto& a : accs) a.init(d, pl.n, pl.s, static_cast<int>(pl.N), pairs);
    auto run = [&](auto ops) {
        scan_primes(ops, base, d, static_cast<int>(accs.size()),
                    [&](BlockAccum& A, const std::uint32_t* cf) {
                        accumulate_prime(ops, A, cf);
                    },
                    accs);
    };
    if (base->p() == 2 && base->deg() == 1) run(OpsF2{});
    else if (base->p() == 3 && base->deg() == 1) run(OpsF3{});
    else run(OpsGen{base});
    for (size_t w = 1; w < accs.size(); ++w) accs[0].merge(accs[w], base);
    const BlockAccum& A = accs[0];

    LaurentSeries T1(f, pl.N);
    for (int k = 0; k < static_cast<int>(A.t1.size()); ++k) {
        KElem c = grid_to_kelem(f, A.t1[k], A.gs1, pl.s);
        if (!c.is_zero()) T1.set(-(std::int64_t(pl.n) * d + k), c);
    }
    LaurentSeries block = LaurentSeries::one(f, pl.N) + T1;
    if (pairs) {
        LaurentSeries T2(f, pl.N);
        for (int k = 0; k < static_cast<int>(A.t2.size()); ++k) {
            KElem c = grid_to_kelem(f, A.t2[k], A.gs2, pl.s);
            if (!c.is_zero()) T2.set(-(2 * std::int64_t(pl.n) * d + k), c);
        }
        // complete homogeneous h_2 = (T1^2 + T2)/2; valid since p != 2 here
        KElem half = KElem::from_int(f, 2).inv();
        block = block + ((T1 * T1).truncated(pl.N) + T2) * half;
    }
    return block;
}

inline LaurentSeries euler_block(const EulerPlan& pl, int d, int workers) {
    const KField* f = pl.alpha.field();
    const std::int64_t nd = std::int64_t(pl.n) * d;
    int jmax = static_cast<int>(pl.N / nd);
    std::uint64_t sz = 1;
    bool enumerable = true;
    for (int i = 0; i < d; ++i) {
        sz *= f->q();
        if (sz > pdetail::kSieveLimit) { enumerable = false; break; }
    }
    // orbit summation beats sieving well before the sieve limit
    if (jmax == 1 && d % f->p() != 0 && sz > (std::uint64_t(1) << 22)) {
        LaurentSeries T1 = prime_power_sum(pl.alpha, pl.n, d, pl.N);
        return LaurentSeries::one(f, pl.N) + T1;
    }
    if (enumerable) {
        bool window_ok = (pl.N - nd) < 120;  // fixed kernel buffers
        bool plain = (pl.kind == AlphaKind::one || pl.kind == AlphaKind::pellarin) &&
                     f->m() == 1;
        if (jmax == 1 && window_ok && plain)
            return block_additive(pl, d, false, workers);
        if (jmax == 2 && window_ok && plain && f->p() != 2)
            return block_additive(pl, d, true, workers);
        return block_by_factor_products(pl, d);
    }
    // beyond the sieve: prime power sums by orbit summation (needs the
    // degree prime to the characteristic and a singleton-only window)
    if (jmax != 1)
        throw DomainError("euler_product: degree " + std::to_string(d) +
                          " needs pair terms but is beyond the sieve limit");
    if (d % f->p() == 0)
        throw DomainError("euler_product: degree " + std::to_string(d) +
                          " is divisible by the characteristic and beyond the sieve limit");
    LaurentSeries T1 = prime_power_sum(pl.alpha, pl.n, d, pl.N);
    return LaurentSeries::one(f, pl.N) + T1;
}

}  // namespace lsdetail

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

// L(E) = prod over primes of [Lie(E)(A/P x k)]/[E(A/P x k)], truncated at N.
// Modules of the standard twisted-Carlitz shape use the closed-form factors
// P^n/(P^n - rho_alpha(P)); anything else runs the two Fitting generators
// per prime.
inline LValue euler_product(const AndersonModule& E, std::int64_t N) {
    if (N < 1) throw UsageError("euler_product: N >= 1 required");
    const KField* f = E.field();
    const int n = E.dim();
    LValue out;
    out.n = n;
    out.s = f->s;
    out.prec = N;
    out.method = LMethod::euler;
    int workers = worker_count();

    auto alpha = E.e_alpha_form();
    if (alpha) {
        lsdetail::EulerPlan pl{lsdetail::classify_alpha(*alpha, f->s), *alpha, n, f->s, N};
        out.module_desc = pl.kind == lsdetail::AlphaKind::one
                              ? ("C^" + std::to_string(n))
                              : ("E_alpha n=" + std::to_string(n));
        LaurentSeries acc = LaurentSeries::one(f, N);
        int D = static_cast<int>(N / n);
        out.degree_bound = D;
        for (int d = 1; d <= D; ++d)
            acc = (acc * lsdetail::euler_block(pl, d, workers)).truncated(N);
        out.value = acc;
        return out;
    }

    // general module: honest per-prime Fitting quotients
    out.module_desc = "anderson n=" + std::to_string(n);
    int D = static_cast<int>(N / n);
    out.degree_bound = D;
    std::uint64_t count = 1;
    for (int i = 0; i < D; ++i) {
        count *= f->q();
        if (count > (std::uint64_t(1) << 24))
            throw DomainError("euler_product: precision out of reach for a general module");
    }
    LaurentSeries acc = LaurentSeries::one(f, N);
    for (const auto& P : enumerate_primes(f->base, D)) {
        ThetaPoly gl = fitting_generator(lie_mod_p(E, P));
        ThetaPoly ge = fitting_generator(e_mod_p(E, P));
        LaurentSeries num = LaurentSeries::from_poly(gl, N + gl.deg() + ge.deg());
        LaurentSeries den = LaurentSeries::from_poly(ge, N + gl.deg() + ge.deg());
        LaurentSeries factor = num / den;
        if (factor.is_zero() || factor.valuation() != 0 || !factor.coeff(0).is_one())
            throw InternalError("euler factor does not start at 1");
        LaurentSeries dev = factor - LaurentSeries::one(f, N);
        if (!dev.is_zero() && dev.valuation() < std::int64_t(n) * P.deg())
            throw InternalError("euler factor deviates above the expected valuation");
        acc = (acc * factor).truncated(N);
    }
    out.value = acc;
    return out;
}

// Direct summation: sum over monic a of rho_alpha(a)/a^n. Degree blocks are
// included exactly when the orthogonality bound allows them to touch the
// precision window; over each omitted block the coefficient-wise sum over
// GF(q)^d kills every monomial below the bound, so the reported
// coefficients agree with the full sum.
inline std::int64_t dirichlet_block_bound(std::int64_t q, int n, int deg_alpha, int d) {
    std::int64_t quad = (q - 1) * (std::int64_t(d) * (d + 1) / 2) - std::int64_t(deg_alpha) * d;
    return std::int64_t(n) * d + std::max<std::int64_t>(0, quad);
}

inline LValue dirichlet_sum(const ThetaPoly& alpha, int n, std::int64_t N) {
    if (n < 1) throw UsageError("dirichlet_sum: n >= 1 required");
    if (alpha.is_zero()) throw DomainError("dirichlet_sum: alpha must be nonzero");
    const KField* f = alpha.field();
    auto kind = lsdetail::classify_alpha(alpha, f->s);
    LValue out;
    out.module_desc = "sum";
    out.n = n;
    out.s = f->s;
    out.prec = N;
    out.method = LMethod::sum;
    LaurentSeries acc = LaurentSeries::zero(f, N);
    int D = 0;
    for (int d = 0; std::int64_t(d) * n <= N; ++d) {
        if (d > 0 && dirichlet_block_bound(f->q(), n, alpha.deg(), d) > N) continue;
        D = d;
        std::uint64_t cnt = 1;
        for (int i = 0; i < d; ++i) {
            cnt *= f->q();
            if (cnt > (std::uint64_t(1) << 22))
                throw DomainError("dirichlet_sum: block too large at this precision");
        }
        for (std::uint64_t code = 0; code < cnt; ++code) {
            // monic a of degree d from the packed code
            std::vector<KElem> cf(d + 1, KElem::zero(f));
            std::uint64_t t = code;
            for (int i = 0; i < d; ++i) {
                cf[i] = KElem::scalar(f, f->k->embed(f->base, static_cast<code_t>(t % f->q())));
                t /= f->q();
            }
            cf[d] = KElem::one(f);
            ThetaPoly a(f, std::move(cf));
            KElem r;
            switch (kind) {
                case lsdetail::AlphaKind::one: r = KElem::one(f); break;
                case lsdetail::AlphaKind::pellarin: {
                    r = a.eval(KElem::t_var(f, 0));
                    if (f->s == 2) r = r * a.eval(KElem::t_var(f, 1));
                    break;
                }
                default: r = lsdetail::resultant_rec(a, alpha);
            }
            if (r.is_zero()) continue;
            LaurentSeries ia = LaurentSeries::from_poly(a, N + std::int64_t(n) * d).inverse();
            LaurentSeries term = ia;
            for (int rep = 1; rep < n; ++rep) term = term * ia;
            acc = acc + (term * r).truncated(N);
        }
    }
    out.degree_bound = D;
    out.value = acc;
    return out;
}

inline LValue carlitz_zeta(const KField* f, int n, std::int64_t N) {
    if (f->s != 0)
        throw UsageError("carlitz_zeta: use an s = 0 coefficient field");
    LValue v = dirichlet_sum(ThetaPoly::one(f), n, N);
    v.module_desc = "zeta";
    return v;
}

inline LValue pellarin_value(const KField* f, int n, std::int64_t N) {
    if (f->s < 1 || f->s > 2)
        throw UsageError("pellarin_value: 1 <= s <= 2 required");
    LValue v = dirichlet_sum(lsdetail::pellarin_alpha(f, f->s), n, N);
    v.module_desc = "pellarin";
    return v;
}

// residual check of L(E) against a supplied lattice basis for the inverse
// image of the integral points and a supplied class-module generator
inline ClassFormulaReport class_formula_residual(const AndersonModule& E,
                                                 const LatticeBasis& lattice,
                                                 const ThetaPoly& h_fitting, std::int64_t N) {
    const KField* f = E.field();
    const int n = E.dim();
    if (static_cast<int>(lattice.vecs.size()) != n || lattice.ambient_dim() != n)
        throw DomainError("class_formula_residual: lattice basis must be n vectors in n-space");
    for (const auto& v : lattice.vecs)
        for (const auto& c : v)
            if (c.prec() < N)
                throw PrecisionError("class_formula_residual: lattice precision below N", N);
    ClassFormulaReport rep;
    rep.prec = N;
    rep.lhs = euler_product(E, N);
    // canonical basis of the Lie lattice
    std::int64_t bp = 0;
    for (const auto& v : lattice.vecs)
        for (const auto& c : v) bp = std::max(bp, c.prec());
    LatticeBasis canon;
    for (int j = 0; j < n; ++j) {
        LieVector v;
        for (int i = 0; i < n; ++i)
            v.push_back(i == j ? LaurentSeries::one(f, bp) : LaurentSeries::zero(f, bp));
        canon.vecs.push_back(std::move(v));
    }
    rep.index = lattice_index(canon, lattice);
    rep.rhs = (rep.index * LaurentSeries::from_poly(h_fitting, rep.index.prec())).truncated(
        std::min(N, rep.index.prec()));
    if (rep.rhs.prec() < N)
        throw PrecisionError("class_formula_residual: supplied data cannot reach N", N);
    rep.rhs = rep.rhs.truncated(N);
    rep.residual = rep.lhs.value - rep.rhs;
    rep.residual_valuation = rep.residual.valuation();
    rep.pass = rep.residual_valuation > N;
    return rep;
}

}  // namespace carlitz

#endif
