#ifndef CARLITZ_LSERIES_DP_HPP
#define CARLITZ_LSERIES_DP_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "carlitz/laurent.hpp"

namespace carlitz {
namespace lsdetail {

// ---------------------------------------------------------------------------
// Prime power sums without prime enumeration.
//
// For a degree-d prime P with root beta, both rho_alpha(P) and the top of
// the 1/P^n expansion factor through the conjugates of beta:
//
//   rho_alpha(P) / P^n = theta^(-nd) * prod_{l<d} F(beta^(q^l)),
//   F(x) = alpha(x) * sum_k binom(n+k-1, k) x^k theta^(-k)   (k <= N - nd).
//
// Summing prod_l F(beta^(q^l)) over every beta in GF(q^d)* needs only the
// coefficients of beta^M with M divisible by q^d - 1 (all other monomials
// cancel), and those coefficients come from a digit dynamic program over
// the base-q positions of M. Subfield elements are removed by recursion
// over divisors, and each degree-d orbit is counted d times, so the final
// division by d requires d prime to the characteristic.
// ---------------------------------------------------------------------------

struct Tail {
    // c[k] multiplies theta^(-k); fixed length M+1
    std::vector<KElem> c;

    static Tail zero(const KField* f, int M) {
        return Tail{std::vector<KElem>(M + 1, KElem::zero(f))};
    }
    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
};

inline Tail tail_add(const Tail& a, const Tail& b) {
    Tail r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
    return r;
}

inline Tail tail_mul(const Tail& a, const Tail& b, const KField* f) {
    int M = static_cast<int>(a.c.size()) - 1;
    Tail r = Tail::zero(f, M);
    for (int i = 0; i <= M; ++i) {
        if (a.c[i].is_zero()) continue;
        for (int j = 0; i + j <= M; ++j)
            if (!b.c[j].is_zero()) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
    }
    return r;
}

using XPoly = std::vector<Tail>;  // coefficient of x^k

inline XPoly xp_mul(const XPoly& a, const XPoly& b, const KField* f) {
    int M = static_cast<int>(a[0].c.size()) - 1;
    XPoly r(a.size() + b.size() - 1, Tail::zero(f, M));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] = tail_add(r[i + j], tail_mul(a[i], b[j], f));
    }
    return r;
}

class PrimePowerSum {
  public:
    PrimePowerSum(const ThetaPoly& alpha, int n, int d, std::int64_t N)
        : f_(alpha.field()), q_(f_->q()), d_(d), M_(static_cast<int>(N - std::int64_t(n) * d)) {
        if (M_ < 0) throw InternalError("prime_power_sum: empty window");
        // F(x) = alpha(x) * truncated binomial tail
        XPoly tail_part(M_ + 1, Tail::zero(f_, M_));
        for (int k = 0; k <= M_; ++k) {
            std::int64_t b = binom_mod_p(n + k - 1, k, f_->p());
            if (b != 0) tail_part[k].c[k] = KElem::from_int(f_, b);
        }
        XPoly al(alpha.deg() + 1, Tail::zero(f_, M_));
        for (int i = 0; i <= alpha.deg(); ++i) al[i].c[0] = alpha.coeff(i);
        F_ = xp_mul(al, tail_part, f_);
    }

    // sum over primes of degree exactly d of the per-prime tail (theta^(nd)
    // normalized); requires gcd(d, p) = 1
    Tail run() {
        if (d_ % f_->p() == 0)
            throw InternalError("prime_power_sum: degree divisible by the characteristic");
        Tail y = S(d_, 1);
        KElem invd = KElem::from_int(f_, d_).inv();
        for (auto& c : y.c) c = c * invd;
        return y;
    }

  private:
    const XPoly& Fpow(int j) {
        auto it = fpow_.find(j);
        if (it != fpow_.end()) return it->second;
        XPoly r;
        if (j == 1) {
            r = F_;
        } else {
            r = xp_mul(Fpow(j - 1), F_, f_);
        }
        return fpow_.emplace(j, std::move(r)).first->second;
    }

    // sum over all beta in GF(q^e) of prod_{l<e} G(beta^(q^l)):
    // equals -sum_{m>=1} [beta^(m(q^e-1))] of the product
    Tail sum_all(int e, const XPoly& G) {
        int Kg = static_cast<int>(G.size()) - 1;
        Tail acc = Tail::zero(f_, M_);
        std::int64_t qe = 1;
        for (int i = 0; i < e; ++i) qe *= q_;
        int mmax = Kg / static_cast<int>(q_ - 1);
        for (int m = 1; m <= mmax; ++m) {
            std::int64_t target = std::int64_t(m) * (qe - 1);
            acc = tail_add(acc, coeff_at(e, G, target, qe));
        }
        for (auto& c : acc.c) c = -c;
        return acc;
    }

    // coefficient of beta^target in prod_{l<e} G(beta^(q^l)) by digit DP
    Tail coeff_at(int e, const XPoly& G, std::int64_t target, std::int64_t qe) {
        int Kg = static_cast<int>(G.size()) - 1;
        std::int64_t high = target / qe;
        std::vector<int> digit(e);
        std::int64_t low = target % qe;
        for (int l = 0; l < e; ++l) {
            digit[l] = static_cast<int>(low % q_);
            low /= q_;
        }
        int cmax = Kg / static_cast<int>(q_ - 1) + 1;
        std::vector<Tail> dp(cmax + 1, Tail::zero(f_, M_));
        dp[0].c[0] = KElem::one(f_);
        for (int l = 0; l < e; ++l) {
            std::vector<Tail> nd(cmax + 1, Tail::zero(f_, M_));
            for (int c = 0; c <= cmax; ++c) {
                if (dp[c].is_zero()) continue;
                int k0 = static_cast<int>(((digit[l] - c) % q_ + q_) % q_);
                for (int k = k0; k <= Kg; k += static_cast<int>(q_)) {
                    if (G[k].is_zero()) continue;
                    std::int64_t carry = (std::int64_t(k) + c - digit[l]) / q_;
                    if (carry > cmax) continue;
                    nd[carry] = tail_add(nd[carry], tail_mul(dp[c], G[k], f_));
                }
            }
            dp.swap(nd);
        }
        if (high <= cmax) return dp[static_cast<size_t>(high)];
        return Tail::zero(f_, M_);
    }

    // sum over beta of degree exactly e of [prod_{l<e} F(beta^(q^l))]^j
    Tail S(int e, int j) {
        auto key = std::make_pair(e, j);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Tail r = sum_all(e, Fpow(j));
        for (int ep = 1; ep < e; ++ep)
            if (e % ep == 0) r = tail_add(r, neg(S(ep, j * (e / ep))));
        memo_.emplace(key, r);
        return r;
    }

    static Tail neg(Tail t) {
        for (auto& c : t.c) c = -c;
        return t;
    }

    const KField* f_;
    std::int64_t q_;
    int d_, M_;
    XPoly F_;
    std::map<int, XPoly> fpow_;
    std::map<std::pair<int, int>, Tail> memo_;
};

// sum over degree-d primes of rho_alpha(P)/P^n, as a Laurent series mod
// theta^-(N+1)
inline LaurentSeries prime_power_sum(const ThetaPoly& alpha, int n, int d, std::int64_t N) {
    const KField* f = alpha.field();
    PrimePowerSum engine(alpha, n, d, N);
    Tail t = engine.run();
    LaurentSeries out(f, N);
    for (int k = 0; k < static_cast<int>(t.c.size()); ++k)
        if (!t.c[k].is_zero()) out.set(-(std::int64_t(n) * d + k), t.c[k]);
    return out;
}

}  // namespace lsdetail
}  // namespace carlitz

#endif
