#ifndef CARLITZ_FRAC_HPP
#define CARLITZ_FRAC_HPP

#include <cstdint>
#include <map>
#include <utility>

#include "carlitz/laurent.hpp"
#include "carlitz/theta.hpp"

namespace carlitz {

// ---------------------------------------------------------------------------
// Reduced fractions of theta-polynomials (the field k(theta)), denominator
// monic. General-purpose; used for matrix entries, oracles and output. The
// exponential/logarithm engine uses the factored representation below
// instead, which never runs a gcd.
// ---------------------------------------------------------------------------
class ThetaFrac {
  public:
    ThetaFrac() = default;
    explicit ThetaFrac(const ThetaPoly& n)
        : num_(n), den_(ThetaPoly::one(n.field())) {}
    ThetaFrac(ThetaPoly n, ThetaPoly d) { assign(std::move(n), std::move(d)); }

    static ThetaFrac zero(const KField* f) { return ThetaFrac(ThetaPoly::zero(f)); }
    static ThetaFrac one(const KField* f) { return ThetaFrac(ThetaPoly::one(f)); }

    const ThetaPoly& num() const { return num_; }
    const ThetaPoly& den() const { return den_; }
    const KField* field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.deg() == 0; }

    std::int64_t valuation() const {
        if (num_.is_zero()) return kValInf;
        return den_.deg() - num_.deg();
    }

    friend ThetaFrac operator+(const ThetaFrac& a, const ThetaFrac& b) {
        return ThetaFrac(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend ThetaFrac operator-(const ThetaFrac& a, const ThetaFrac& b) { return a + (-b); }
    ThetaFrac operator-() const {
        ThetaFrac r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend ThetaFrac operator*(const ThetaFrac& a, const ThetaFrac& b) {
        return ThetaFrac(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend ThetaFrac operator/(const ThetaFrac& a, const ThetaFrac& b) {
        if (b.is_zero()) throw DomainError("ThetaFrac: division by zero");
        return ThetaFrac(a.num_ * b.den_, a.den_ * b.num_);
    }
    ThetaFrac inv() const {
        if (is_zero()) throw DomainError("ThetaFrac: inverse of zero");
        return ThetaFrac(den_, num_);
    }
    friend bool operator==(const ThetaFrac& a, const ThetaFrac& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const ThetaFrac& a, const ThetaFrac& b) { return !(a == b); }

    ThetaFrac twisted(int k) const {
        if (k == 0) return *this;
        ThetaFrac r;
        r.num_ = frobenius_twist(num_, k);
        r.den_ = frobenius_twist(den_, k);
        return r;
    }

    LaurentSeries to_laurent(std::int64_t prec) const {
        const KField* f = field();
        if (num_.is_zero()) return LaurentSeries::zero(f, prec);
        // pad so the division lands at the requested absolute precision
        std::int64_t pad = prec + num_.deg() + 2 * den_.deg() + 2;
        LaurentSeries n = LaurentSeries::from_poly(num_, pad);
        LaurentSeries d = LaurentSeries::from_poly(den_, pad);
        return (n / d).truncated(prec);
    }

  private:
    void assign(ThetaPoly n, ThetaPoly d) {
        if (d.is_zero()) throw DomainError("ThetaFrac: zero denominator");
        if (n.is_zero()) {
            num_ = n;
            den_ = ThetaPoly::one(n.field());
            return;
        }
        ThetaPoly g = gcd(n, d);
        if (g.deg() > 0) {
            n = divexact(n, g);
            d = divexact(d, g);
        }
        KElem u = d.lead().inv();
        num_ = n * u;
        den_ = d * u;
    }

    ThetaPoly num_, den_;
};

inline std::int64_t gauss_valuation(const ThetaFrac& f) { return f.valuation(); }

// ---------------------------------------------------------------------------
// Fractions whose denominator is a monomial product of the "twist atoms"
// c_{u,v} = theta^(q^u) - theta^(q^v), u > v >= 0. The exponential and
// logarithm coefficient recursions only ever divide by such atoms, so this
// closed representation supports them with sparse arithmetic only: scaling
// by an atom is a shift-subtract, never a gcd.
// ---------------------------------------------------------------------------
class FactoredFrac {
  public:
    using Atom = std::pair<int, int>;  // (u, v), u > v >= 0
    using Den = std::map<Atom, int>;

    FactoredFrac() = default;
    explicit FactoredFrac(ThetaPoly n) : num_(std::move(n)) {}
    FactoredFrac(ThetaPoly n, Den d) : num_(std::move(n)), den_(std::move(d)) {
        if (num_.is_zero()) den_.clear();
        reduce();
    }

    static FactoredFrac zero(const KField* f) { return FactoredFrac(ThetaPoly::zero(f)); }
    static FactoredFrac one(const KField* f) { return FactoredFrac(ThetaPoly::one(f)); }

    static ThetaPoly atom_poly(const KField* f, int u, int v) {
        std::int64_t qu = 1, qv = 1;
        for (int i = 0; i < u; ++i) qu *= f->q();
        for (int i = 0; i < v; ++i) qv *= f->q();
        ThetaPoly r = ThetaPoly::monomial(KElem::one(f), static_cast<int>(qu));
        return r - ThetaPoly::monomial(KElem::one(f), static_cast<int>(qv));
    }

    const ThetaPoly& num() const { return num_; }
    const Den& den() const { return den_; }
    const KField* field() const { return num_.field(); }
    bool is_zero() const { return num_.is_zero(); }

    std::int64_t valuation() const {
        if (num_.is_zero()) return kValInf;
        std::int64_t v = -num_.deg();
        for (const auto& [a, e] : den_) v += std::int64_t(e) * qpow(a.first);
        return v;
    }

    friend FactoredFrac operator+(const FactoredFrac& x, const FactoredFrac& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        const KField* f = x.field();
        // common denominator = atom-wise max
        Den cd = x.den_;
        for (const auto& [a, e] : y.den_) {
            auto it = cd.find(a);
            if (it == cd.end()) cd[a] = e;
            else it->second = std::max(it->second, e);
        }
        ThetaPoly nx = x.num_, ny = y.num_;
        for (const auto& [a, e] : cd) {
            int ex = 0, ey = 0;
            if (auto it = x.den_.find(a); it != x.den_.end()) ex = it->second;
            if (auto it = y.den_.find(a); it != y.den_.end()) ey = it->second;
            ThetaPoly ap = atom_poly(f, a.first, a.second);
            for (int i = ex; i < e; ++i) nx = nx * ap;
            for (int i = ey; i < e; ++i) ny = ny * ap;
        }
        return FactoredFrac(nx + ny, std::move(cd));
    }
    friend FactoredFrac operator-(const FactoredFrac& x, const FactoredFrac& y) {
        return x + (-y);
    }
    FactoredFrac operator-() const {
        FactoredFrac r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend FactoredFrac operator*(const FactoredFrac& x, const FactoredFrac& y) {
        if (x.is_zero() || y.is_zero()) return zero(x.field());
        Den d = x.den_;
        for (const auto& [a, e] : y.den_) d[a] += e;
        return FactoredFrac(x.num_ * y.num_, std::move(d));
    }
    friend FactoredFrac operator*(const FactoredFrac& x, const ThetaPoly& p) {
        return FactoredFrac(x.num_ * p, x.den_);
    }
    friend FactoredFrac operator*(const FactoredFrac& x, const KElem& s) {
        return FactoredFrac(x.num_ * s, x.den_);
    }

    FactoredFrac div_atom(int u, int v, int e = 1) const {
        FactoredFrac r = *this;
        if (r.is_zero()) return r;
        r.den_[{u, v}] += e;
        r.reduce();
        return r;
    }

    FactoredFrac twisted(int k) const {
        if (k == 0) return *this;
        FactoredFrac r;
        r.num_ = frobenius_twist(num_, k);
        for (const auto& [a, e] : den_) r.den_[{a.first + k, a.second + k}] = e;
        return r;
    }

    ThetaPoly den_poly() const {
        ThetaPoly d = ThetaPoly::one(field());
        for (const auto& [a, e] : den_) {
            ThetaPoly ap = atom_poly(field(), a.first, a.second);
            for (int i = 0; i < e; ++i) d = d * ap;
        }
        return d;
    }

    ThetaFrac to_frac() const { return ThetaFrac(num_, den_poly()); }

    friend bool operator==(const FactoredFrac& x, const FactoredFrac& y) {
        return (x - y).is_zero();
    }
    friend bool operator!=(const FactoredFrac& x, const FactoredFrac& y) { return !(x == y); }

    LaurentSeries to_laurent(std::int64_t prec) const {
        const KField* f = field();
        if (is_zero()) return LaurentSeries::zero(f, prec);
        // numerator is exact; each atom inverse is a sparse geometric series
        std::int64_t pad = prec + std::max<std::int64_t>(0, -valuation()) + 1;
        LaurentSeries acc = LaurentSeries::from_poly(num_, pad + num_.deg());
        for (const auto& [a, e] : den_)
            for (int i = 0; i < e; ++i)
                acc = acc * atom_inverse(f, a.first, a.second, pad + qpow(a.first));
        return acc.truncated(prec);
    }

    // (theta^(q^u) - theta^(q^v))^{-1} = theta^(-q^u) * sum theta^(-k(q^u-q^v))
    static LaurentSeries atom_inverse(const KField* f, int u, int v, std::int64_t prec) {
        std::int64_t qu = 1, qv = 1;
        for (int i = 0; i < u; ++i) qu *= f->q();
        for (int i = 0; i < v; ++i) qv *= f->q();
        LaurentSeries r(f, prec);
        for (std::int64_t d = -qu; d >= -prec; d -= (qu - qv)) r.set(d, KElem::one(f));
        return r;
    }

  private:
    std::int64_t qpow(int u) const {
        std::int64_t r = 1;
        for (int i = 0; i < u; ++i) r *= field()->q();
        return r;
    }

    // cancel atoms that divide the numerator exactly
    void reduce() {
        if (num_.is_zero()) {
            den_.clear();
            return;
        }
        for (auto it = den_.begin(); it != den_.end();) {
            ThetaPoly ap = atom_poly(field(), it->first.first, it->first.second);
            while (it->second > 0) {
                ThetaPoly q, r;
                divrem(num_, ap, q, r);
                if (!r.is_zero()) break;
                num_ = std::move(q);
                --it->second;
            }
            if (it->second == 0) it = den_.erase(it);
            else ++it;
        }
    }

    ThetaPoly num_;
    Den den_;
};

inline std::int64_t gauss_valuation(const FactoredFrac& f) { return f.valuation(); }

}  // namespace carlitz

#endif
