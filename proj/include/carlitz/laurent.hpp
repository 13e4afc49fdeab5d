#ifndef CARLITZ_LAURENT_HPP
#define CARLITZ_LAURENT_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "carlitz/errors.hpp"
#include "carlitz/theta.hpp"

namespace carlitz {

// ---------------------------------------------------------------------------
// Truncations of k((1/theta)) with absolute precision tracking.
//
// A series carries coefficients for theta-degrees top..-prec and the promise
// that every coefficient of theta^(-j), j <= prec, is exact. Arithmetic
// propagates precision: add takes the min, mul takes
// min(Na + v(b), Nb + v(a)), and inversion keeps the relative precision
// N + 2*v of the input. An empty coefficient list means "zero to the stated
// precision".
// ---------------------------------------------------------------------------
class LaurentSeries {
  public:
    LaurentSeries() : fld_(nullptr), prec_(0), top_(0) {}
    LaurentSeries(const KField* f, std::int64_t prec) : fld_(f), prec_(prec), top_(0) {}

    static LaurentSeries zero(const KField* f, std::int64_t prec) {
        return LaurentSeries(f, prec);
    }
    static LaurentSeries one(const KField* f, std::int64_t prec) {
        return monomial(KElem::one(f), 0, prec);
    }
    // c * theta^d
    static LaurentSeries monomial(const KElem& c, std::int64_t d, std::int64_t prec) {
        LaurentSeries r(c.field(), prec);
        r.set(d, c);
        return r;
    }
    static LaurentSeries from_poly(const ThetaPoly& p, std::int64_t prec) {
        LaurentSeries r(p.field(), prec);
        for (int i = 0; i <= p.deg(); ++i)
            if (!p.coeff(i).is_zero()) r.set(i, p.coeff(i));
        return r;
    }

    const KField* field() const { return fld_; }
    std::int64_t prec() const { return prec_; }
    std::int64_t top_deg() const { return top_; }
    bool is_zero() const { return c_.empty(); }

    // v_infty; kValInf when zero to this precision
    std::int64_t valuation() const { return c_.empty() ? kValInf : -top_; }

    KElem coeff(std::int64_t d) const {
        if (c_.empty() || d > top_ || d < -prec_) return KElem::zero(fld_);
        return c_[static_cast<size_t>(top_ - d)];
    }

    void set(std::int64_t d, const KElem& v) {
        if (d < -prec_) return;  // below precision, silently dropped
        if (c_.empty()) {
            if (v.is_zero()) return;
            top_ = d;
            c_.assign(static_cast<size_t>(top_ + prec_) + 1, KElem::zero(fld_));
        } else if (d > top_) {
            if (v.is_zero()) return;
            std::vector<KElem> nc(static_cast<size_t>(d + prec_) + 1, KElem::zero(fld_));
            std::copy(c_.begin(), c_.end(), nc.begin() + static_cast<size_t>(d - top_));
            c_ = std::move(nc);
            top_ = d;
        }
        c_[static_cast<size_t>(top_ - d)] = v;
        normalize();
    }

    LaurentSeries truncated(std::int64_t new_prec) const {
        if (new_prec > prec_)
            throw PrecisionError("LaurentSeries: cannot raise precision", new_prec);
        LaurentSeries r(fld_, new_prec);
        for (std::int64_t d = top_; d >= -new_prec; --d) {
            if (c_.empty()) break;
            KElem v = coeff(d);
            if (!v.is_zero()) r.set(d, v);
        }
        return r;
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        a.check(b);
        LaurentSeries r(a.fld_, std::min(a.prec_, b.prec_));
        std::int64_t hi = std::max(a.c_.empty() ? -r.prec_ : a.top_,
                                   b.c_.empty() ? -r.prec_ : b.top_);
        for (std::int64_t d = hi; d >= -r.prec_; --d) {
            KElem v = a.coeff(d) + b.coeff(d);
            if (!v.is_zero()) r.set(d, v);
        }
        return r;
    }
    LaurentSeries operator-() const {
        LaurentSeries r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) {
        return a + (-b);
    }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        a.check(b);
        std::int64_t va = a.c_.empty() ? a.prec_ + 1 : -a.top_;
        std::int64_t vb = b.c_.empty() ? b.prec_ + 1 : -b.top_;
        std::int64_t prec = std::min(a.prec_ + vb, b.prec_ + va);
        prec = std::min(prec, kValInf / 4);
        LaurentSeries r(a.fld_, prec);
        if (a.c_.empty() || b.c_.empty()) return r;
        // accumulate into a flat buffer indexed from the product's top degree
        std::int64_t top = a.top_ + b.top_;
        std::vector<KElem> buf(static_cast<size_t>(top + prec) + 1, KElem::zero(a.fld_));
        for (size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            std::int64_t da = a.top_ - static_cast<std::int64_t>(i);
            for (size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j].is_zero()) continue;
                std::int64_t d = da + b.top_ - static_cast<std::int64_t>(j);
                if (d < -prec) break;
                size_t idx = static_cast<size_t>(top - d);
                buf[idx] = buf[idx] + a.c_[i] * b.c_[j];
            }
        }
        r.top_ = top;
        r.c_ = std::move(buf);
        r.normalize();
        return r;
    }

    friend LaurentSeries operator*(const LaurentSeries& a, const KElem& s) {
        LaurentSeries r = a;
        if (s.is_zero()) return zero(a.fld_, a.prec_);
        for (auto& x : r.c_) x = x * s;
        r.normalize();
        return r;
    }

    // multiply by theta^k
    LaurentSeries shifted(std::int64_t k) const {
        LaurentSeries r = *this;
        r.top_ += k;
        r.prec_ -= k;
        return r;
    }

    // geometric-series inversion of the monic part
    LaurentSeries inverse() const {
        if (c_.empty())
            throw DomainError("LaurentSeries: inverse of (apparent) zero series");
        std::int64_t rel = prec_ + top_;  // known terms past the leading one
        if (rel < 0)
            throw PrecisionError("LaurentSeries: not enough precision to invert", -top_);
        KElem lc = c_[0];
        // g = 1 + sum g_j theta^-j, h = g^{-1} by h_j = -sum_{i>=1} g_i h_{j-i}
        std::vector<KElem> g(static_cast<size_t>(rel) + 1, KElem::zero(fld_));
        for (std::int64_t j = 0; j <= rel; ++j)
            g[static_cast<size_t>(j)] = coeff(top_ - j) / lc;
        std::vector<KElem> h(static_cast<size_t>(rel) + 1, KElem::zero(fld_));
        h[0] = KElem::one(fld_);
        for (std::int64_t j = 1; j <= rel; ++j) {
            KElem acc = KElem::zero(fld_);
            for (std::int64_t i = 1; i <= j; ++i)
                if (!g[static_cast<size_t>(i)].is_zero())
                    acc = acc + g[static_cast<size_t>(i)] * h[static_cast<size_t>(j - i)];
            h[static_cast<size_t>(j)] = -acc;
        }
        LaurentSeries r(fld_, prec_ + 2 * top_);  // = N - 2*v
        KElem ilc = lc.inv();
        for (std::int64_t j = 0; j <= rel; ++j)
            if (!h[static_cast<size_t>(j)].is_zero())
                r.set(-top_ - j, h[static_cast<size_t>(j)] * ilc);
        return r;
    }

    friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
        return a * b.inverse();
    }

    // theta -> theta^(q^k); absolute precision scales by q^k
    LaurentSeries twisted(int k) const {
        if (k == 0) return *this;
        std::int64_t step = 1;
        for (int i = 0; i < k; ++i) step *= fld_->q();
        LaurentSeries r(fld_, prec_ * step);
        for (std::int64_t d = top_; !c_.empty() && d >= -prec_; --d) {
            KElem v = coeff(d);
            if (!v.is_zero()) r.set(d * step, v);
        }
        return r;
    }

    // unit * monic decomposition: monic part has leading coefficient one
    std::pair<KElem, LaurentSeries> monicize() const {
        if (c_.empty()) throw DomainError("monicize: zero series");
        KElem u = c_[0];
        return {u, *this * u.inv()};
    }

    // equality of all coefficients down to min(prec, other.prec)
    friend bool agree(const LaurentSeries& a, const LaurentSeries& b) {
        std::int64_t N = std::min(a.prec_, b.prec_);
        std::int64_t hi = std::max(a.c_.empty() ? -N : a.top_, b.c_.empty() ? -N : b.top_);
        for (std::int64_t d = hi; d >= -N; --d)
            if (a.coeff(d) != b.coeff(d)) return false;
        return true;
    }
    // equality as data (same precision and coefficients)
    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
        return a.fld_ == b.fld_ && a.prec_ == b.prec_ && agree(a, b);
    }

  private:
    void check(const LaurentSeries& o) const {
        if (fld_ != o.fld_) throw InternalError("LaurentSeries: mixed fields");
    }
    void normalize() {
        while (!c_.empty() && c_.front().is_zero()) {
            c_.erase(c_.begin());
            --top_;
        }
        if (c_.empty()) top_ = 0;
    }

    const KField* fld_;
    std::int64_t prec_;
    std::int64_t top_;      // degree of c_[0]
    std::vector<KElem> c_;  // c_[i] = coefficient of theta^(top_ - i), down to -prec_
};

// dispatcher overloads matching the polynomial ones
inline std::int64_t gauss_valuation(const LaurentSeries& f) { return f.valuation(); }

inline LaurentSeries frobenius_twist(const LaurentSeries& f, int k) { return f.twisted(k); }

}  // namespace carlitz

#endif
