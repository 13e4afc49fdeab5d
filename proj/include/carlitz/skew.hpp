#ifndef CARLITZ_SKEW_HPP
#define CARLITZ_SKEW_HPP

#include <cstdint>
#include <vector>

#include "carlitz/frac.hpp"
#include "carlitz/laurent.hpp"
#include "carlitz/matrix.hpp"

namespace carlitz {

// tau twist dispatch for entry types
inline ThetaPoly tau_twist(const ThetaPoly& x, int k) { return frobenius_twist(x, k); }
inline ThetaFrac tau_twist(const ThetaFrac& x, int k) { return x.twisted(k); }
inline FactoredFrac tau_twist(const FactoredFrac& x, int k) { return x.twisted(k); }
inline LaurentSeries tau_twist(const LaurentSeries& x, int k) { return x.twisted(k); }

template <class E>
Matrix<E> tau_twist(const Matrix<E>& m, int k) {
    if (k == 0) return m;
    return m.map([&](const E& x) { return tau_twist(x, k); });
}

// ---------------------------------------------------------------------------
// Twisted polynomials sum B_j tau^j with n x n matrix coefficients and the
// commutation tau * a = tau(a) * tau. E is the entry ring (polynomials in
// theta, reduced fractions, or factored fractions).
// ---------------------------------------------------------------------------
template <class E>
class SkewPolyT {
  public:
    SkewPolyT() : n_(0) {}
    SkewPolyT(int n, std::vector<Matrix<E>> coeffs) : n_(n), c_(std::move(coeffs)) {
        for (const auto& m : c_)
            if (m.rows() != n_ || m.cols() != n_)
                throw DomainError("SkewPoly: coefficient shape mismatch");
        trim();
    }

    static SkewPolyT zero(int n) { return SkewPolyT(n, {}); }
    static SkewPolyT constant(int n, const Matrix<E>& m) { return SkewPolyT(n, {m}); }

    int dim() const { return n_; }
    int tau_deg() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Matrix<E>>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    Matrix<E> coeff(int j, const E& zero) const {
        if (j < 0 || j > tau_deg()) return Matrix<E>::filled(n_, n_, zero);
        return c_[j];
    }

    friend SkewPolyT operator+(const SkewPolyT& a, const SkewPolyT& b) {
        a.check(b);
        std::vector<Matrix<E>> c;
        size_t n = std::max(a.c_.size(), b.c_.size());
        for (size_t j = 0; j < n; ++j) {
            if (j < a.c_.size() && j < b.c_.size()) c.push_back(a.c_[j] + b.c_[j]);
            else if (j < a.c_.size()) c.push_back(a.c_[j]);
            else c.push_back(b.c_[j]);
        }
        return SkewPolyT(a.n_, std::move(c));
    }
    SkewPolyT operator-() const {
        SkewPolyT r = *this;
        for (auto& m : r.c_) m = -m;
        return r;
    }
    friend SkewPolyT operator-(const SkewPolyT& a, const SkewPolyT& b) { return a + (-b); }

    friend bool operator==(const SkewPolyT& a, const SkewPolyT& b) {
        return a.n_ == b.n_ && a.c_ == b.c_;
    }
    friend bool operator!=(const SkewPolyT& a, const SkewPolyT& b) { return !(a == b); }

    void trim() {
        auto zero_mat = [](const Matrix<E>& m) {
            for (int i = 0; i < m.rows(); ++i)
                for (int j = 0; j < m.cols(); ++j)
                    if (!m.at(i, j).is_zero()) return false;
            return true;
        };
        while (!c_.empty() && zero_mat(c_.back())) c_.pop_back();
    }

  private:
    void check(const SkewPolyT& o) const {
        if (n_ != o.n_) throw DomainError("SkewPoly: dimension mismatch");
    }
    int n_;
    std::vector<Matrix<E>> c_;
};

// product under (A tau^i)(B tau^j) = A tau^i(B) tau^(i+j), optionally
// truncated in tau (for series arithmetic)
template <class E>
SkewPolyT<E> skew_mul(const SkewPolyT<E>& a, const SkewPolyT<E>& b, int trunc = -1) {
    if (a.dim() != b.dim()) throw DomainError("skew_mul: dimension mismatch");
    if (a.is_zero() || b.is_zero()) return SkewPolyT<E>::zero(a.dim());
    int top = a.tau_deg() + b.tau_deg();
    if (trunc >= 0) top = std::min(top, trunc);
    std::vector<Matrix<E>> out;
    for (int k = 0; k <= top; ++k) {
        bool started = false;
        Matrix<E> acc;
        for (int i = std::max(0, k - b.tau_deg()); i <= std::min(k, a.tau_deg()); ++i) {
            Matrix<E> term = a.coeffs()[i] * tau_twist(b.coeffs()[k - i], i);
            if (!started) {
                acc = term;
                started = true;
            } else {
                acc = acc + term;
            }
        }
        if (!started) acc = a.coeffs()[0].map([](const E& x) { return x - x; });
        out.push_back(acc);
    }
    return SkewPolyT<E>(a.dim(), std::move(out));
}

// Formal series in tau truncated at a fixed order; coefficient access past
// the truncation order is an error.
template <class E>
class SkewSeriesT {
  public:
    SkewSeriesT(SkewPolyT<E> p, int trunc) : p_(std::move(p)), trunc_(trunc) {
        if (trunc_ < 0) throw DomainError("SkewSeries: negative truncation order");
        if (p_.tau_deg() > trunc_) throw DomainError("SkewSeries: terms beyond truncation");
    }
    const SkewPolyT<E>& terms() const { return p_; }
    int trunc() const { return trunc_; }
    int dim() const { return p_.dim(); }
    Matrix<E> coeff(int j, const E& zero) const {
        if (j > trunc_) throw DomainError("SkewSeries: access beyond truncation order");
        return p_.coeff(j, zero);
    }
    friend SkewSeriesT skew_mul(const SkewSeriesT& a, const SkewSeriesT& b) {
        int t = std::min(a.trunc_, b.trunc_);
        return SkewSeriesT(skew_mul(a.p_, b.p_, t), t);
    }
    friend SkewSeriesT operator+(const SkewSeriesT& a, const SkewSeriesT& b) {
        int t = std::min(a.trunc_, b.trunc_);
        SkewPolyT<E> s = a.p_ + b.p_;
        // drop terms beyond the common truncation
        std::vector<Matrix<E>> c(s.coeffs().begin(),
                                 s.coeffs().begin() + std::min<size_t>(s.coeffs().size(), t + 1));
        return SkewSeriesT(SkewPolyT<E>(s.dim(), std::move(c)), t);
    }
    friend SkewSeriesT operator-(const SkewSeriesT& a, const SkewSeriesT& b) {
        return a + SkewSeriesT(-b.p_, b.trunc_);
    }
    friend bool operator==(const SkewSeriesT& a, const SkewSeriesT& b) {
        return a.trunc_ == b.trunc_ && a.p_ == b.p_;
    }

  private:
    SkewPolyT<E> p_;
    int trunc_;
};

// the public concrete flavor: fraction entries
using SkewPoly = SkewPolyT<ThetaFrac>;
using SkewSeries = SkewSeriesT<ThetaFrac>;

// Laurent conversion hooks for applying a skew polynomial to series vectors
inline LaurentSeries entry_to_laurent(const ThetaPoly& x, std::int64_t prec) {
    return LaurentSeries::from_poly(x, prec);
}
inline LaurentSeries entry_to_laurent(const ThetaFrac& x, std::int64_t prec) {
    return x.to_laurent(prec);
}
inline LaurentSeries entry_to_laurent(const FactoredFrac& x, std::int64_t prec) {
    return x.to_laurent(prec);
}

// sum_j B_j tau^j applied to a vector of Laurent series, exact on reported
// coefficients; throws PrecisionError when the inputs cannot support the
// requested output precision
template <class E>
std::vector<LaurentSeries> skew_apply(const SkewPolyT<E>& f,
                                      const std::vector<LaurentSeries>& x,
                                      std::int64_t prec) {
    if (static_cast<int>(x.size()) != f.dim())
        throw DomainError("skew_apply: vector length mismatch");
    if (x.empty()) return {};
    const KField* fld = x[0].field();
    std::vector<LaurentSeries> out(x.size(), LaurentSeries::zero(fld, prec));
    std::int64_t in_prec = kValInf;
    for (const auto& xi : x) in_prec = std::min(in_prec, xi.prec());
    for (int j = 0; j <= f.tau_deg(); ++j) {
        std::vector<LaurentSeries> tx;
        tx.reserve(x.size());
        std::int64_t maxtop = 0;
        for (const auto& xi : x) {
            tx.push_back(xi.twisted(j));
            if (!tx.back().is_zero()) maxtop = std::max(maxtop, tx.back().top_deg());
        }
        std::int64_t entry_prec = prec + maxtop + 1;
        const Matrix<E>& B = f.coeffs()[j];
        for (int r = 0; r < f.dim(); ++r) {
            for (int c = 0; c < f.dim(); ++c) {
                if (B.at(r, c).is_zero()) continue;
                LaurentSeries b = entry_to_laurent(B.at(r, c), entry_prec);
                out[r] = out[r] + b * tx[c];
            }
        }
    }
    for (auto& o : out) {
        if (o.prec() < prec) {
            std::int64_t required = in_prec + (prec - o.prec());
            throw PrecisionError("skew_apply: input precision too low", required);
        }
        o = o.truncated(prec);
    }
    return out;
}

}  // namespace carlitz

#endif
