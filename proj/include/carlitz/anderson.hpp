#ifndef CARLITZ_ANDERSON_HPP
#define CARLITZ_ANDERSON_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carlitz/skew.hpp"

namespace carlitz {

using LieVector = std::vector<LaurentSeries>;

// ---------------------------------------------------------------------------
// An Anderson module: theta |-> sum A_j tau^j with (A_0 - theta I)^n = 0.
// A_0 = theta I + N with N nilpotent; that splitting is what makes the
// exponential recursion solvable by a finite iteration (see exp_coefficients).
// ---------------------------------------------------------------------------
class AndersonModule {
  public:
    AndersonModule(const KField* f, std::vector<Matrix<ThetaPoly>> A) : fld_(f), A_(std::move(A)) {
        if (A_.empty()) throw DomainError("AndersonModule: empty coefficient list");
        n_ = A_[0].rows();
        if (n_ < 1 || A_[0].cols() != n_)
            throw DomainError("AndersonModule: A_0 must be square");
        for (const auto& m : A_)
            if (m.rows() != n_ || m.cols() != n_)
                throw DomainError("AndersonModule: coefficient dimensions differ");
        while (A_.size() > 1 && is_zero_mat(A_.back())) A_.pop_back();
        // nilpotency (A_0 - theta I)^n = 0
        Matrix<ThetaPoly> N = nilpotent_part();
        Matrix<ThetaPoly> pw = N;
        for (int i = 1; i < n_; ++i) pw = pw * N;
        if (!is_zero_mat(pw))
            throw DomainError("AndersonModule: (A_0 - theta*I)^n != 0");
    }

    const KField* field() const { return fld_; }
    int dim() const { return n_; }
    int tau_deg() const { return static_cast<int>(A_.size()) - 1; }
    const Matrix<ThetaPoly>& A(int j) const { return A_[j]; }
    const std::vector<Matrix<ThetaPoly>>& coeffs() const { return A_; }

    Matrix<ThetaPoly> nilpotent_part() const {
        Matrix<ThetaPoly> N = A_[0];
        ThetaPoly th = ThetaPoly::theta(fld_);
        for (int i = 0; i < n_; ++i) N.at(i, i) = N.at(i, i) - th;
        return N;
    }

    SkewPolyT<ThetaPoly> phi_theta() const { return SkewPolyT<ThetaPoly>(n_, A_); }

    // recognizes the shape A_0 = theta I + superdiagonal, A_1 = alpha in the
    // lower-left corner; returns alpha if so
    std::optional<ThetaPoly> e_alpha_form() const {
        if (tau_deg() != 1) return std::nullopt;
        ThetaPoly th = ThetaPoly::theta(fld_);
        ThetaPoly one = ThetaPoly::one(fld_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const ThetaPoly& x = A_[0].at(i, j);
                if (i == j ? x != th : (j == i + 1 ? x != one : !x.is_zero()))
                    return std::nullopt;
            }
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (!(i == n_ - 1 && j == 0) && !A_[1].at(i, j).is_zero())
                    return std::nullopt;
        return A_[1].at(n_ - 1, 0);
    }

    static bool is_zero_mat(const Matrix<ThetaPoly>& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (!m.at(i, j).is_zero()) return false;
        return true;
    }

  private:
    const KField* fld_;
    int n_;
    std::vector<Matrix<ThetaPoly>> A_;
};

// the module E_alpha: phi_theta = (theta I + superdiagonal) + N_alpha tau;
// alpha = 1 gives the n-th tensor power of the Carlitz module
inline AndersonModule e_alpha_module(const ThetaPoly& alpha, int n) {
    if (alpha.is_zero()) throw DomainError("e_alpha_module: alpha must be nonzero");
    if (n < 1) throw DomainError("e_alpha_module: n >= 1 required");
    const KField* f = alpha.field();
    ThetaPoly z = ThetaPoly::zero(f), one = ThetaPoly::one(f);
    Matrix<ThetaPoly> A0(n, n, z), A1(n, n, z);
    ThetaPoly th = ThetaPoly::theta(f);
    for (int i = 0; i < n; ++i) {
        A0.at(i, i) = th;
        if (i + 1 < n) A0.at(i, i + 1) = one;
    }
    A1.at(n - 1, 0) = alpha;
    return AndersonModule(f, {A0, A1});
}

inline AndersonModule carlitz_module(const KField* f) {
    return e_alpha_module(ThetaPoly::one(f), 1);
}

// substitute phi_theta into a polynomial (Horner in the twisted ring)
inline SkewPolyT<ThetaPoly> phi_extend(const AndersonModule& E, const ThetaPoly& a) {
    const KField* f = E.field();
    int n = E.dim();
    ThetaPoly z = ThetaPoly::zero(f);
    SkewPolyT<ThetaPoly> phi = E.phi_theta();
    SkewPolyT<ThetaPoly> acc = SkewPolyT<ThetaPoly>::zero(n);
    for (int i = a.deg(); i >= 0; --i) {
        acc = skew_mul(acc, phi);
        Matrix<ThetaPoly> c(n, n, z);
        for (int d = 0; d < n; ++d) c.at(d, d) = ThetaPoly::constant(a.coeff(i));
        acc = acc + SkewPolyT<ThetaPoly>::constant(n, c);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Exponential / logarithm coefficient sequences. Coefficient j solves a
// Sylvester equation  X tau^j(A_0) - A_0 X = R. Writing A_0 = theta I + N
// turns it into  c X = R + (N X - X tau^j(N))  with c = theta^(q^j) - theta,
// and the bracket is a nilpotent operator, so X = sum_k L^k(R) / c^(k+1)
// terminates after at most 2n-1 steps. All denominators are twist atoms,
// which keeps every entry in factored form.
// ---------------------------------------------------------------------------
struct ExpSeries {
    std::vector<Matrix<FactoredFrac>> coef;  // coef[j] = e_j
    int order() const { return static_cast<int>(coef.size()) - 1; }
};
struct LogSeries {
    std::vector<Matrix<FactoredFrac>> coef;  // coef[j] = P_j
    int order() const { return static_cast<int>(coef.size()) - 1; }
};

namespace adetail {

inline Matrix<FactoredFrac> to_ff(const Matrix<ThetaPoly>& m) {
    return m.map([](const ThetaPoly& p) { return FactoredFrac(p); });
}

inline bool ff_zero_mat(const Matrix<FactoredFrac>& m) {
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (!m.at(i, j).is_zero()) return false;
    return true;
}

// solve X * tau^j(A_0) - A_0 * X = R
inline Matrix<FactoredFrac> solve_sylvester(const AndersonModule& E, int j,
                                            const Matrix<FactoredFrac>& R) {
    const int n = E.dim();
    Matrix<FactoredFrac> N = to_ff(E.nilpotent_part());
    Matrix<FactoredFrac> Ntw = tau_twist(N, j);
    Matrix<FactoredFrac> X = R.map([&](const FactoredFrac& x) { return x.div_atom(j, 0); });
    Matrix<FactoredFrac> T = R;
    for (int k = 1;; ++k) {
        T = N * T - T * Ntw;
        if (ff_zero_mat(T)) break;
        if (k > 2 * n)
            throw InternalError("exp/log: Sylvester iteration failed to terminate");
        X = X + T.map([&](const FactoredFrac& x) { return x.div_atom(j, 0, k + 1); });
    }
    return X;
}

}  // namespace adetail

inline ExpSeries exp_coefficients(const AndersonModule& E, int order) {
    if (order < 0) throw UsageError("exp_coefficients: order >= 0 required");
    const KField* f = E.field();
    const int n = E.dim(), r = E.tau_deg();
    ExpSeries S;
    S.coef.push_back(
        Matrix<FactoredFrac>::identity(n, FactoredFrac::zero(f), FactoredFrac::one(f)));
    for (int j = 1; j <= order; ++j) {
        Matrix<FactoredFrac> R(n, n, FactoredFrac::zero(f));
        for (int i = 1; i <= std::min(r, j); ++i)
            R = R + adetail::to_ff(E.A(i)) * tau_twist(S.coef[j - i], i);
        S.coef.push_back(adetail::solve_sylvester(E, j, R));
    }
    return S;
}

inline LogSeries log_coefficients(const AndersonModule& E, int order) {
    if (order < 0) throw UsageError("log_coefficients: order >= 0 required");
    const KField* f = E.field();
    const int n = E.dim(), r = E.tau_deg();
    LogSeries S;
    S.coef.push_back(
        Matrix<FactoredFrac>::identity(n, FactoredFrac::zero(f), FactoredFrac::one(f)));
    for (int j = 1; j <= order; ++j) {
        Matrix<FactoredFrac> R(n, n, FactoredFrac::zero(f));
        for (int i = 1; i <= std::min(r, j); ++i)
            R = R + S.coef[j - i] * tau_twist(adetail::to_ff(E.A(i)), j - i);
        // A_0 P_j - P_j tau^j(A_0) = R  <=>  P_j tau^j(A_0) - A_0 P_j = -R
        S.coef.push_back(adetail::solve_sylvester(E, j, -R));
    }
    return S;
}

inline SkewSeriesT<FactoredFrac> to_skew_series(const std::vector<Matrix<FactoredFrac>>& coef,
                                                int n, int trunc) {
    std::vector<Matrix<FactoredFrac>> c(coef.begin(),
                                        coef.begin() + std::min<size_t>(coef.size(), trunc + 1));
    return SkewSeriesT<FactoredFrac>(SkewPolyT<FactoredFrac>(n, std::move(c)), trunc);
}

// minimum valuation over the entries of a coefficient matrix
inline std::int64_t matrix_valuation(const Matrix<FactoredFrac>& m) {
    std::int64_t v = kValInf;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) v = std::min(v, m.at(i, j).valuation());
    return v;
}

namespace adetail {

// coefficient budget: extend until the tail bound holds twice in a row
template <class Series>
int eval_budget(const AndersonModule& E, Series& S,
                Series (*extend)(const AndersonModule&, int), std::int64_t vz,
                std::int64_t prec, const char* what) {
    const std::int64_t q = E.field()->q();
    std::int64_t qj = 1;
    int consecutive = 0;
    for (int j = 0; j <= 64; ++j) {
        if (j >= static_cast<int>(S.coef.size())) S = extend(E, j);
        std::int64_t bound = matrix_valuation(S.coef[j]) + qj * vz;
        consecutive = (bound > prec) ? consecutive + 1 : 0;
        if (consecutive >= 2) return j - 1;
        if (qj < (kValInf >> 8) / std::max<std::int64_t>(1, q)) qj *= q;
    }
    throw DomainError(std::string(what) +
                      ": series does not reach the requested precision within 64 terms");
}

}  // namespace adetail

// evaluate exp_E at z (componentwise Laurent data), truncated at prec
inline LieVector exp_eval(const AndersonModule& E, const LieVector& z, std::int64_t prec) {
    if (static_cast<int>(z.size()) != E.dim())
        throw DomainError("exp_eval: vector dimension mismatch");
    std::int64_t vz = kValInf;
    for (const auto& zi : z) {
        if (zi.prec() < prec)
            throw PrecisionError("exp_eval: input precision below requested output", prec);
        vz = std::min(vz, zi.valuation());
    }
    if (vz >= kValInf) return LieVector(z.size(), LaurentSeries::zero(E.field(), prec));
    ExpSeries S;
    int top = adetail::eval_budget(E, S, &exp_coefficients, vz, prec, "exp_eval");
    auto f = to_skew_series(S.coef, E.dim(), std::max(top, 0));
    return skew_apply(f.terms(), z, prec);
}

// convergence polydisc for the alpha = 1 family: v(z_i) > n - i - n q/(q-1)
inline bool cn_log_domain_ok(std::int64_t v, int n, int i1based, std::int64_t q) {
    // v > n - i - nq/(q-1)  <=>  (v - n + i)(q-1) + nq > 0
    return (v - n + i1based) * (q - 1) + std::int64_t(n) * q > 0;
}

inline LieVector log_eval(const AndersonModule& E, const LieVector& z, std::int64_t prec) {
    if (static_cast<int>(z.size()) != E.dim())
        throw DomainError("log_eval: vector dimension mismatch");
    const std::int64_t q = E.field()->q();
    const int n = E.dim();
    std::int64_t vz = kValInf;
    for (const auto& zi : z) vz = std::min(vz, zi.valuation());
    if (vz >= kValInf) return LieVector(z.size(), LaurentSeries::zero(E.field(), prec));

    auto alpha = E.e_alpha_form();
    bool is_cn = alpha && alpha->is_monic() && alpha->deg() == 0;
    LogSeries S;
    int top = 0;
    if (is_cn) {
        for (int i = 1; i <= n; ++i) {
            std::int64_t v = z[i - 1].valuation();
            if (v < kValInf && !cn_log_domain_ok(v, n, i, q))
                throw DomainError("log_eval: coordinate " + std::to_string(i) +
                                  " outside the convergence polydisc: need v > " +
                                  std::to_string(n - i) + " - " + std::to_string(n) + "*" +
                                  std::to_string(q) + "/" + std::to_string(q - 1) +
                                  ", got v = " + std::to_string(v));
        }
        top = adetail::eval_budget(E, S, &log_coefficients, vz, prec, "log_eval");
    } else {
        // conservative domain from the computed coefficients:
        // v(z_i) > max_j (-v((P_j)_{i.}) / (q^j - 1)) + 1
        top = adetail::eval_budget(E, S, &log_coefficients, vz, prec, "log_eval");
        std::int64_t qj = 1;
        for (int j = 1; j <= top; ++j) {
            qj *= q;
            for (int i = 0; i < n; ++i) {
                std::int64_t vrow = kValInf;
                for (int c = 0; c < n; ++c)
                    vrow = std::min(vrow, S.coef[j].at(i, c).valuation());
                if (vrow >= kValInf) continue;
                std::int64_t v = z[i].valuation();
                if (v >= kValInf) continue;
                // need (v - 1) * (q^j - 1) > -vrow
                if (!((v - 1) * (qj - 1) > -vrow))
                    throw DomainError(
                        "log_eval: coordinate " + std::to_string(i + 1) +
                        " outside the conservative convergence domain derived from "
                        "coefficient valuations (need v > " +
                        std::to_string(-vrow) + "/(q^" + std::to_string(j) + "-1) + 1, got v = " +
                        std::to_string(v) + ")");
            }
        }
    }
    auto f = to_skew_series(S.coef, n, std::max(top, 0));
    return skew_apply(f.terms(), z, prec);
}

// ---------------------------------------------------------------------------
// The Lie-algebra action: theta acts by A_0. Polynomials substitute
// directly; series in 1/theta use A_0^{-1} = sum_k (-1)^k N^k theta^-(k+1),
// which converges entrywise since N is nilpotent.
// ---------------------------------------------------------------------------
inline Matrix<ThetaPoly> partial_action(const AndersonModule& E, const ThetaPoly& a) {
    const KField* f = E.field();
    int n = E.dim();
    Matrix<ThetaPoly> acc(n, n, ThetaPoly::zero(f));
    for (int i = a.deg(); i >= 0; --i) {
        acc = acc * E.A(0);
        for (int d = 0; d < n; ++d)
            acc.at(d, d) = acc.at(d, d) + ThetaPoly::constant(a.coeff(i));
    }
    return acc;
}

inline Matrix<LaurentSeries> partial_action(const AndersonModule& E, const LaurentSeries& z) {
    const KField* f = E.field();
    const int n = E.dim();
    Matrix<ThetaPoly> N = E.nilpotent_part();
    int degN = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) degN = std::max(degN, std::max(0, N.at(i, j).deg()));
    std::int64_t W = z.prec() + std::int64_t(n) * (degN + 1) + 1;

    Matrix<LaurentSeries> inv(n, n, LaurentSeries::zero(f, W));
    {
        Matrix<ThetaPoly> Npow = Matrix<ThetaPoly>::identity(n, ThetaPoly::zero(f),
                                                             ThetaPoly::one(f));
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (Npow.at(i, j).is_zero()) continue;
                    LaurentSeries term =
                        LaurentSeries::from_poly(Npow.at(i, j), W + k + 1).shifted(-(k + 1));
                    if (k % 2 == 1) term = -term;
                    inv.at(i, j) = inv.at(i, j) + term.truncated(W);
                }
            Npow = Npow * N;
        }
    }

    Matrix<LaurentSeries> out(n, n, LaurentSeries::zero(f, W));
    // polynomial part
    Matrix<LaurentSeries> pw = Matrix<LaurentSeries>::identity(
        n, LaurentSeries::zero(f, W), LaurentSeries::one(f, W));
    Matrix<LaurentSeries> A0l =
        E.A(0).map([&](const ThetaPoly& p) { return LaurentSeries::from_poly(p, W); });
    for (std::int64_t d = 0; d <= std::max<std::int64_t>(z.top_deg(), 0); ++d) {
        if (d > 0) pw = pw * A0l;
        KElem c = z.coeff(d);
        if (c.is_zero()) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.at(i, j) = out.at(i, j) + pw.at(i, j) * c;
    }
    // principal part
    pw = Matrix<LaurentSeries>::identity(n, LaurentSeries::zero(f, W), LaurentSeries::one(f, W));
    for (std::int64_t j = 1; j <= z.prec(); ++j) {
        pw = pw * inv;
        KElem c = z.coeff(-j);
        if (c.is_zero()) continue;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) out.at(a, b) = out.at(a, b) + pw.at(a, b) * c;
    }
    std::int64_t out_prec = z.prec() - std::int64_t(n - 1) * (degN + 1);
    return out.map([&](const LaurentSeries& s) {
        return s.truncated(std::min<std::int64_t>(s.prec(), std::max<std::int64_t>(out_prec, 0)));
    });
}

}  // namespace carlitz

#endif
