#ifndef CARLITZ_FINITE_MODULE_HPP
#define CARLITZ_FINITE_MODULE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "carlitz/anderson.hpp"
#include "carlitz/primes.hpp"

namespace carlitz {

// ---------------------------------------------------------------------------
// A finite-dimensional k-vector space with a k-linear theta action. All the
// semilinearity of tau has been resolved into the matrix at construction
// (tau fixes k), so Fitting data reduces to linear algebra over k.
// ---------------------------------------------------------------------------
struct FiniteModule {
    const KField* fld = nullptr;
    Matrix<KElem> T;  // dim x dim

    int dim() const { return T.rows(); }

    static FiniteModule zero(const KField* f) {
        return FiniteModule{f, Matrix<KElem>(0, 0, KElem::zero(f))};
    }
};

// characteristic polynomial det(theta I - T), division-free (Berkowitz);
// monic of degree dim
inline ThetaPoly charpoly(const KField* f, const Matrix<KElem>& A) {
    const int n = A.rows();
    std::vector<KElem> v{KElem::one(f)};
    for (int r = 1; r <= n; ++r) {
        int i = r - 1;
        // Toeplitz column [1, s_0, ..., s_{r-1}] from the leading r x r block
        std::vector<KElem> t;
        t.reserve(r + 1);
        t.push_back(KElem::one(f));
        t.push_back(-A.at(i, i));
        if (i > 0) {
            std::vector<KElem> w(i, KElem::zero(f));
            for (int a = 0; a < i; ++a) w[a] = A.at(a, i);
            for (int k = 1; k < r; ++k) {
                KElem s = KElem::zero(f);
                for (int a = 0; a < i; ++a) s = s + A.at(i, a) * w[a];
                t.push_back(-s);
                if (k + 1 < r) {
                    std::vector<KElem> nw(i, KElem::zero(f));
                    for (int a = 0; a < i; ++a) {
                        KElem acc = KElem::zero(f);
                        for (int b = 0; b < i; ++b) acc = acc + A.at(a, b) * w[b];
                        nw[a] = acc;
                    }
                    w = std::move(nw);
                }
            }
        }
        std::vector<KElem> nv(r + 1, KElem::zero(f));
        for (int j = 0; j <= r; ++j) {
            KElem acc = KElem::zero(f);
            for (int k = 0; k <= j && k < static_cast<int>(t.size()); ++k)
                if (j - k < static_cast<int>(v.size())) acc = acc + t[k] * v[j - k];
            nv[j] = acc;
        }
        v = std::move(nv);
    }
    // v[j] multiplies theta^(n-j)
    std::vector<KElem> c(n + 1, KElem::zero(f));
    for (int j = 0; j <= n; ++j) c[n - j] = v[j];
    return ThetaPoly(f, std::move(c));
}

// monic generator of the Fitting ideal: the characteristic polynomial of
// the theta action (M is presented by theta I - T on k^dim)
inline ThetaPoly fitting_generator(const FiniteModule& M) {
    if (M.dim() == 0) return ThetaPoly::one(M.fld);
    return charpoly(M.fld, M.T);
}

// Smith normal form of (theta I - T) over k[theta]; returns the nonconstant
// invariant factors, monic, in divisibility order
inline std::vector<ThetaPoly> invariant_factors(const FiniteModule& M) {
    const KField* f = M.fld;
    const int n = M.dim();
    if (n == 0) return {};
    std::vector<std::vector<ThetaPoly>> A(n, std::vector<ThetaPoly>(n, ThetaPoly::zero(f)));
    ThetaPoly th = ThetaPoly::theta(f);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A[i][j] = -ThetaPoly::constant(M.T.at(i, j));
            if (i == j) A[i][j] = A[i][j] + th;
        }
    std::vector<ThetaPoly> diag;
    for (int t = 0; t < n; ++t) {
        // locate a minimal-degree nonzero pivot
        int pi = -1, pj = -1, best = -1;
        for (int i = t; i < n; ++i)
            for (int j = t; j < n; ++j)
                if (!A[i][j].is_zero() && (pi < 0 || A[i][j].deg() < best)) {
                    pi = i;
                    pj = j;
                    best = A[i][j].deg();
                }
        if (pi < 0) break;
        std::swap(A[t], A[pi]);
        for (int i = t; i < n; ++i) std::swap(A[i][t], A[i][pj]);
        bool again = true;
        while (again) {
            again = false;
            for (int i = t + 1; i < n; ++i) {
                if (A[i][t].is_zero()) continue;
                ThetaPoly q, r;
                divrem(A[i][t], A[t][t], q, r);
                for (int j = t; j < n; ++j) A[i][j] = A[i][j] - q * A[t][j];
                if (!r.is_zero()) {
                    std::swap(A[t], A[i]);
                    again = true;
                }
            }
            for (int j = t + 1; j < n; ++j) {
                if (A[t][j].is_zero()) continue;
                ThetaPoly q, r;
                divrem(A[t][j], A[t][t], q, r);
                for (int i = t; i < n; ++i) A[i][j] = A[i][j] - q * A[i][t];
                if (!r.is_zero()) {
                    for (int i = t; i < n; ++i) std::swap(A[i][t], A[i][j]);
                    again = true;
                }
            }
        }
        // divisibility of the remaining block by the pivot
        for (int i = t + 1; i < n && !again; ++i)
            for (int j = t + 1; j < n; ++j) {
                ThetaPoly q, r;
                divrem(A[i][j], A[t][t], q, r);
                if (!r.is_zero()) {
                    for (int jj = t; jj < n; ++jj) A[t][jj] = A[t][jj] + A[i][jj];
                    --t;  // redo this pivot with the new row folded in
                    again = true;
                    break;
                }
            }
        if (again) continue;
        diag.push_back(monicize(A[t][t]).second);
    }
    std::vector<ThetaPoly> out;
    for (auto& d : diag)
        if (d.deg() >= 1) out.push_back(d);
    return out;
}

namespace fmdetail {

// residue arithmetic in k[theta]/(P)
inline ThetaPoly theta_pow_q_mod(const ThetaPoly& P, int j) {
    // theta^(q^j) mod P via repeated q-th powers of the residue class
    const KField* f = P.field();
    ThetaPoly x = ThetaPoly::theta(f) % P;
    for (int i = 0; i < j; ++i) {
        // x <- x^q mod P
        ThetaPoly acc = ThetaPoly::one(f);
        std::int64_t e = f->q();
        ThetaPoly b = x;
        while (e > 0) {
            if (e & 1) acc = (acc * b) % P;
            b = (b * b) % P;
            e >>= 1;
        }
        x = acc;
    }
    return x;
}

// image of g under tau^j in k[theta]/(P): substitute theta^(q^j) mod P
inline ThetaPoly tau_mod(const ThetaPoly& g, const ThetaPoly& P, const ThetaPoly& theta_qj) {
    const KField* f = P.field();
    ThetaPoly acc = ThetaPoly::zero(f);
    for (int i = g.deg(); i >= 0; --i) {
        acc = (acc * theta_qj) % P;
        acc = acc + ThetaPoly::constant(g.coeff(i));
    }
    return acc;
}

// d x d matrix of multiplication by (g mod P) on the basis 1, theta, ...,
// theta^(d-1); columns are g * theta^i mod P
inline Matrix<KElem> mult_matrix(const ThetaPoly& g, const ThetaPoly& P) {
    const KField* f = P.field();
    int d = P.deg();
    Matrix<KElem> M(d, d, KElem::zero(f));
    ThetaPoly cur = g % P;
    for (int i = 0; i < d; ++i) {
        for (int r = 0; r < d; ++r) M.at(r, i) = cur.coeff(r);
        cur = cur.shifted(1) % P;
    }
    return M;
}

// d x d matrix of tau on k[theta]/(P): columns are tau(theta^i) = theta^(qi) mod P
inline Matrix<KElem> frobenius_matrix(const ThetaPoly& P) {
    const KField* f = P.field();
    int d = P.deg();
    ThetaPoly tq = theta_pow_q_mod(P, 1);
    Matrix<KElem> M(d, d, KElem::zero(f));
    ThetaPoly cur = ThetaPoly::one(f);
    for (int i = 0; i < d; ++i) {
        for (int r = 0; r < d; ++r) M.at(r, i) = cur.coeff(r);
        cur = (cur * tq) % P;
    }
    return M;
}

}  // namespace fmdetail

// Lie(E)(k[theta]/P)^: theta acts through A_0 on (k[theta]/P)^n. Basis is
// {theta^i e_j} with index i*n + j (i the residue power, j the component).
inline FiniteModule lie_mod_p(const AndersonModule& E, const PrimePoly& P) {
    const KField* f = E.field();
    ThetaPoly Pl = P.lift(f);
    const int n = E.dim(), d = Pl.deg(), D = n * d;
    Matrix<KElem> T(D, D, KElem::zero(f));
    for (int jc = 0; jc < n; ++jc)
        for (int jr = 0; jr < n; ++jr) {
            if (E.A(0).at(jr, jc).is_zero()) continue;
            Matrix<KElem> M = fmdetail::mult_matrix(E.A(0).at(jr, jc), Pl);
            for (int i = 0; i < d; ++i)
                for (int r = 0; r < d; ++r)
                    if (!M.at(r, i).is_zero())
                        T.at(r * n + jr, i * n + jc) = T.at(r * n + jr, i * n + jc) + M.at(r, i);
        }
    return FiniteModule{f, std::move(T)};
}

// E(k[theta]/P): theta acts through phi_theta = sum A_l tau^l; tau on the
// residue ring is the Frobenius of A/P extended k-linearly
inline FiniteModule e_mod_p(const AndersonModule& E, const PrimePoly& P) {
    const KField* f = E.field();
    ThetaPoly Pl = P.lift(f);
    const int n = E.dim(), d = Pl.deg(), D = n * d;
    Matrix<KElem> T(D, D, KElem::zero(f));
    Matrix<KElem> Fr = fmdetail::frobenius_matrix(Pl);
    Matrix<KElem> Fl = Matrix<KElem>::identity(d, KElem::zero(f), KElem::one(f));
    for (int l = 0; l <= E.tau_deg(); ++l) {
        if (l > 0) Fl = Fr * Fl;
        for (int jc = 0; jc < n; ++jc)
            for (int jr = 0; jr < n; ++jr) {
                if (E.A(l).at(jr, jc).is_zero()) continue;
                Matrix<KElem> M = fmdetail::mult_matrix(E.A(l).at(jr, jc), Pl) * Fl;
                for (int i = 0; i < d; ++i)
                    for (int r = 0; r < d; ++r)
                        if (!M.at(r, i).is_zero())
                            T.at(r * n + jr, i * n + jc) =
                                T.at(r * n + jr, i * n + jc) + M.at(r, i);
            }
    }
    return FiniteModule{f, std::move(T)};
}

// apply a twisted polynomial to a vector of residue classes mod P
inline std::vector<ThetaPoly> skew_apply_mod_p(const SkewPolyT<ThetaPoly>& g,
                                               const PrimePoly& P,
                                               const std::vector<ThetaPoly>& x) {
    if (static_cast<int>(x.size()) != g.dim())
        throw DomainError("skew_apply_mod_p: vector length mismatch");
    const KField* f = x.empty() ? nullptr : x[0].field();
    ThetaPoly Pl = P.lift(f);
    std::vector<ThetaPoly> out(x.size(), ThetaPoly::zero(f));
    for (int j = 0; j <= g.tau_deg(); ++j) {
        ThetaPoly tqj = fmdetail::theta_pow_q_mod(Pl, j);
        std::vector<ThetaPoly> tx;
        tx.reserve(x.size());
        for (const auto& xi : x) tx.push_back(fmdetail::tau_mod(xi % Pl, Pl, tqj));
        for (size_t r = 0; r < x.size(); ++r)
            for (size_t c = 0; c < x.size(); ++c) {
                const ThetaPoly& b = g.coeffs()[j].at(static_cast<int>(r), static_cast<int>(c));
                if (b.is_zero()) continue;
                out[r] = (out[r] + b * tx[c]) % Pl;
            }
    }
    return out;
}

// rho_alpha(P): the constant congruent to alpha tau(alpha)...tau^(d-1)(alpha)
// mod P; cross-checked against the resultant of P and alpha
inline KElem rho(const ThetaPoly& alpha, const PrimePoly& P) {
    if (alpha.is_zero()) throw DomainError("rho: alpha must be nonzero");
    const KField* f = alpha.field();
    ThetaPoly Pl = P.lift(f);
    int d = Pl.deg();
    ThetaPoly acc = ThetaPoly::one(f);
    for (int i = 0; i < d; ++i) {
        ThetaPoly tqi = fmdetail::theta_pow_q_mod(Pl, i);
        acc = (acc * fmdetail::tau_mod(alpha % Pl, Pl, tqi)) % Pl;
    }
    if (acc.deg() > 0)
        throw InternalError("rho: twisted product is not constant mod P");
    KElem y = acc.coeff(0);
    KElem res = resultant(Pl, alpha);
    if (y != res)
        throw InternalError("rho: product route and resultant route disagree");
    return y;
}

// rho extended multiplicatively to monic a in GF(q)[theta]
inline KElem rho_multiplicative(const ThetaPoly& alpha, const ThetaPoly& a) {
    const KField* f = alpha.field();
    if (a.is_zero() || !a.is_monic())
        throw DomainError("rho_multiplicative: a must be monic");
    for (const auto& c : a.coeffs())
        if (!c.is_scalar() || !f->k->in_subfield(f->base, c.scalar_code()))
            throw DomainError("rho_multiplicative: a must have GF(q) coefficients");
    if (a.deg() == 0) return KElem::one(f);
    KElem out = KElem::one(f);
    ThetaPoly rest = a;
    auto primes = enumerate_primes(f->base, a.deg());
    for (const auto& P : primes) {
        ThetaPoly Pl = P.lift(f);
        while (rest.deg() >= Pl.deg()) {
            ThetaPoly q, r;
            divrem(rest, Pl, q, r);
            if (!r.is_zero()) break;
            out = out * rho(alpha, P);
            rest = q;
        }
        if (rest.deg() == 0) break;
    }
    if (rest.deg() != 0)
        throw InternalError("rho_multiplicative: factorization incomplete");
    return out;
}

// ---------------------------------------------------------------------------
// Truncated power series in Z over k, for the finite-level operator
// determinant.
// ---------------------------------------------------------------------------
struct ZSeries {
    const KField* fld = nullptr;
    std::vector<KElem> c;  // length = truncation order N

    static ZSeries zero(const KField* f, int N) {
        return ZSeries{f, std::vector<KElem>(N, KElem::zero(f))};
    }
    static ZSeries one(const KField* f, int N) {
        ZSeries r = zero(f, N);
        r.c[0] = KElem::one(f);
        return r;
    }
    int order() const { return static_cast<int>(c.size()); }

    friend ZSeries operator+(const ZSeries& a, const ZSeries& b) {
        ZSeries r = a;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
        return r;
    }
    friend ZSeries operator-(const ZSeries& a, const ZSeries& b) {
        ZSeries r = a;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
        return r;
    }
    ZSeries operator-() const {
        ZSeries r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }
    friend ZSeries operator*(const ZSeries& a, const ZSeries& b) {
        ZSeries r = zero(a.fld, a.order());
        for (int i = 0; i < a.order(); ++i) {
            if (a.c[i].is_zero()) continue;
            for (int j = 0; i + j < b.order(); ++j)
                if (!b.c[j].is_zero()) r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
        }
        return r;
    }
    ZSeries inverse() const {
        if (c.empty() || c[0].is_zero())
            throw DomainError("ZSeries: inverse needs a unit constant term");
        ZSeries r = zero(fld, order());
        KElem u = c[0].inv();
        r.c[0] = u;
        for (int j = 1; j < order(); ++j) {
            KElem acc = KElem::zero(fld);
            for (int i = 1; i <= j; ++i) acc = acc + c[i] * r.c[j - i];
            r.c[j] = -(acc * u);
        }
        return r;
    }
    friend bool operator==(const ZSeries& a, const ZSeries& b) { return a.c == b.c; }
};

// det over k[[Z]]/Z^N of 1 + sum_{m>=1} (D - Phi) D^(m-1) Z^m acting on
// (k[theta]/P)^n, with D and Phi the matrices of the two theta actions
inline ZSeries theta_operator_det(const AndersonModule& E, const PrimePoly& P, int N) {
    if (N < 1) throw UsageError("theta_operator_det: N >= 1 required");
    const KField* f = E.field();
    FiniteModule lie = lie_mod_p(E, P);
    FiniteModule em = e_mod_p(E, P);
    const int D = lie.dim();
    // assemble the matrix over k[Z]/Z^N
    std::vector<ZSeries> M(static_cast<size_t>(D) * D, ZSeries::zero(f, N));
    for (int i = 0; i < D; ++i) M[i * D + i].c[0] = KElem::one(f);
    Matrix<KElem> B = lie.T - em.T;
    Matrix<KElem> pw = Matrix<KElem>::identity(D, KElem::zero(f), KElem::one(f));
    for (int m = 1; m < N; ++m) {
        if (m > 1) pw = pw * lie.T;
        Matrix<KElem> term = B * pw;
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j)
                if (!term.at(i, j).is_zero()) M[i * D + j].c[m] = term.at(i, j);
    }
    // unipotent elimination: pivots are units
    ZSeries det = ZSeries::one(f, N);
    for (int k = 0; k < D; ++k) {
        ZSeries piv = M[k * D + k];
        if (piv.c[0].is_zero())
            throw InternalError("theta_operator_det: non-unit pivot");
        det = det * piv;
        ZSeries ipiv = piv.inverse();
        for (int i = k + 1; i < D; ++i) {
            ZSeries fac = M[i * D + k] * ipiv;
            bool triv = true;
            for (const auto& x : fac.c)
                if (!x.is_zero()) { triv = false; break; }
            if (triv) continue;
            for (int j = k; j < D; ++j)
                M[i * D + j] = M[i * D + j] - fac * M[k * D + j];
        }
    }
    return det;
}

// the quotient gen1/gen2 of two monic theta-polynomials of equal degree,
// expanded as a power series in Z under theta = 1/Z
inline ZSeries fitting_quotient_z_expansion(const ThetaPoly& gen_lie, const ThetaPoly& gen_e,
                                            int N) {
    const KField* f = gen_lie.field();
    if (gen_lie.deg() != gen_e.deg())
        throw DomainError("fitting quotient: degree mismatch");
    int D = gen_lie.deg();
    ZSeries num = ZSeries::zero(f, N), den = ZSeries::zero(f, N);
    for (int i = 0; i <= D; ++i) {
        int zdeg = D - i;
        if (zdeg < N) {
            num.c[zdeg] = num.c[zdeg] + gen_lie.coeff(i);
            den.c[zdeg] = den.c[zdeg] + gen_e.coeff(i);
        }
    }
    return num * den.inverse();
}

// ---------------------------------------------------------------------------
// Lattice index [M1 : M2]: the monic representative of det(sigma) for the
// change of basis sigma(B1) = B2, computed on Laurent coordinates.
// ---------------------------------------------------------------------------
struct LatticeBasis {
    std::vector<LieVector> vecs;  // each of length n (ambient coordinates)

    int ambient_dim() const { return vecs.empty() ? 0 : static_cast<int>(vecs[0].size()); }
};

namespace fmdetail {

inline LaurentSeries laurent_det(std::vector<std::vector<LaurentSeries>> M) {
    const int n = static_cast<int>(M.size());
    if (n == 0) throw DomainError("lattice_index: empty basis");
    const KField* f = M[0][0].field();
    std::int64_t prec = M[0][0].prec();
    LaurentSeries det = LaurentSeries::one(f, prec);
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        // pivot of minimal valuation for maximal surviving precision
        int piv = -1;
        std::int64_t best = kValInf;
        for (int i = k; i < n; ++i)
            if (M[i][k].valuation() < best) {
                best = M[i][k].valuation();
                piv = i;
            }
        if (piv < 0 || M[piv][k].is_zero())
            throw DomainError("lattice_index: singular change of basis at working precision");
        if (piv != k) {
            std::swap(M[piv], M[k]);
            sign = -sign;
        }
        det = det * M[k][k];
        LaurentSeries ip = M[k][k].inverse();
        for (int i = k + 1; i < n; ++i) {
            if (M[i][k].is_zero()) continue;
            LaurentSeries fac = M[i][k] * ip;
            for (int j = k; j < n; ++j) M[i][j] = M[i][j] - fac * M[k][j];
        }
    }
    if (sign < 0) det = -det;
    return det;
}

}  // namespace fmdetail

inline LaurentSeries lattice_index(const LatticeBasis& B1, const LatticeBasis& B2) {
    const int n = B1.ambient_dim();
    if (n == 0 || B2.ambient_dim() != n || static_cast<int>(B1.vecs.size()) != n ||
        static_cast<int>(B2.vecs.size()) != n)
        throw DomainError("lattice_index: bases must be square and of equal dimension");
    auto coord = [&](const LatticeBasis& B) {
        std::vector<std::vector<LaurentSeries>> M(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M[i].push_back(B.vecs[j][i]);
        return M;
    };
    LaurentSeries d1 = fmdetail::laurent_det(coord(B1));
    LaurentSeries d2 = fmdetail::laurent_det(coord(B2));
    return (d2 / d1).monicize().second;
}

}  // namespace carlitz

#endif
