#ifndef CARLITZ_MATRIX_HPP
#define CARLITZ_MATRIX_HPP

#include <functional>
#include <vector>

#include "carlitz/errors.hpp"

namespace carlitz {

// Dense matrix over an arbitrary ring type. Entries must be constructed
// explicitly (ring elements carry field contexts), so there is no default
// zero; use filled() or the factory helpers.
template <class T>
class Matrix {
  public:
    Matrix() : r_(0), c_(0) {}
    Matrix(int rows, int cols, const T& init)
        : r_(rows), c_(cols), d_(static_cast<size_t>(rows) * cols, init) {}

    static Matrix filled(int rows, int cols, const T& v) { return Matrix(rows, cols, v); }
    static Matrix identity(int n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (int i = 0; i < n; ++i) m.at(i, i) = one;
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& at(int i, int j) { return d_[static_cast<size_t>(i) * c_ + j]; }
    const T& at(int i, int j) const { return d_[static_cast<size_t>(i) * c_ + j]; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.same_shape(b);
        Matrix r = a;
        for (size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = r.d_[i] + b.d_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.same_shape(b);
        Matrix r = a;
        for (size_t i = 0; i < r.d_.size(); ++i) r.d_[i] = r.d_[i] - b.d_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.d_) x = -x;
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.r_) throw InternalError("Matrix: shape mismatch in product");
        Matrix r(a.r_, b.c_, a.d_.empty() ? b.d_.front() : a.d_.front());
        for (int i = 0; i < r.r_; ++i)
            for (int j = 0; j < r.c_; ++j) {
                T acc = a.at(i, 0) * b.at(0, j);
                for (int k = 1; k < a.c_; ++k) acc = acc + a.at(i, k) * b.at(k, j);
                r.at(i, j) = acc;
            }
        return r;
    }
    friend Matrix operator*(const Matrix& a, const T& s) {
        Matrix r = a;
        for (auto& x : r.d_) x = x * s;
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    template <class F>
    auto map(F&& f) const -> Matrix<decltype(f(std::declval<const T&>()))> {
        using U = decltype(f(std::declval<const T&>()));
        std::vector<U> out;
        out.reserve(d_.size());
        for (const auto& x : d_) out.push_back(f(x));
        Matrix<U> m;
        m.r_ = r_;
        m.c_ = c_;
        m.d_ = std::move(out);
        return m;
    }

    bool all(const std::function<bool(const T&)>& pred) const {
        for (const auto& x : d_)
            if (!pred(x)) return false;
        return true;
    }

    template <class U>
    friend class Matrix;

  private:
    void same_shape(const Matrix& o) const {
        if (r_ != o.r_ || c_ != o.c_) throw InternalError("Matrix: shape mismatch");
    }
    int r_, c_;
    std::vector<T> d_;
};

}  // namespace carlitz

#endif
