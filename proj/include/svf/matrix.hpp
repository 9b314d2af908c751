#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

#include "svf/error.hpp"

namespace svf {

/// Dense row-major matrix over any ring-like value type.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) fail(ErrorKind::parse, "ragged matrix literal");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n, const T& zero, const T& one) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    template <class F>
    auto map(F&& f) const -> Matrix<std::decay_t<decltype(f(std::declval<const T&>()))>> {
        Matrix<std::decay_t<decltype(f(std::declval<const T&>()))>> r(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix r(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
        return r;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.cols_ != y.rows_) fail(ErrorKind::inconsistent, "matrix shape mismatch in product");
        Matrix r(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t j = 0; j < y.cols_; ++j) {
                T acc = x(i, 0) * y(0, j);
                for (std::size_t k = 1; k < x.cols_; ++k) acc += x(i, k) * y(k, j);
                r(i, j) = acc;
            }
        return r;
    }

    friend Matrix operator+(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) fail(ErrorKind::inconsistent, "matrix shape mismatch in sum");
        Matrix r = x;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += y.data_[k];
        return r;
    }

    friend Matrix operator-(const Matrix& x, const Matrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) fail(ErrorKind::inconsistent, "matrix shape mismatch in difference");
        Matrix r = x;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= y.data_[k];
        return r;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
    }

    /// Block-diagonal sum.
    friend Matrix direct_sum(const Matrix& x, const Matrix& y, const T& zero) {
        Matrix r(x.rows_ + y.rows_, x.cols_ + y.cols_, zero);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t j = 0; j < x.cols_; ++j) r(i, j) = x(i, j);
        for (std::size_t i = 0; i < y.rows_; ++i)
            for (std::size_t j = 0; j < y.cols_; ++j) r(x.rows_ + i, x.cols_ + j) = y(i, j);
        return r;
    }

    /// Kronecker product.
    friend Matrix kronecker(const Matrix& x, const Matrix& y) {
        Matrix r(x.rows_ * y.rows_, x.cols_ * y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t j = 0; j < x.cols_; ++j)
                for (std::size_t k = 0; k < y.rows_; ++k)
                    for (std::size_t l = 0; l < y.cols_; ++l)
                        r(i * y.rows_ + k, j * y.cols_ + l) = x(i, j) * y(k, l);
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Coefficients of det(x I - A), highest degree first, by Berkowitz's
/// division-free algorithm; valid over any commutative ring.
template <class T>
std::vector<T> berkowitz(const Matrix<T>& a, const T& zero, const T& one) {
    if (!a.square()) fail(ErrorKind::inconsistent, "characteristic polynomial of a non-square matrix");
    const std::size_t n = a.rows();
    if (n == 0) return {one};
    std::vector<T> vect{one, zero - a(0, 0)};
    for (std::size_t k = 1; k < n; ++k) {
        // column C = A[0..k)[k], row R = A[k][0..k), leading block A_k
        std::vector<T> col(k), q;
        for (std::size_t i = 0; i < k; ++i) col[i] = a(i, k);
        q.push_back(one);
        q.push_back(zero - a(k, k));
        for (std::size_t e = 0; e < k; ++e) {
            T rc = zero;
            for (std::size_t i = 0; i < k; ++i) rc += a(k, i) * col[i];
            q.push_back(zero - rc);
            std::vector<T> next(k, zero);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) next[i] += a(i, j) * col[j];
            col = std::move(next);
        }
        std::vector<T> out(k + 2, zero);
        for (std::size_t i = 0; i < k + 2; ++i)
            for (std::size_t j = 0; j <= std::min(i, k); ++j) out[i] += q[i - j] * vect[j];
        vect = std::move(out);
    }
    return vect;
}

} // namespace svf
