#ifndef BIFREE_LINALG_HPP
#define BIFREE_LINALG_HPP

// Dense and row-sparse matrices over exact rationals. Indices are 0-based.

#include "core.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace bifree {

using Vector = std::vector<Rational>;

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Rational(0)) {
        if (rows < 0 || cols < 0) throw ArgumentError("negative matrix dimension");
    }
    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
    static Matrix unit(int n, int i, int j) {
        Matrix m(n, n);
        m(i, j) = 1;
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<Rational>>& rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r ? static_cast<int>(rows[0].size()) : 0;
        Matrix m(r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c) throw ArgumentError("ragged matrix rows");
            for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    bool is_zero() const {
        return std::all_of(a_.begin(), a_.end(), [](const Rational& x) { return x == 0; });
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] += b.a_[k];
        return c;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        a.require_same_shape(b);
        Matrix c = a;
        for (std::size_t k = 0; k < c.a_.size(); ++k) c.a_[k] -= b.a_[k];
        return c;
    }
    friend Matrix operator*(const Rational& s, const Matrix& a) {
        Matrix c = a;
        for (auto& x : c.a_) x *= s;
        return c;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw ArgumentError("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rational& x = a(i, k);
                if (x == 0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
            }
        return c;
    }
    Matrix& operator+=(const Matrix& b) { return *this = *this + b; }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Vector apply(const Vector& x) const {
        if (static_cast<int>(x.size()) != cols_) throw ArgumentError("matrix-vector dimension mismatch");
        Vector y(rows_, Rational(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < rows_; ++i) {
            s += i ? ",[" : "[";
            for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).get_str();
            s += "]";
        }
        return s + "]";
    }

    friend std::ostream& operator<<(std::ostream& os, const Matrix& m) { return os << m.str(); }

private:
    void require_same_shape(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw ArgumentError("matrix shape mismatch");
    }
    int rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

// Square matrix stored as sorted (column, value) lists per row.
class SparseMatrix {
public:
    using Row = std::vector<std::pair<int, Rational>>;

    SparseMatrix() = default;
    explicit SparseMatrix(int n) : n_(n), rows_(n) {}

    static SparseMatrix identity(int n) {
        SparseMatrix m(n);
        for (int i = 0; i < n; ++i) m.rows_[i].emplace_back(i, 1);
        return m;
    }
    static SparseMatrix from_dense(const Matrix& a) {
        if (a.rows() != a.cols()) throw ArgumentError("sparse matrices are square");
        SparseMatrix m(a.rows());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                if (a(i, j) != 0) m.rows_[i].emplace_back(j, a(i, j));
        return m;
    }
    // Build from (row, col, value) triplets; duplicates are summed.
    static SparseMatrix from_entries(int n, const std::vector<std::tuple<int, int, Rational>>& entries) {
        std::vector<std::map<int, Rational>> acc(n);
        for (const auto& [i, j, v] : entries) {
            if (i < 0 || i >= n || j < 0 || j >= n) throw ArgumentError("sparse entry out of range");
            acc[i][j] += v;
        }
        SparseMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (auto& kv : acc[i])
                if (kv.second != 0) m.rows_[i].emplace_back(kv.first, kv.second);
        return m;
    }

    int size() const { return n_; }
    const Row& row(int i) const { return rows_[i]; }
    std::size_t nonzeros() const {
        std::size_t s = 0;
        for (const auto& r : rows_) s += r.size();
        return s;
    }

    Vector apply(const Vector& x) const {
        if (static_cast<int>(x.size()) != n_) throw ArgumentError("operator-vector dimension mismatch");
        Vector y(n_, Rational(0));
        for (int i = 0; i < n_; ++i)
            for (const auto& [j, v] : rows_[i])
                if (x[j] != 0) y[i] += v * x[j];
        return y;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.n_ != b.n_) throw ArgumentError("operator dimension mismatch");
        SparseMatrix c(a.n_);
        std::map<int, Rational> acc;
        for (int i = 0; i < a.n_; ++i) {
            acc.clear();
            for (const auto& [k, v] : a.rows_[i])
                for (const auto& [j, w] : b.rows_[k]) acc[j] += v * w;
            for (auto& kv : acc)
                if (kv.second != 0) c.rows_[i].emplace_back(kv.first, kv.second);
        }
        return c;
    }
    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, 1); }
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, -1); }
    friend SparseMatrix operator*(const Rational& s, const SparseMatrix& a) {
        if (s == 0) return SparseMatrix(a.n_);
        SparseMatrix c = a;
        for (auto& r : c.rows_)
            for (auto& e : r) e.second *= s;
        return c;
    }
    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) { return a.n_ == b.n_ && a.rows_ == b.rows_; }
    friend bool operator!=(const SparseMatrix& a, const SparseMatrix& b) { return !(a == b); }

    bool is_zero() const {
        return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.empty(); });
    }

    Matrix to_dense() const {
        Matrix m(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (const auto& [j, v] : rows_[i]) m(i, j) = v;
        return m;
    }

private:
    static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, int sign) {
        if (a.n_ != b.n_) throw ArgumentError("operator dimension mismatch");
        SparseMatrix c(a.n_);
        for (int i = 0; i < a.n_; ++i) {
            std::map<int, Rational> acc;
            for (const auto& [j, v] : a.rows_[i]) acc[j] += v;
            for (const auto& [j, v] : b.rows_[i]) acc[j] += sign * v;
            for (auto& kv : acc)
                if (kv.second != 0) c.rows_[i].emplace_back(kv.first, kv.second);
        }
        return c;
    }

    int n_ = 0;
    std::vector<Row> rows_;
};

}  // namespace bifree

#endif
