#ifndef TMOTIVE_MAT_HPP
#define TMOTIVE_MAT_HPP

#include <utility>
#include <vector>

#include "tmotive/errors.hpp"

namespace tmotive {

// Minimal rectangular matrix storage; algebraic helpers live with the users.
template <class T>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, T fill) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    T& at(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
    const T& at(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    Mat transposed() const {
        Mat r(cols_, rows_, d_.empty() ? T() : d_[0]);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    template <class F>
    auto map(F&& f) const -> Mat<decltype(f(std::declval<const T&>()))> {
        Mat<decltype(f(std::declval<const T&>()))> r(rows_, cols_, f(at(0, 0)));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = f(at(i, j));
        return r;
    }

private:
    int rows_, cols_;
    std::vector<T> d_;
};

template <class T>
Mat<T> mat_mul(const Mat<T>& a, const Mat<T>& b, T zero) {
    if (a.cols() != b.rows()) throw error(errc::computational, "matrix shape mismatch");
    Mat<T> r(a.rows(), b.cols(), zero);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k)
            for (int j = 0; j < b.cols(); ++j) r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
    return r;
}

template <class T>
std::vector<T> mat_vec(const Mat<T>& a, const std::vector<T>& v, T zero) {
    if (a.cols() != static_cast<int>(v.size())) throw error(errc::computational, "matrix shape mismatch");
    std::vector<T> r(a.rows(), zero);
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) r[i] = r[i] + a.at(i, k) * v[k];
    return r;
}

template <class T>
Mat<T> mat_add(const Mat<T>& a, const Mat<T>& b) {
    Mat<T> r = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    return r;
}

}  // namespace tmotive

#endif
