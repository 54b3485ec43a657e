#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "trapsnet/errors.hpp"

namespace trapsnet {

/// Dense row-major matrix of 64-bit reals. All tensors in this project are
/// two-dimensional; vectors are 1xN or Nx1 and scalars 1x1.
class Tensor {
public:
    Tensor() : rows_(0), cols_(0) {}
    Tensor(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols),
          data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {}
    Tensor(int rows, int cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
            throw ShapeMismatch("tensor data length does not match shape");
    }

    static Tensor scalar(double v) { return Tensor(1, 1, {v}); }
    static Tensor row(std::vector<double> v) {
        int n = static_cast<int>(v.size());
        return Tensor(1, n, std::move(v));
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double item() const {
        if (size() != 1) throw ShapeMismatch("item() on non-scalar tensor");
        return data_[0];
    }

    std::string shape_str() const {
        return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]";
    }

    bool operator==(const Tensor& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    int rows_;
    int cols_;
    std::vector<double> data_;
};

} // namespace trapsnet
