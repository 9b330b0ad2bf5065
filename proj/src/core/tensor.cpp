// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace nbk {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Format: return "format error";
        case ErrorCode::Io: return "I/O error";
        case ErrorCode::Domain: return "domain error";
        case ErrorCode::Shape: return "shape error";
        case ErrorCode::State: return "state error";
        case ErrorCode::Numeric: return "numeric error";
        case ErrorCode::Config: return "config error";
        case ErrorCode::Usage: return "usage error";
    }
    return "error";
}

std::string shape_to_string(const Shape& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

std::size_t shape_size(const Shape& shape) {
    std::size_t n = 1;
    for (auto e : shape) n *= e;
    return n;
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
    if (shape_.empty()) fail(ErrorCode::Shape, "tensor shape must have at least one extent");
    for (auto e : shape_) {
        if (e == 0) fail(ErrorCode::Shape, "tensor extents must be positive, got " + shape_to_string(shape_));
    }
    data_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (shape_.empty()) fail(ErrorCode::Shape, "tensor shape must have at least one extent");
    for (auto e : shape_) {
        if (e == 0) fail(ErrorCode::Shape, "tensor extents must be positive, got " + shape_to_string(shape_));
    }
    if (data_.size() != shape_size(shape_)) {
        fail(ErrorCode::Shape, "tensor data length " + std::to_string(data_.size()) +
                                   " does not match shape " + shape_to_string(shape_));
    }
}

Tensor Tensor::row(std::span<const double> values) {
    return Tensor({1, values.size()}, std::vector<double>(values.begin(), values.end()));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values) {
    return Tensor({rows, cols}, std::vector<double>(values));
}

std::size_t Tensor::rows() const noexcept {
    return shape_.size() >= 2 ? shape_[0] : 1;
}

std::size_t Tensor::cols() const noexcept {
    return shape_.size() >= 2 ? shape_[1] : (shape_.empty() ? 0 : shape_[0]);
}

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void Tensor::fill(double v) {
    std::fill(data_.begin(), data_.end(), v);
}

}  // namespace nbk
