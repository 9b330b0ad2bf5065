// Copyright 2026 The nbrdfkit Authors
// SPDX-License-Identifier: Apache-2.0

#include "adam.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace nbk {

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    const std::size_t n = params.size();
    if (grads.size() != n || state.m.size() != n || state.v.size() != n) {
        fail(ErrorCode::Shape, "adam_step: parameter, gradient and moment lengths differ (" + std::to_string(n) +
                                   ", " + std::to_string(grads.size()) + ", " + std::to_string(state.m.size()) +
                                   ", " + std::to_string(state.v.size()) + ")");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(grads[i])) fail(ErrorCode::Numeric, "adam_step: non-finite gradient at index " + std::to_string(i));
    }
    const AdamHyper& h = state.hyper;
    state.t += 1;
    const double t = static_cast<double>(state.t);
    const double c1 = 1.0 - std::pow(h.beta1, t);
    const double c2 = 1.0 - std::pow(h.beta2, t);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grads[i];
        state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
        state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
        const double mhat = state.m[i] / c1;
        const double vhat = state.v[i] / c2;
        params[i] -= h.lr * mhat / (std::sqrt(vhat) + h.eps);
    }
}

}  // namespace nbk
