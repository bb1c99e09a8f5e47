// Copyright 2026 The esscher authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

// Backtracking ascent for smooth concave duals, shared by the classical and
// quantum solvers. Steps are gradient directions with Barzilai-Borwein
// initialization (or a caller-supplied direction hook, e.g. Newton), each
// safeguarded by an Armijo line search.

#include <functional>
#include <limits>
#include <utility>

#include "esscher/core.hpp"

namespace esscher::detail {

struct AscentResult {
    RealVector x;
    double value = 0.0;
    RealVector gradient;
    int iterations = 0;
};

using ConcaveEval = std::function<std::pair<double, RealVector>(const RealVector&)>;
using DirectionHook = std::function<RealVector(const RealVector& x, const RealVector& grad)>;

inline AscentResult maximize_concave(const ConcaveEval& eval, RealVector x0, double tol,
                                     int max_iterations,
                                     double divergence_bound = std::numeric_limits<double>::infinity(),
                                     const DirectionHook& direction_hook = nullptr) {
    RealVector x = std::move(x0);
    auto [value, grad] = eval(x);
    RealVector prev_x, prev_grad;
    double step = 1.0;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const double gnorm = grad.norm();
        if (gnorm <= tol) break;
        if (x.norm() > divergence_bound)
            throw ConvergenceError(
                "ascent: multiplier norm exceeded " + std::to_string(divergence_bound) +
                    "; supremum possibly unattained",
                gnorm);
        RealVector direction = direction_hook ? direction_hook(x, grad) : grad;
        double slope = grad.dot(direction);
        if (!(slope > 0.0)) {  // hook produced a non-ascent direction
            direction = grad;
            slope = gnorm * gnorm;
        }
        if (!direction_hook && prev_x.size() > 0) {
            const RealVector s = x - prev_x;
            const RealVector y = grad - prev_grad;
            const double sy = -s.dot(y);  // positive curvature for concave objectives
            if (sy > 0.0 && s.squaredNorm() > 0.0)
                step = std::clamp(s.squaredNorm() / sy, 1e-12, 1e12);
            else
                step = std::min(step * 2.0, 1e12);  // recover from frozen steps
        } else if (direction_hook) {
            step = 1.0;
        }
        prev_x = x;
        prev_grad = grad;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            const RealVector candidate = x + step * direction;
            double trial_value;
            RealVector trial_grad;
            try {
                std::tie(trial_value, trial_grad) = eval(candidate);
            } catch (const std::range_error&) {
                step *= 0.5;
                continue;
            }
            // Approximate Armijo: admit steps whose predicted gain is below
            // the evaluation noise floor (spectral objectives resolve to
            // about 1e-14 absolute, not machine epsilon).
            const double noise = 1e-13 * (1.0 + std::abs(value));
            if (std::isfinite(trial_value) &&
                trial_value >= value + 1e-4 * step * slope - noise) {
                x = candidate;
                value = trial_value;
                grad = std::move(trial_grad);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            throw ConvergenceError(
                "ascent: line search stalled at gradient norm " + std::to_string(gnorm), gnorm);
    }
    if (grad.norm() > tol)
        throw ConvergenceError("ascent: iteration cap " + std::to_string(max_iterations) +
                                   " reached, gradient norm " + std::to_string(grad.norm()),
                               grad.norm());
    return {std::move(x), value, std::move(grad), iter};
}

}  // namespace esscher::detail
