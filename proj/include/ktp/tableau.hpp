#pragma once

#include <array>
#include <cmath>

namespace ktp {

// Double Butcher tableau for a 3-stage IMEX pair: explicit part (a_ex, b_ex)
// advances transport, diagonally implicit part (a_im, b_im) the relaxation.
// The implicit diagonal starts with a zero entry, so the first stage is
// fully explicit.
struct ImexTableau {
    static constexpr int stages = 3;
    std::array<std::array<double, 3>, 3> a_ex{}, a_im{};
    std::array<double, 3> b_ex{}, b_im{};
    bool stiffly_accurate = false;  // last stage equals the step output
};

// Second-order, L-stable pair with globally stiffly accurate output:
//   alpha = 1 - 1/sqrt(2), delta = 1 - 1/(2 alpha).
inline ImexTableau ars232() {
    const double alpha = 1.0 - 1.0 / std::sqrt(2.0);
    const double delta = 1.0 - 1.0 / (2.0 * alpha);
    ImexTableau t;
    t.a_ex = {{{0.0, 0.0, 0.0}, {alpha, 0.0, 0.0}, {delta, 1.0 - delta, 0.0}}};
    t.b_ex = {delta, 1.0 - delta, 0.0};
    t.a_im = {{{0.0, 0.0, 0.0}, {0.0, alpha, 0.0}, {0.0, 1.0 - alpha, alpha}}};
    t.b_im = {0.0, 1.0 - alpha, alpha};
    t.stiffly_accurate = true;
    return t;
}

}  // namespace ktp
