#include "homsim/numerics.hpp"

#include <array>
#include <cmath>

namespace homsim::num {

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double one_minus_sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 0.1) {
        // alternating series, next omitted term < 1e-16 at |x| = 0.1
        const double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
    }
    return 1.0 - std::sin(x) / x;
}

double tri(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 1.0 - ax : 0.0;
}

double reduce_phase(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0.0)
        r += two_pi;
    if (r >= two_pi) // fmod result + two_pi can round up to two_pi
        r = 0.0;
    return r;
}

std::complex<double> cis(double phase) {
    return {std::cos(phase), std::sin(phase)};
}

namespace {

constexpr std::array<double, 16> kGl16Nodes = {
    -0.98940093499164994, -0.9445750230732326,  -0.86563120238783176,
    -0.755404408355003,   -0.61787624440264377, -0.45801677765722737,
    -0.28160355077925892, -0.095012509837637454, 0.095012509837637454,
    0.28160355077925892,   0.45801677765722737,  0.61787624440264377,
    0.755404408355003,     0.86563120238783176,  0.9445750230732326,
    0.98940093499164994,
};

constexpr std::array<double, 16> kGl16Weights = {
    0.027152459411754037, 0.062253523938647706, 0.095158511682492591,
    0.12462897125553403,  0.14959598881657676,  0.16915651939500262,
    0.18260341504492361,  0.18945061045506859,  0.18945061045506859,
    0.18260341504492361,  0.16915651939500262,  0.14959598881657676,
    0.12462897125553403,  0.095158511682492591, 0.062253523938647706,
    0.027152459411754037,
};

} // namespace

std::span<const double, 16> gl16_nodes() { return kGl16Nodes; }
std::span<const double, 16> gl16_weights() { return kGl16Weights; }

} // namespace homsim::num
