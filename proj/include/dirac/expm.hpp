#pragma once

#include <cmath>

#include <Eigen/Dense>

namespace dirac {

/// Matrix exponential by scaling-and-squaring with a diagonal Pade(6,6)
/// approximant.  Intended for the tiny (2x2, 4x4) complex matrices of the
/// propagation schemes; no balancing or degree selection is attempted.
template <typename Mat>
Mat expm(const Mat& a) {
    static const double c[7] = {1.0,       1.0 / 2.0,     5.0 / 44.0, 1.0 / 66.0,
                                1.0 / 792, 1.0 / 15840.0, 1.0 / 665280.0};

    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int s = 0;
    if (norm > 0.5) {
        s = int(std::ceil(std::log2(norm / 0.5)));
        if (s > 1024) s = 1024;
    }
    Mat x = a / std::pow(2.0, s);

    Mat x2 = x * x;
    Mat even = c[6] * x2;  // c0 + c2 x^2 + c4 x^4 + c6 x^6
    even.diagonal().array() += c[4];
    even = even * x2;
    even.diagonal().array() += c[2];
    even = even * x2;
    even.diagonal().array() += c[0];
    Mat odd = c[5] * x2;   // (c1 + c3 x^2 + c5 x^4) x
    odd.diagonal().array() += c[3];
    odd = odd * x2;
    odd.diagonal().array() += c[1];
    odd = odd * x;

    Mat num = even + odd;
    Mat den = even - odd;
    Mat r = den.partialPivLu().solve(num);

    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

}  // namespace dirac
