#pragma once

// Brute-force Savitzky-Golay oracle: solves the polynomial least-squares
// normal equations in exact rational arithmetic and evaluates the resulting
// smoothing weights. Test-only; independent of the Gram-polynomial route in
// the library.

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include <stdexcept>

namespace testutil {

using Rational = boost::multiprecision::cpp_rational;

inline std::vector<double> sg_weights_bruteforce(int order, int frame) {
    const int half = frame / 2;
    const int m = order + 1;

    // Normal matrix N[i][j] = sum_x x^(i+j) over x = -half..half.
    std::vector<std::vector<Rational>> n(m, std::vector<Rational>(m));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Rational acc = 0;
            for (int x = -half; x <= half; ++x) {
                Rational p = 1;
                for (int e = 0; e < i + j; ++e) p *= x;
                acc += p;
            }
            n[i][j] = acc;
        }
    }

    // Solve N y = e0 by exact Gauss-Jordan elimination.
    std::vector<Rational> rhs(m, 0);
    rhs[0] = 1;
    for (int col = 0; col < m; ++col) {
        int pivot = -1;
        for (int r = col; r < m; ++r) {
            if (n[r][col] != 0) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) throw std::runtime_error("sg oracle: singular normal matrix");
        std::swap(n[col], n[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        const Rational d = n[col][col];
        for (int c = col; c < m; ++c) n[col][c] /= d;
        rhs[col] /= d;
        for (int r = 0; r < m; ++r) {
            if (r == col || n[r][col] == 0) continue;
            const Rational f = n[r][col];
            for (int c = col; c < m; ++c) n[r][c] -= f * n[col][c];
            rhs[r] -= f * rhs[col];
        }
    }

    // w_j = sum_p y_p x_j^p.
    std::vector<double> weights(frame);
    for (int j = 0; j < frame; ++j) {
        const int x = j - half;
        Rational acc = 0;
        Rational p = 1;
        for (int e = 0; e < m; ++e) {
            acc += rhs[e] * p;
            p *= x;
        }
        weights[j] = acc.convert_to<double>();
    }
    return weights;
}

}  // namespace testutil
