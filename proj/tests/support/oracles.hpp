#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

struct DenseEigen
{
    std::vector<double> values;                // ascending
    std::vector<std::vector<double>> vectors;  // unit Euclidean norm
};

/// Cyclic Jacobi rotations on a dense symmetric matrix (row-major n*n).
inline DenseEigen jacobi(std::vector<double> a, std::size_t n, int sweeps = 100)
{
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i * n + i] = 1.0;
    for (int s = 0; s < sweeps; ++s)
    {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                off += a[p * n + q] * a[p * n + q];
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < n; ++p)
        {
            for (std::size_t q = p + 1; q < n; ++q)
            {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300)
                    continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k)
                {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - sn * akq;
                    a[k * n + q] = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k)
                {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sn * aqk;
                    a[q * n + k] = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k)
                {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return a[i * n + i] < a[j * n + j]; });
    DenseEigen out;
    for (auto i : order)
    {
        out.values.push_back(a[i * n + i]);
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k)
            col[k] = v[k * n + i];
        out.vectors.push_back(std::move(col));
    }
    return out;
}

/// Dense symmetric tridiagonal matrix with constant off-diagonal `off`.
inline std::vector<double> dense_tridiagonal(const std::vector<double>& diag, double off)
{
    const std::size_t n = diag.size();
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        a[i * n + i] = diag[i];
        if (i + 1 < n)
        {
            a[i * n + i + 1] = off;
            a[(i + 1) * n + i] = off;
        }
    }
    return a;
}

/// |sum_n w_n exp(i phi_n)|^2 by direct summation.
inline double phase_sum_squared(const std::vector<double>& weights, const std::vector<double>& phases)
{
    std::complex<double> s{0.0, 0.0};
    for (std::size_t n = 0; n < weights.size(); ++n)
        s += weights[n] * std::polar(1.0, phases[n]);
    return std::norm(s);
}

}  // namespace oracle
