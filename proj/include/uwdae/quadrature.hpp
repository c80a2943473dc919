#ifndef UWDAE_QUADRATURE_HPP
#define UWDAE_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "uwdae/errors.hpp"

namespace uwdae
{

struct QuadratureRule
{
    std::vector<double> points;  // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule with `npts` points (Newton iteration on P_n).
inline QuadratureRule gauss_legendre(int npts)
{
    if (npts < 1)
        throw InputError("quadrature needs at least one point");
    QuadratureRule q;
    q.points.resize(static_cast<std::size_t>(npts));
    q.weights.resize(static_cast<std::size_t>(npts));
    for (int i = 0; i < npts; ++i)
    {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it)
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= npts; ++k)
            {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp            = npts * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        q.points[static_cast<std::size_t>(npts - 1 - i)]  = x;
        q.weights[static_cast<std::size_t>(npts - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

} // namespace uwdae

#endif // UWDAE_QUADRATURE_HPP
