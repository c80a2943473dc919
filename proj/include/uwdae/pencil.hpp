#ifndef UWDAE_PENCIL_HPP
#define UWDAE_PENCIL_HPP

#include <optional>
#include <vector>

#include <Eigen/SVD>

#include "uwdae/errors.hpp"
#include "uwdae/system.hpp"

namespace uwdae
{

struct PencilDiagnostics
{
    bool regular = false;
    std::vector<double> probe_lambdas;
    /// Witness lambda for which lambda*E - A_mu passed the nonsingularity test.
    std::optional<double> witness;
    /// Nilpotency index estimate; empty means "unknown".
    std::optional<int> index_estimate;
};

struct PencilProbeOptions
{
    /// lambda*E - A counts as nonsingular when its 2-norm condition number is below this cap.
    double condition_cap = 1e12;
    /// Relative singular-value threshold for the rank of powers of (lambda E - A)^{-1} E.
    double rank_tol = 1e-10;
};

namespace detail
{

inline Index numerical_rank(const Matrix& m, double rel_tol)
{
    if (m.size() == 0)
        return 0;
    Eigen::BDCSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] == 0.0)
        return 0;
    Index r = 0;
    while (r < s.size() && s[r] > rel_tol * s[0])
        ++r;
    return r;
}

} // namespace detail

///
/// Regularity test of the pencil {E, -A_mu} at a handful of probe points and a
/// rank-stabilization estimate of its index. A diagnostic, not a certificate.
///
inline PencilDiagnostics pencil_probe(const DaeSystem& sys, const Parameter& mu,
                                      const std::vector<double>& lambdas,
                                      const PencilProbeOptions& opt = {})
{
    if (lambdas.empty())
        throw InputError("pencil_probe needs at least one probe lambda");
    PencilDiagnostics diag;
    diag.probe_lambdas = lambdas;

    const Matrix E = Matrix(sys.E);
    const Matrix A = Matrix(sys.A_at(mu));
    const Index n  = sys.n;

    for (double lambda : lambdas)
    {
        const Matrix M = lambda * E - A;
        Eigen::BDCSVD<Matrix> svd(M);
        const auto& s = svd.singularValues();
        if (s.size() == 0 || s[n - 1] <= 0.0 || s[0] / s[n - 1] >= opt.condition_cap)
            continue;
        diag.regular = true;
        diag.witness = lambda;

        const Matrix Ehat = M.partialPivLu().solve(E);
        Matrix power      = Matrix::Identity(n, n);
        Index rank        = n;
        for (int k = 0; k <= n; ++k)
        {
            power           = power * Ehat;
            const Index next = detail::numerical_rank(power, opt.rank_tol);
            if (next == rank)
            {
                diag.index_estimate = k;
                break;
            }
            rank = next;
        }
        return diag;
    }
    throw IrregularPencil("lambda*E - A is numerically singular at every probe lambda; the pencil "
                          "looks irregular (ill-posed system)");
}

inline PencilDiagnostics pencil_probe(const DaeSystem& sys, const Parameter& mu)
{
    return pencil_probe(sys, mu, {1.0, -1.3, 2.7, 0.37, -5.1, 11.0});
}

} // namespace uwdae

#endif // UWDAE_PENCIL_HPP
