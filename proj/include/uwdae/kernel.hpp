#ifndef UWDAE_KERNEL_HPP
#define UWDAE_KERNEL_HPP

#include <Eigen/SVD>

#include "uwdae/errors.hpp"
#include "uwdae/types.hpp"

namespace uwdae
{

/// Orthonormal basis V (n x d) of ker(E^T).
struct KernelBasis
{
    Matrix V;
    Index d = 0;
    double tol = 1e-10;
};

///
/// Kernel of E^T from a full SVD of E^T; singular values below
/// tol * sigma_max count as zero. Columns are sign-normalized so that their
/// largest-magnitude entry is positive.
///
inline KernelBasis kernel_basis(const SparseMatrix& E, double tol = 1e-10)
{
    if (!(tol > 0.0))
        throw InputError("kernel tolerance must be positive");
    if (E.rows() != E.cols())
        throw DimensionMismatch("E must be square");
    const Index n = E.rows();
    KernelBasis kb;
    kb.tol = tol;
    if (n == 0)
    {
        kb.V.resize(0, 0);
        return kb;
    }

    const Matrix Et = Matrix(E).transpose();
    Eigen::BDCSVD<Matrix> svd(Et, Eigen::ComputeFullV);
    const auto& s      = svd.singularValues();
    const double smax  = s.size() ? s[0] : 0.0;
    Index rank         = 0;
    if (smax > 0.0)
        while (rank < s.size() && s[rank] > tol * smax)
            ++rank;

    kb.d = n - rank;
    kb.V = svd.matrixV().rightCols(kb.d);
    for (Index j = 0; j < kb.d; ++j)
    {
        Index imax;
        kb.V.col(j).cwiseAbs().maxCoeff(&imax);
        if (kb.V(imax, j) < 0.0)
            kb.V.col(j) *= -1.0;
    }
    return kb;
}

} // namespace uwdae

#endif // UWDAE_KERNEL_HPP
