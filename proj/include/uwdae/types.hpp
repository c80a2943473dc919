#ifndef UWDAE_TYPES_HPP
#define UWDAE_TYPES_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace uwdae
{

using Index        = Eigen::Index;
using Vector       = Eigen::VectorXd;
using Matrix       = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet      = Eigen::Triplet<double>;

/// A point in parameter space.
using Parameter = Eigen::VectorXd;

/// Largest absolute entry, 0 for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double max_abs(const SparseMatrix& m)
{
    double r = 0.0;
    for (Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            r = std::max(r, std::abs(it.value()));
    return r;
}

inline SparseMatrix to_sparse(const Matrix& dense, double drop_tol = 0.0)
{
    SparseMatrix s = dense.sparseView(1.0, drop_tol);
    s.makeCompressed();
    return s;
}

} // namespace uwdae

#endif // UWDAE_TYPES_HPP
