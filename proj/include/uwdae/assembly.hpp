#ifndef UWDAE_ASSEMBLY_HPP
#define UWDAE_ASSEMBLY_HPP

#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/kernel.hpp"
#include "uwdae/system.hpp"
#include "uwdae/temporal.hpp"

namespace uwdae
{

/// Kronecker product of two sparse matrices.
inline SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
    SparseMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
    for (Index ka = 0; ka < a.outerSize(); ++ka)
        for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
            for (Index kb = 0; kb < b.outerSize(); ++kb)
                for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
                    t.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                                   ia.value() * ib.value());
    r.setFromTriplets(t.begin(), t.end());
    return r;
}

/// Unknown ordering of all coefficient vectors: index k*n + i for node
/// k < K and component i, followed by the d kernel coefficients at node K.
enum class Vectorization
{
    time_node_major
};

///
/// Petrov-Galerkin stiffness matrix [B]_{j,i} = (B* psi_i, B* psi_j) in block form.
///
struct StiffnessMatrix
{
    SparseMatrix B11, B12, B21, B22;
    Index n = 0, K = 0, d = 0;
    Vectorization convention = Vectorization::time_node_major;

    Index dimension() const { return n * K + d; }

    SparseMatrix monolithic() const
    {
        const Index nk = n * K;
        SparseMatrix m(nk + d, nk + d);
        std::vector<Triplet> t;
        t.reserve(static_cast<std::size_t>(B11.nonZeros() + B12.nonZeros() + B21.nonZeros() +
                                           B22.nonZeros()));
        auto put = [&t](const SparseMatrix& b, Index r0, Index c0) {
            for (Index k = 0; k < b.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(b, k); it; ++it)
                    t.emplace_back(r0 + it.row(), c0 + it.col(), it.value());
        };
        put(B11, 0, 0);
        put(B12, 0, nk);
        put(B21, nk, 0);
        put(B22, nk, nk);
        m.setFromTriplets(t.begin(), t.end());
        m.makeCompressed();
        return m;
    }
};

///
/// Kronecker assembly (time (x) space) of the stiffness blocks:
///   B11 = K11 (x) EE^T + O11 (x) EA^T + O11^T (x) AE^T + L11 (x) AA^T
///   B12 = O12 (x) EA^T V + L12 (x) AA^T V
///   B21 = O12^T (x) V^T AE^T + L21 (x) V^T AA^T
///   B22 = L22 * V^T AA^T V
///
inline StiffnessMatrix assemble_stiffness(const SparseMatrix& E, const SparseMatrix& A,
                                          const TimeGrid& grid, const KernelBasis& kb)
{
    const Index n = E.rows();
    if (A.rows() != n || A.cols() != n || E.cols() != n)
        throw DimensionMismatch("E and A must both be n x n");
    if (kb.V.rows() != n && kb.d != 0)
        throw DimensionMismatch("kernel basis has the wrong row dimension");

    const GramTriplet g = build_grams(grid);
    const SparseMatrix Et = E.transpose(), At = A.transpose();
    const SparseMatrix EEt = E * Et, EAt = E * At, AEt = A * Et, AAt = A * At;

    StiffnessMatrix s;
    s.n = n;
    s.K = grid.K();
    s.d = kb.d;

    const SparseMatrix K11 = GramTriplet::block11(g.Kt);
    const SparseMatrix O11 = GramTriplet::block11(g.Ot);
    const SparseMatrix L11 = GramTriplet::block11(g.Lt);
    const SparseMatrix O11t = O11.transpose();
    s.B11 = kron(K11, EEt) + kron(O11, EAt) + kron(O11t, AEt) + kron(L11, AAt);
    s.B11.makeCompressed();

    if (kb.d > 0)
    {
        const SparseMatrix O12 = GramTriplet::block12(g.Ot);
        const SparseMatrix L12 = GramTriplet::block12(g.Lt);
        const SparseMatrix L21 = GramTriplet::block21(g.Lt);
        const double L22       = GramTriplet::block22(g.Lt);
        const SparseMatrix EAtV  = to_sparse(EAt * kb.V);
        const SparseMatrix AAtV  = to_sparse(AAt * kb.V);
        const SparseMatrix VtAEt = to_sparse(kb.V.transpose() * AEt);
        const SparseMatrix VtAAt = to_sparse(kb.V.transpose() * AAt);
        const SparseMatrix O12t  = O12.transpose();
        s.B12 = kron(O12, EAtV) + kron(L12, AAtV);
        s.B21 = kron(O12t, VtAEt) + kron(L21, VtAAt);
        s.B22 = to_sparse(L22 * (kb.V.transpose() * (AAt * kb.V)));
    }
    else
    {
        s.B12.resize(n * s.K, 0);
        s.B21.resize(0, n * s.K);
        s.B22.resize(0, 0);
    }
    s.B12.makeCompressed();
    s.B21.makeCompressed();
    return s;
}

inline StiffnessMatrix assemble_stiffness(const DaeSystem& sys, const Parameter& mu, const TimeGrid& grid,
                                          const KernelBasis& kb)
{
    return assemble_stiffness(sys.E, sys.A_at(mu), grid, kb);
}

///
/// Right-hand side operator F (n(K+1) x N) with f^N = F^T s for time-node-major
/// nodal samples s, i.e. [F^T s]_j = sum_k (s_k sigma_k, psi_j).
///
struct RhsOperator
{
    SparseMatrix F;
    Index n = 0, K = 0, d = 0;

    Vector apply(const Vector& samples) const
    {
        if (samples.size() != F.rows())
            throw DimensionMismatch("rhs samples have length " + std::to_string(samples.size()) +
                                    ", expected " + std::to_string(F.rows()));
        return F.transpose() * samples;
    }

    Vector apply(const Matrix& samples) const { return apply(flatten_samples(samples)); }
};

inline RhsOperator assemble_rhs_operator(const TimeGrid& grid, Index n, const KernelBasis& kb)
{
    const GramTriplet g = build_grams(grid);
    SparseMatrix In(n, n);
    In.setIdentity();
    // (Lt (x) I_n) P with P = blockdiag(I_{nK}, V)
    const SparseMatrix LI = kron(g.Lt, In);
    const Index nk        = n * grid.K();
    SparseMatrix P(n * (grid.K() + 1), nk + kb.d);
    std::vector<Triplet> t;
    for (Index i = 0; i < nk; ++i)
        t.emplace_back(i, i, 1.0);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < kb.d; ++c)
            if (kb.V(r, c) != 0.0)
                t.emplace_back(nk + r, nk + c, kb.V(r, c));
    P.setFromTriplets(t.begin(), t.end());
    RhsOperator op;
    op.F = LI * P;
    op.F.makeCompressed();
    op.n = n;
    op.K = grid.K();
    op.d = kb.d;
    return op;
}

/// f^N for every rhs term separately (columns), i.e. F^T applied to the samples of f_q.
inline Matrix assemble_rhs_terms(const DaeSystem& sys, const TimeGrid& grid, const RhsOperator& op)
{
    Matrix out(op.F.cols(), static_cast<Index>(sys.rhs.size()));
    for (std::size_t q = 0; q < sys.rhs.size(); ++q)
        out.col(static_cast<Index>(q)) = op.apply(sample_on_grid(sys.rhs[q].function, grid));
    return out;
}

inline Vector assemble_rhs(const DaeSystem& sys, const Parameter& mu, const TimeGrid& grid,
                           const RhsOperator& op)
{
    Matrix samples = Matrix::Zero(sys.n, grid.num_nodes());
    for (const auto& term : sys.rhs.terms())
    {
        const double c = term.theta(mu);
        if (c != 0.0)
            samples += c * sample_on_grid(term.function, grid);
    }
    return op.apply(samples);
}

///
/// Control-driven right-hand side
///   f^N = F^T (B u)_samples + sum_q theta_q(mu2) F^T z_q,
/// where the control samples (component-major, m * (Ku+1)) live on a grid with
/// Ku intervals and are prolonged to the state grid. The z_q terms are the rhs
/// terms of `sys` (e.g. produced by homogenize()).
///
inline Vector assemble_control_rhs(const DaeSystem& sys, const RhsOperator& op, const TimeGrid& grid,
                                   const Vector& control_samples, Index Ku, const Parameter& mu2)
{
    if (!sys.control)
        throw InputError("system has no control matrix B");
    const SparseMatrix& B = *sys.control;
    const Index m         = B.cols();
    if (control_samples.size() != m * (Ku + 1))
        throw DimensionMismatch("expected " + std::to_string(m * (Ku + 1)) + " control samples, got " +
                                std::to_string(control_samples.size()));
    const TimeGrid coarse(grid.T(), Ku);
    // Component-major: row j holds the Ku+1 samples of u_j.
    const Matrix u_coarse = Eigen::Map<const Matrix>(control_samples.data(), Ku + 1, m).transpose();
    const Matrix u_fine   = prolong_control(u_coarse, coarse, grid);
    Matrix samples        = B * u_fine;
    for (const auto& term : sys.rhs.terms())
    {
        const double c = term.theta(mu2);
        if (c != 0.0)
            samples += c * sample_on_grid(term.function, grid);
    }
    return op.apply(samples);
}

///
/// Appends the hat-discretized control as affine rhs terms: for input j and
/// coarse node k, the term B e_j phi_k(t) with theta = mu[j*(Ku+1) + k].
/// Existing parameter references are shifted behind the control block, so
/// mu = (control samples, previous parameters).
///
inline DaeSystem with_control(const DaeSystem& sys, Index Ku)
{
    if (!sys.control)
        throw InputError("system has no control matrix B");
    if (Ku < 1)
        throw InputError("control grid needs at least one interval");
    const Index m          = sys.control->cols();
    const std::size_t offs = static_cast<std::size_t>(m * (Ku + 1));
    DaeSystem out          = sys;
    out.rhs                = AffineTimeFunction();
    const TimeGrid coarse(sys.T, Ku);
    for (Index j = 0; j < m; ++j)
    {
        const Vector bj = Matrix(*sys.control).col(j);
        for (Index k = 0; k <= Ku; ++k)
            out.rhs.add(ThetaExpression::component(static_cast<std::size_t>(j * (Ku + 1) + k)),
                        TimeFunction::separable(bj, [coarse, k](double t) { return hat(coarse, k, t); }));
    }
    for (const auto& term : sys.rhs.terms())
        out.rhs.add(term.theta.shifted(offs), term.function);
    AffineOperator<SparseMatrix> A;
    for (const auto& term : sys.A.terms())
        A.add(term.theta.shifted(offs), term.value);
    out.A = A;
    AffineOperator<Vector> x0;
    for (const auto& term : sys.x0.terms())
        x0.add(term.theta.shifted(offs), term.value);
    out.x0            = x0;
    out.parameter_dim = offs + sys.parameter_dimension();
    return out;
}

} // namespace uwdae

#endif // UWDAE_ASSEMBLY_HPP
