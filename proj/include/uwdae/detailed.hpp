#ifndef UWDAE_DETAILED_HPP
#define UWDAE_DETAILED_HPP

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "uwdae/assembly.hpp"
#include "uwdae/errors.hpp"
#include "uwdae/kernel.hpp"
#include "uwdae/quadrature.hpp"
#include "uwdae/system.hpp"
#include "uwdae/temporal.hpp"

namespace uwdae
{

///
/// Assembled and factorized Petrov-Galerkin problem for one parameter value
/// and one time grid. Immutable after construction; share it read-only.
///
class DetailedProblem
{
public:
    // Block banded in time-node-major order; factorized without fill-reducing permutation.
    using Factorization = Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>>;

    DetailedProblem(std::shared_ptr<const DaeSystem> sys, Parameter mu, TimeGrid grid,
                    std::optional<KernelBasis> kernel = std::nullopt)
        : sys_(std::move(sys)), mu_(std::move(mu)), grid_(grid),
          kernel_(kernel ? std::move(*kernel) : kernel_basis(sys_->E))
    {
        A_      = sys_->A_at(mu_);
        blocks_ = assemble_stiffness(sys_->E, A_, grid_, kernel_);
        B_      = blocks_.monolithic();
        rhs_op_ = assemble_rhs_operator(grid_, sys_->n, kernel_);
        factorize();
    }

    const DaeSystem& system() const { return *sys_; }
    const std::shared_ptr<const DaeSystem>& system_ptr() const { return sys_; }
    const Parameter& mu() const { return mu_; }
    const TimeGrid& grid() const { return grid_; }
    const KernelBasis& kernel() const { return kernel_; }
    const SparseMatrix& A() const { return A_; }
    const StiffnessMatrix& blocks() const { return blocks_; }
    const SparseMatrix& stiffness() const { return B_; }
    const RhsOperator& rhs_operator() const { return rhs_op_; }
    Index dimension() const { return B_.rows(); }

    /// f^N for the problem's own parameter.
    Vector rhs() const { return assemble_rhs(*sys_, mu_, grid_, rhs_op_); }

    /// B^{-1} f with a few steps of iterative refinement.
    Vector solve(const Vector& f) const
    {
        if (f.size() != dimension())
            throw DimensionMismatch("rhs has length " + std::to_string(f.size()) + ", expected " +
                                    std::to_string(dimension()));
        Vector x         = llt_->solve(f);
        const double fn  = f.norm();
        for (int it = 0; it < 4 && fn > 0.0; ++it)
        {
            const Vector r = f - B_ * x;
            if (r.norm() <= 1e-14 * fn)
                break;
            x += llt_->solve(r);
        }
        return x;
    }

    Matrix solve(const Matrix& F) const
    {
        Matrix X(F.rows(), F.cols());
        for (Index j = 0; j < F.cols(); ++j)
            X.col(j) = solve(Vector(F.col(j)));
        return X;
    }

private:
    void factorize()
    {
        llt_ = std::make_shared<Factorization>();
        llt_->compute(B_);
        if (llt_->info() == Eigen::Success)
            return;
        Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(B_);
        if (ldlt.info() == Eigen::Success)
        {
            const Vector D = ldlt.vectorD();
            const double scale = D.cwiseAbs().maxCoeff();
            if ((D.array() < -1e-14 * scale).any() && !(D.cwiseAbs().array() <= 1e-14 * scale).any())
                throw FactorizationFailure("stiffness matrix is not positive definite (modeling error)");
        }
        throw SingularAssembly("stiffness matrix is singular: irregular pencil or inconsistent kernel basis");
    }

    std::shared_ptr<const DaeSystem> sys_;
    Parameter mu_;
    TimeGrid grid_;
    KernelBasis kernel_;
    SparseMatrix A_;
    StiffnessMatrix blocks_;
    SparseMatrix B_;
    RhsOperator rhs_op_;
    std::shared_ptr<Factorization> llt_;
};

/// Coefficients of the ultraweak solution in the trial basis xi_i = B* psi_i.
struct DetailedSolution
{
    Vector coeffs;
    std::shared_ptr<const DetailedProblem> problem;

    const TimeGrid& grid() const { return problem->grid(); }
    const Parameter& mu() const { return problem->mu(); }
    const KernelBasis& kernel() const { return problem->kernel(); }
};

inline std::shared_ptr<const DetailedProblem> make_detailed_problem(const DaeSystem& sys, const Parameter& mu,
                                                                    const TimeGrid& grid)
{
    return std::make_shared<const DetailedProblem>(std::make_shared<const DaeSystem>(sys), mu, grid);
}

inline DetailedSolution solve_detailed(std::shared_ptr<const DetailedProblem> problem)
{
    DetailedSolution sol;
    sol.coeffs  = problem->solve(problem->rhs());
    sol.problem = std::move(problem);
    return sol;
}

inline DetailedSolution solve_detailed(const DaeSystem& sys, const Parameter& mu, const TimeGrid& grid)
{
    return solve_detailed(make_detailed_problem(sys, mu, grid));
}

///
/// Nodal values (n x (K+1)) of the test function y = sum_i c_i psi_i; the
/// state is x = B* y = -E^T y' - A^T y.
///
inline Matrix nodal_test_values(const Vector& coeffs, Index n, Index K, const KernelBasis& kb)
{
    if (coeffs.size() != n * K + kb.d)
        throw DimensionMismatch("coefficient vector has length " + std::to_string(coeffs.size()) +
                                ", expected " + std::to_string(n * K + kb.d));
    Matrix Y(n, K + 1);
    Y.leftCols(K) = Eigen::Map<const Matrix>(coeffs.data(), n, K);
    Y.col(K)      = kb.d > 0 ? Vector(kb.V * coeffs.tail(kb.d)) : Vector(Vector::Zero(n));
    return Y;
}

inline Matrix nodal_test_values(const DetailedSolution& sol)
{
    return nodal_test_values(sol.coeffs, sol.problem->system().n, sol.grid().K(), sol.kernel());
}

namespace detail
{

// x on cell c at local coordinate s in [0, 1]
inline Vector state_in_cell(const Matrix& Y, const SparseMatrix& Et, const SparseMatrix& At, double dt,
                            Index c, double s)
{
    const Vector y  = (1.0 - s) * Y.col(c) + s * Y.col(c + 1);
    const Vector dy = (Y.col(c + 1) - Y.col(c)) / dt;
    return -(Et * dy) - At * y;
}

} // namespace detail

///
/// Pointwise values (n x |times|) of the ultraweak solution. Trial functions
/// jump at interior nodes; there the average of both one-sided limits is returned.
///
inline Matrix evaluate_state(const DetailedSolution& sol, const std::vector<double>& times)
{
    const auto& grid = sol.grid();
    const Matrix Y   = nodal_test_values(sol);
    const SparseMatrix Et = sol.problem->system().E.transpose();
    const SparseMatrix At = sol.problem->A().transpose();
    const double eps      = 1e-12 * grid.dt();
    Matrix out(Y.rows(), static_cast<Index>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j)
    {
        const double t = times[j];
        if (!(t >= -eps && t <= grid.T() + eps))
            throw OutOfDomain("query time " + std::to_string(t) + " outside [0, " +
                              std::to_string(grid.T()) + "]");
        const double pos = std::clamp(t, 0.0, grid.T()) / grid.dt();
        const Index k    = static_cast<Index>(std::llround(pos));
        Vector x;
        if (std::abs(pos - static_cast<double>(k)) * grid.dt() <= eps)
        {
            if (k == 0)
                x = detail::state_in_cell(Y, Et, At, grid.dt(), 0, 0.0);
            else if (k == grid.K())
                x = detail::state_in_cell(Y, Et, At, grid.dt(), k - 1, 1.0);
            else
                x = 0.5 * (detail::state_in_cell(Y, Et, At, grid.dt(), k - 1, 1.0) +
                           detail::state_in_cell(Y, Et, At, grid.dt(), k, 0.0));
        }
        else
        {
            const Index c = grid.cell_of(t);
            x             = detail::state_in_cell(Y, Et, At, grid.dt(), c, pos - static_cast<double>(c));
        }
        out.col(static_cast<Index>(j)) = x;
    }
    return out;
}

/// ||x^N||_{L2} through the Gram identity ||x^N||^2 = c^T B c.
inline double l2_norm(const DetailedSolution& sol)
{
    return std::sqrt(std::max(0.0, sol.coeffs.dot(sol.problem->stiffness() * sol.coeffs)));
}

/// Same Gram identity for an arbitrary coefficient vector.
inline double l2_norm(const DetailedProblem& problem, const Vector& coeffs)
{
    return std::sqrt(std::max(0.0, coeffs.dot(problem.stiffness() * coeffs)));
}

using StateFunction = std::function<Vector(double)>;

/// ||reference - x^N||_{L2} by composite Gauss-Legendre quadrature.
inline double l2_error(const DetailedSolution& sol, const StateFunction& reference, int points_per_cell = 4)
{
    const auto& grid      = sol.grid();
    const auto rule       = gauss_legendre(points_per_cell);
    const Matrix Y        = nodal_test_values(sol);
    const SparseMatrix Et = sol.problem->system().E.transpose();
    const SparseMatrix At = sol.problem->A().transpose();
    double acc            = 0.0;
    for (Index c = 0; c < grid.K(); ++c)
        for (std::size_t q = 0; q < rule.points.size(); ++q)
        {
            const double s = 0.5 * (rule.points[q] + 1.0);
            const double t = grid.node(c) + s * grid.dt();
            acc += 0.5 * grid.dt() * rule.weights[q] *
                   (reference(t) - detail::state_in_cell(Y, Et, At, grid.dt(), c, s)).squaredNorm();
        }
    return std::sqrt(acc);
}

/// L2 norm of a reference function by the same composite rule.
inline double l2_norm(const StateFunction& f, const TimeGrid& grid, int points_per_cell = 4)
{
    const auto rule = gauss_legendre(points_per_cell);
    double acc      = 0.0;
    for (Index c = 0; c < grid.K(); ++c)
        for (std::size_t q = 0; q < rule.points.size(); ++q)
        {
            const double t = grid.node(c) + 0.5 * (rule.points[q] + 1.0) * grid.dt();
            acc += 0.5 * grid.dt() * rule.weights[q] * f(t).squaredNorm();
        }
    return std::sqrt(acc);
}

///
/// Coefficients of the same test function y on a grid refined by `factor`:
/// nodal values are interpolated linearly, the kernel coefficients at T carry over.
///
inline Vector prolong_coefficients(const Vector& coeffs, Index n, Index K, const KernelBasis& kb, Index factor)
{
    const Matrix Y  = nodal_test_values(coeffs, n, K, kb);
    const Index Kf  = K * factor;
    Vector out(n * Kf + kb.d);
    for (Index kf = 0; kf < Kf; ++kf)
    {
        const Index c  = kf / factor;
        const double w = static_cast<double>(kf % factor) / static_cast<double>(factor);
        out.segment(kf * n, n) = w == 0.0 ? Vector(Y.col(c)) : Vector((1.0 - w) * Y.col(c) + w * Y.col(c + 1));
    }
    if (kb.d > 0)
        out.tail(kb.d) = coeffs.tail(kb.d);
    return out;
}

///
/// Dual norm of the residual over the enriched test space Y^{refinement*K}:
/// sqrt(rho^T B_fine^{-1} rho) with rho = f_fine - B_fine c_prolonged.
/// Nondecreasing in the refinement (sup over nested spaces); refinement 1
/// returns the (vanishing) residual on the discrete space itself.
///
inline double estimator_detailed(const DetailedSolution& sol, Index refinement = 2)
{
    if (refinement < 1)
        throw InputError("estimator refinement must be >= 1");
    const auto& p   = *sol.problem;
    const Index n   = p.system().n;
    const TimeGrid fine = p.grid().refined(refinement);
    const DetailedProblem fp(p.system_ptr(), p.mu(), fine, p.kernel());
    const Vector c  = prolong_coefficients(sol.coeffs, n, p.grid().K(), p.kernel(), refinement);
    const Vector rho = fp.rhs() - fp.stiffness() * c;
    return std::sqrt(std::max(0.0, rho.dot(fp.solve(rho))));
}

/// ||x^fine - x^coarse||_{L2} of two solutions on nested grids (exact, via the fine Gram matrix).
inline double l2_difference(const DetailedSolution& fine, const DetailedSolution& coarse)
{
    const Index Kc = coarse.grid().K(), Kf = fine.grid().K();
    if (Kf % Kc != 0 || !fine.grid().same_horizon(coarse.grid()))
        throw GridMismatch("solutions must live on nested grids");
    const Vector c = prolong_coefficients(coarse.coeffs, coarse.problem->system().n, Kc, coarse.kernel(), Kf / Kc);
    return l2_norm(*fine.problem, Vector(fine.coeffs - c));
}

///
/// Implicit Euler baseline (E - dt A) x_k = E x_{k-1} + dt f(t_k), started
/// from the system's initial value (0 for homogeneous systems).
///
inline Matrix implicit_euler_reference(const DaeSystem& sys, const Parameter& mu, const TimeGrid& grid)
{
    const SparseMatrix A = sys.A_at(mu);
    const double dt      = grid.dt();
    SparseMatrix step    = sys.E - dt * A;
    step.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(step);
    if (lu.info() != Eigen::Success)
        throw StepSingular("implicit Euler step matrix E - dt*A is singular");
    Matrix X(sys.n, grid.num_nodes());
    X.col(0) = sys.x0_at(mu);
    for (Index k = 1; k <= grid.K(); ++k)
    {
        const Vector rhs = sys.E * X.col(k - 1) + dt * sys.f_at(mu, grid.node(k));
        X.col(k)         = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !X.col(k).allFinite())
            throw StepSingular("implicit Euler solve failed at step " + std::to_string(k));
    }
    return X;
}

struct Trajectory
{
    std::vector<double> times;
    Matrix values;  // rows: components, cols: times
};

inline Trajectory midpoint_trajectory(const DetailedSolution& sol)
{
    Trajectory tr;
    tr.times  = sol.grid().midpoints();
    tr.values = evaluate_state(sol, tr.times);
    return tr;
}

/// Cell-midpoint states (n x K) for raw trial coefficients, without a factorization.
inline Matrix midpoint_states(const Vector& coeffs, const SparseMatrix& E, const SparseMatrix& A,
                              const TimeGrid& grid, const KernelBasis& kb)
{
    const Matrix Y        = nodal_test_values(coeffs, E.rows(), grid.K(), kb);
    const SparseMatrix Et = E.transpose(), At = A.transpose();
    Matrix out(E.rows(), grid.K());
    for (Index c = 0; c < grid.K(); ++c)
        out.col(c) = detail::state_in_cell(Y, Et, At, grid.dt(), c, 0.5);
    return out;
}

/// y = C x sampled at the cell midpoints.
inline Trajectory output_trajectory(const DetailedSolution& sol, const SparseMatrix& C)
{
    if (C.cols() != sol.problem->system().n)
        throw DimensionMismatch("output matrix has " + std::to_string(C.cols()) + " columns, expected " +
                                std::to_string(sol.problem->system().n));
    Trajectory tr = midpoint_trajectory(sol);
    tr.values     = C * tr.values;
    return tr;
}

} // namespace uwdae

#endif // UWDAE_DETAILED_HPP
