#ifndef UWDAE_SYSTEM_HPP
#define UWDAE_SYSTEM_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "uwdae/affine.hpp"
#include "uwdae/theta.hpp"
#include "uwdae/time_function.hpp"
#include "uwdae/types.hpp"

namespace uwdae
{

/// f_mu(t) = sum_q theta_q(mu) f_q(t)
class AffineTimeFunction
{
public:
    struct Term
    {
        ThetaExpression theta;
        TimeFunction function;
    };

    AffineTimeFunction() = default;

    void add(ThetaExpression theta, TimeFunction f) { terms_.push_back({std::move(theta), std::move(f)}); }

    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    std::vector<Term>& terms() { return terms_; }
    const Term& operator[](std::size_t q) const { return terms_[q]; }

    Vector coefficients(const Parameter& mu) const
    {
        Vector c(static_cast<Index>(terms_.size()));
        for (std::size_t q = 0; q < terms_.size(); ++q)
            c[static_cast<Index>(q)] = terms_[q].theta(mu);
        return c;
    }

    std::size_t required_dimension() const
    {
        std::size_t r = 0;
        for (const auto& t : terms_)
            r = std::max(r, t.theta.required_dimension());
        return r;
    }

    Vector operator()(const Parameter& mu, double t, Index dim) const
    {
        Vector r = Vector::Zero(dim);
        for (const auto& term : terms_)
        {
            const double c = term.theta(mu);
            if (c != 0.0)
                r += c * term.function(t);
        }
        return r;
    }

private:
    std::vector<Term> terms_;
};

///
/// Parameterized linear constant-coefficient DAE
///
///   E x'(t) - A_mu x(t) = f_mu(t),  t in (0, T),   x(0) = x0_mu,
///
/// with optional control matrix B (n x m) and output matrix C (p x n).
/// E is parameter-independent.
///
struct DaeSystem
{
    Index n = 0;
    SparseMatrix E;
    AffineOperator<SparseMatrix> A;
    AffineTimeFunction rhs;
    AffineOperator<Vector> x0;
    double T = 1.0;
    std::optional<SparseMatrix> control;
    std::optional<SparseMatrix> output;
    /// Declared parameter dimension; 0 means "infer from the theta expressions".
    std::size_t parameter_dim = 0;

    std::size_t parameter_dimension() const
    {
        return std::max({parameter_dim, A.required_dimension(), rhs.required_dimension(),
                         x0.required_dimension()});
    }

    SparseMatrix A_at(const Parameter& mu) const { return A(mu); }

    Vector f_at(const Parameter& mu, double t) const { return rhs(mu, t, n); }

    Vector x0_at(const Parameter& mu) const
    {
        return x0.empty() ? Vector(Vector::Zero(n)) : x0(mu);
    }
};

struct Diagnostic
{
    enum class Kind
    {
        dimension_mismatch,
        empty_affine_terms,
        nonfinite_entry,
        horizon,
        parameter_dimension,
        inconsistent_initial_value,
    };
    Kind kind;
    std::string message;
};

namespace detail
{

inline bool all_finite(const SparseMatrix& m)
{
    for (Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            if (!std::isfinite(it.value()))
                return false;
    return true;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

} // namespace detail

/// Structural checks; an empty result means the system is usable.
inline std::vector<Diagnostic> validate_system(const DaeSystem& sys)
{
    using K = Diagnostic::Kind;
    std::vector<Diagnostic> out;
    auto report = [&out](K kind, std::string msg) { out.push_back({kind, std::move(msg)}); };
    auto shape  = [](Index r, Index c) {
        return std::to_string(r) + "x" + std::to_string(c);
    };
    const Index n = sys.n;

    if (!(sys.T > 0.0) || !std::isfinite(sys.T))
        report(K::horizon, "horizon T must be positive and finite, got " + std::to_string(sys.T));
    if (n <= 0)
        report(K::dimension_mismatch, "state dimension n must be positive");
    if (sys.E.rows() != n || sys.E.cols() != n)
        report(K::dimension_mismatch, "E is " + shape(sys.E.rows(), sys.E.cols()) +
                                          ", expected " + shape(n, n));
    else if (!detail::all_finite(sys.E))
        report(K::nonfinite_entry, "E has non-finite entries");

    if (sys.A.empty())
        report(K::empty_affine_terms, "A has no affine terms");
    for (std::size_t q = 0; q < sys.A.size(); ++q)
    {
        const auto& m = sys.A[q].value;
        if (m.rows() != n || m.cols() != n)
            report(K::dimension_mismatch, "A term " + std::to_string(q) + " is " +
                                              shape(m.rows(), m.cols()) + ", expected " +
                                              shape(n, n));
        else if (!detail::all_finite(m))
            report(K::nonfinite_entry, "A term " + std::to_string(q) + " has non-finite entries");
    }
    for (std::size_t q = 0; q < sys.rhs.size(); ++q)
    {
        const auto& f = sys.rhs[q].function;
        if (!f)
            report(K::empty_affine_terms, "rhs term " + std::to_string(q) + " has no function");
        else if (f.dim() != n)
            report(K::dimension_mismatch, "rhs term " + std::to_string(q) + " has dimension " +
                                              std::to_string(f.dim()) + ", expected " +
                                              std::to_string(n));
        else if (sys.T > 0.0 && !(f(0.0).allFinite() && f(sys.T).allFinite()))
            report(K::nonfinite_entry, "rhs term " + std::to_string(q) + " is not finite");
    }
    for (std::size_t q = 0; q < sys.x0.size(); ++q)
    {
        const auto& v = sys.x0[q].value;
        if (v.size() != n)
            report(K::dimension_mismatch, "x0 term " + std::to_string(q) + " has size " +
                                              std::to_string(v.size()) + ", expected " +
                                              std::to_string(n));
        else if (!v.allFinite())
            report(K::nonfinite_entry, "x0 term " + std::to_string(q) + " has non-finite entries");
    }
    if (sys.control && sys.control->rows() != n)
        report(K::dimension_mismatch, "control matrix B has " + std::to_string(sys.control->rows()) +
                                          " rows, expected " + std::to_string(n));
    if (sys.output && sys.output->cols() != n)
        report(K::dimension_mismatch, "output matrix C has " + std::to_string(sys.output->cols()) +
                                          " columns, expected " + std::to_string(n));
    if (sys.parameter_dim != 0)
    {
        const std::size_t need = std::max({sys.A.required_dimension(), sys.rhs.required_dimension(),
                                           sys.x0.required_dimension()});
        if (need > sys.parameter_dim)
            report(K::parameter_dimension,
                   "theta expressions reference parameter index " + std::to_string(need - 1) +
                       " but the declared dimension is " + std::to_string(sys.parameter_dim));
    }
    return out;
}

///
/// Heuristic consistency check of x0 with f at t = 0+: warns when
/// E y = f(0) + A x0 has no least-squares solution with residual <= 1e-8.
///
inline std::optional<Diagnostic> check_initial_consistency(const DaeSystem& sys, const Parameter& mu,
                                                           double tol = 1e-8)
{
    const Vector x0 = sys.x0_at(mu);
    const Vector b  = sys.f_at(mu, 0.0) + sys.A_at(mu) * x0;
    const Matrix E  = Matrix(sys.E);
    const Vector y  = E.completeOrthogonalDecomposition().solve(b);
    const double res = (E * y - b).norm();
    if (res <= tol * std::max(1.0, b.norm()))
        return std::nullopt;
    return Diagnostic{Diagnostic::Kind::inconsistent_initial_value,
                      "initial value looks inconsistent with f(0+): least-squares residual " +
                          std::to_string(res)};
}

} // namespace uwdae

#endif // UWDAE_SYSTEM_HPP
