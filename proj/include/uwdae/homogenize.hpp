#ifndef UWDAE_HOMOGENIZE_HPP
#define UWDAE_HOMOGENIZE_HPP

#include <span>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/system.hpp"

namespace uwdae
{

///
/// C^1 extension xbar of one initial-value term with xbar(0) = x0_q.
/// Default-constructed members mean "constant in time".
///
struct InitialExtension
{
    TimeFunction value;
    TimeFunction derivative;

    bool is_constant() const { return !value && !derivative; }
};

namespace detail
{

inline std::vector<InitialExtension> resolve_extensions(const DaeSystem& sys,
                                                        std::span<const InitialExtension> ext)
{
    if (!ext.empty() && ext.size() != sys.x0.size())
        throw InconsistentExtension("expected " + std::to_string(sys.x0.size()) +
                                    " extensions (one per x0 term), got " +
                                    std::to_string(ext.size()));
    std::vector<InitialExtension> out(sys.x0.size());
    for (std::size_t q = 0; q < sys.x0.size(); ++q)
    {
        const Vector& x0q = sys.x0[q].value;
        if (ext.empty() || ext[q].is_constant())
        {
            out[q].value      = TimeFunction::constant(x0q);
            out[q].derivative = TimeFunction::zero(sys.n);
            continue;
        }
        const auto& e = ext[q];
        if (!e.value || !e.derivative)
            throw InconsistentExtension("extension " + std::to_string(q) +
                                        " needs both a value and a derivative");
        if (e.value.dim() != sys.n || e.derivative.dim() != sys.n)
            throw InconsistentExtension("extension " + std::to_string(q) + " has dimension " +
                                        std::to_string(e.value.dim()) + ", expected " +
                                        std::to_string(sys.n));
        const Vector at0 = e.value(0.0);
        if ((at0 - x0q).norm() > 1e-12 * std::max(1.0, x0q.norm()))
            throw InconsistentExtension("extension " + std::to_string(q) +
                                        " does not match the initial value at t = 0");
        out[q] = e;
    }
    return out;
}

} // namespace detail

///
/// Moves the initial condition into the right-hand side:
/// fhat = f - E xbar' + A xbar, with x0 = 0 in the returned system.
///
/// Each x0 term q contributes z_q = A xbar_q - E xbar_q'. A single
/// constant-coefficient A term is folded into one rhs term per q; otherwise
/// every product theta^A_p * theta^x_q becomes its own term. Terms with
/// identically zero data (zero x0 vector, constant extension) are dropped.
///
inline DaeSystem homogenize(const DaeSystem& sys, std::span<const InitialExtension> extensions = {})
{
    const auto ext = detail::resolve_extensions(sys, extensions);
    DaeSystem out  = sys;
    out.x0         = AffineOperator<Vector>();
    out.parameter_dim = sys.parameter_dimension();

    const bool fold = sys.A.size() == 1 && sys.A[0].theta.is_constant();
    for (std::size_t q = 0; q < sys.x0.size(); ++q)
    {
        const auto& term      = sys.x0[q];
        const bool default_ext = extensions.empty() || extensions[q].is_constant();
        if (default_ext && term.value.isZero(0.0))
            continue;
        const auto xbar  = ext[q].value;
        const auto dxbar = ext[q].derivative;
        const SparseMatrix E = sys.E;
        if (fold)
        {
            const SparseMatrix A = sys.A[0].theta.as_constant()->value * sys.A[0].value;
            out.rhs.add(term.theta, TimeFunction(sys.n, [A, E, xbar, dxbar](double t) {
                            return Vector(A * xbar(t) - E * dxbar(t));
                        }));
            continue;
        }
        for (const auto& a : sys.A.terms())
        {
            const SparseMatrix Aq = a.value;
            out.rhs.add(product(a.theta, term.theta),
                        TimeFunction(sys.n, [Aq, xbar](double t) { return Vector(Aq * xbar(t)); }));
        }
        if (!default_ext)
            out.rhs.add(term.theta, TimeFunction(sys.n, [E, dxbar](double t) {
                            return Vector(-(E * dxbar(t)));
                        }));
    }
    return out;
}

///
/// t -> sum_q theta^x_q(mu) xbar_q(t), the part removed by homogenize();
/// add it back to a solution of the homogenized system.
///
class ExtensionField
{
public:
    ExtensionField(const DaeSystem& original, std::span<const InitialExtension> extensions = {})
        : x0_(original.x0), ext_(detail::resolve_extensions(original, extensions)), n_(original.n)
    {
    }

    Vector operator()(const Parameter& mu, double t) const
    {
        Vector r = Vector::Zero(n_);
        for (std::size_t q = 0; q < ext_.size(); ++q)
            r += x0_[q].theta(mu) * ext_[q].value(t);
        return r;
    }

private:
    AffineOperator<Vector> x0_;
    std::vector<InitialExtension> ext_;
    Index n_;
};

} // namespace uwdae

#endif // UWDAE_HOMOGENIZE_HPP
