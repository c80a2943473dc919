#ifndef UWDAE_TEMPORAL_HPP
#define UWDAE_TEMPORAL_HPP

#include <cmath>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/time_function.hpp"
#include "uwdae/types.hpp"

namespace uwdae
{

/// Uniform grid t_k = k * dt on [0, T], dt = T / K.
class TimeGrid
{
public:
    TimeGrid(double T, Index K) : T_(T), K_(K)
    {
        if (!(T > 0.0) || !std::isfinite(T))
            throw InputError("time horizon must be positive and finite");
        if (K < 1)
            throw InputError("time grid needs at least one interval");
        dt_ = T / static_cast<double>(K);
    }

    double T() const { return T_; }
    Index K() const { return K_; }
    double dt() const { return dt_; }
    Index num_nodes() const { return K_ + 1; }

    /// Node k; the last node is T exactly.
    double node(Index k) const { return k == K_ ? T_ : static_cast<double>(k) * dt_; }
    double midpoint(Index cell) const { return (static_cast<double>(cell) + 0.5) * dt_; }

    std::vector<double> nodes() const
    {
        std::vector<double> t(static_cast<std::size_t>(K_ + 1));
        for (Index k = 0; k <= K_; ++k)
            t[static_cast<std::size_t>(k)] = node(k);
        return t;
    }

    std::vector<double> midpoints() const
    {
        std::vector<double> t(static_cast<std::size_t>(K_));
        for (Index k = 0; k < K_; ++k)
            t[static_cast<std::size_t>(k)] = midpoint(k);
        return t;
    }

    /// Cell containing t, with t = T mapped to the last cell.
    Index cell_of(double t) const
    {
        auto c = static_cast<Index>(std::floor(t / dt_));
        return std::clamp<Index>(c, 0, K_ - 1);
    }

    TimeGrid refined(Index factor) const { return TimeGrid(T_, K_ * factor); }

    bool same_horizon(const TimeGrid& o) const
    {
        return std::abs(T_ - o.T_) <= 1e-14 * std::max(std::abs(T_), std::abs(o.T_));
    }

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.T_ == b.T_ && a.K_ == b.K_; }

private:
    double T_;
    Index K_;
    double dt_;
};

///
/// Temporal Gram matrices of the hat basis sigma_0..sigma_K:
///   [Kt]_{k,l} = (sigma_k', sigma_l'),  [Lt]_{k,l} = (sigma_k, sigma_l),
///   [Ot]_{k,l} = (sigma_k', sigma_l).
///
/// Block views split off the last node: (1,1) is K x K, (1,2) K x 1,
/// (2,1) 1 x K, (2,2) 1 x 1.
///
struct GramTriplet
{
    SparseMatrix Kt, Lt, Ot;

    static SparseMatrix block11(const SparseMatrix& m) { return m.topLeftCorner(m.rows() - 1, m.cols() - 1); }
    static SparseMatrix block12(const SparseMatrix& m) { return m.topRightCorner(m.rows() - 1, 1); }
    static SparseMatrix block21(const SparseMatrix& m) { return m.bottomLeftCorner(1, m.cols() - 1); }
    static double block22(const SparseMatrix& m) { return m.coeff(m.rows() - 1, m.cols() - 1); }
};

inline GramTriplet build_grams(const TimeGrid& grid)
{
    const Index K   = grid.K();
    const double dt = grid.dt();
    std::vector<Triplet> kt, lt, ot;
    kt.reserve(4 * K);
    lt.reserve(4 * K);
    ot.reserve(4 * K);
    // Per-cell element matrices on (t_c, t_{c+1}); local dofs (c, c+1).
    for (Index c = 0; c < K; ++c)
    {
        const Index a = c, b = c + 1;
        auto cell = [a, b](std::vector<Triplet>& t, double aa, double ab, double ba, double bb) {
            t.emplace_back(a, a, aa);
            t.emplace_back(a, b, ab);
            t.emplace_back(b, a, ba);
            t.emplace_back(b, b, bb);
        };
        cell(kt, 1.0 / dt, -1.0 / dt, -1.0 / dt, 1.0 / dt);
        cell(lt, dt / 3.0, dt / 6.0, dt / 6.0, dt / 3.0);
        cell(ot, -0.5, -0.5, 0.5, 0.5);
    }
    GramTriplet g;
    g.Kt.resize(K + 1, K + 1);
    g.Lt.resize(K + 1, K + 1);
    g.Ot.resize(K + 1, K + 1);
    g.Kt.setFromTriplets(kt.begin(), kt.end());
    g.Lt.setFromTriplets(lt.begin(), lt.end());
    g.Ot.setFromTriplets(ot.begin(), ot.end());
    // Interior Ot diagonal entries cancel to exactly 0; drop them.
    g.Ot.prune(0.0);
    return g;
}

/// dim x (K+1) matrix of nodal samples; column k is f(t_k).
inline Matrix sample_on_grid(const TimeFunction& f, const TimeGrid& grid)
{
    Matrix s(f.dim(), grid.num_nodes());
    for (Index k = 0; k <= grid.K(); ++k)
        s.col(k) = f(grid.node(k));
    return s;
}

/// Hat function sigma_k of the grid evaluated at t (restricted to [0, T]).
inline double hat(const TimeGrid& grid, Index k, double t)
{
    const double r = std::abs(t - grid.node(k)) / grid.dt();
    return r >= 1.0 ? 0.0 : 1.0 - r;
}

///
/// Evaluates the coarse hat expansion of `coarse_samples` (dim x (Ku+1)) at
/// the nodes of `fine`. Exact at shared nodes of nested grids.
///
inline Matrix prolong_control(const Matrix& coarse_samples, const TimeGrid& coarse, const TimeGrid& fine)
{
    if (!coarse.same_horizon(fine))
        throw GridMismatch("control and state grids have different horizons");
    if (coarse.K() > fine.K())
        throw GridMismatch("control grid must not be finer than the state grid");
    if (coarse_samples.cols() != coarse.num_nodes())
        throw DimensionMismatch("expected " + std::to_string(coarse.num_nodes()) +
                                " control samples per component, got " +
                                std::to_string(coarse_samples.cols()));
    Matrix out(coarse_samples.rows(), fine.num_nodes());
    for (Index k = 0; k <= fine.K(); ++k)
    {
        // Integer arithmetic locates the coarse cell exactly for nested grids.
        const Index num = k * coarse.K();
        Index c         = num / fine.K();
        Index rem       = num % fine.K();
        if (c == coarse.K())
        {
            c   = coarse.K() - 1;
            rem = fine.K();
        }
        const double w = static_cast<double>(rem) / static_cast<double>(fine.K());
        out.col(k)     = rem == 0 ? Vector(coarse_samples.col(c))
                                  : Vector((1.0 - w) * coarse_samples.col(c) + w * coarse_samples.col(c + 1));
    }
    return out;
}

/// Flattens dim x (K+1) samples into the time-node-major vector (index k*dim + i).
inline Vector flatten_samples(const Matrix& samples)
{
    return Eigen::Map<const Vector>(samples.data(), samples.size());
}

} // namespace uwdae

#endif // UWDAE_TEMPORAL_HPP
