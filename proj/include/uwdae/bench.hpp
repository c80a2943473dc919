#ifndef UWDAE_BENCH_HPP
#define UWDAE_BENCH_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uwdae/assembly.hpp"
#include "uwdae/detailed.hpp"
#include "uwdae/errors.hpp"
#include "uwdae/homogenize.hpp"
#include "uwdae/parallel.hpp"
#include "uwdae/rbm.hpp"
#include "uwdae/system.hpp"

namespace uwdae
{

// ---------------------------------------------------------------------------
// Scalar test problems
// ---------------------------------------------------------------------------

/// x' + lambda x = 1 on (0, T), x(0) = 0. Solution (1 - exp(-lambda t)) / lambda.
inline DaeSystem make_scalar_relaxation(double lambda = 1.0, double T = 1.0)
{
    DaeSystem s;
    s.n = 1;
    s.T = T;
    s.E = SparseMatrix(1, 1);
    s.E.insert(0, 0) = 1.0;
    SparseMatrix A(1, 1);
    A.insert(0, 0) = -lambda;
    s.A            = AffineOperator<SparseMatrix>(A);
    s.rhs.add(ThetaExpression::constant(1.0), TimeFunction::constant(Vector::Ones(1)));
    return s;
}

inline StateFunction scalar_relaxation_solution(double lambda = 1.0)
{
    return [lambda](double t) { return Vector::Constant(1, (1.0 - std::exp(-lambda * t)) / lambda); };
}

/// x' + x = 0, x(0) = 1 (nonhomogeneous initial value, zero forcing).
inline DaeSystem make_scalar_decay(double T = 1.0)
{
    DaeSystem s;
    s.n = 1;
    s.T = T;
    s.E = SparseMatrix(1, 1);
    s.E.insert(0, 0) = 1.0;
    SparseMatrix A(1, 1);
    A.insert(0, 0) = -1.0;
    s.A            = AffineOperator<SparseMatrix>(A);
    s.x0           = AffineOperator<Vector>(Vector::Ones(1));
    return s;
}

// ---------------------------------------------------------------------------
// Serial RLC circuit
// ---------------------------------------------------------------------------

struct RlcParams
{
    double R = 1.0;
    double L = 1.0;
    double C = 1.0;
    double T = 4.0 * std::numbers::pi;
};

/// amplitude * sin(omega t)
struct Sinusoid
{
    double amplitude = 1.0;
    double omega     = 1.0;
};

struct RlcSource
{
    std::string name;
    std::function<double(double)> voltage;
    std::optional<Sinusoid> sinusoid;

    /// sin(4 pi t / T)
    static RlcSource smooth(const RlcParams& p)
    {
        const Sinusoid s{1.0, 4.0 * std::numbers::pi / p.T};
        return {"smooth", [s](double t) { return s.amplitude * std::sin(s.omega * t); }, s};
    }

    /// sign(cos(4 pi t / T))
    static RlcSource discontinuous(const RlcParams& p)
    {
        const double w = 4.0 * std::numbers::pi / p.T;
        return {"disc",
                [w](double t) {
                    const double c = std::cos(w * t);
                    return static_cast<double>((c > 0.0) - (c < 0.0));
                },
                std::nullopt};
    }

    static RlcSource sine(double amplitude, double omega)
    {
        const Sinusoid s{amplitude, omega};
        return {"sine", [s](double t) { return s.amplitude * std::sin(s.omega * t); }, s};
    }

    static RlcSource custom(std::string name, std::function<double(double)> fn)
    {
        return {std::move(name), std::move(fn), std::nullopt};
    }
};

namespace detail
{

inline void check_rlc(const RlcParams& p)
{
    if (!(p.R > 0.0 && p.L > 0.0 && p.C > 0.0))
        throw InputError("RLC parameters R, L, C must be positive");
    if (!(p.T > 0.0))
        throw InputError("RLC horizon T must be positive");
}

} // namespace detail

///
/// State x = (current, V_C, V_L, V_R); E = diag(1,1,0,0),
/// A = [0 0 1/L 0; 1/C 0 0 0; R 0 0 -1; 0 1 1 1], f = (0,0,0,-f_VS), x(0) = 0.
///
inline DaeSystem make_rlc(const RlcParams& p, const RlcSource& source)
{
    detail::check_rlc(p);
    DaeSystem s;
    s.n = 4;
    s.T = p.T;
    s.E = SparseMatrix(4, 4);
    s.E.insert(0, 0) = 1.0;
    s.E.insert(1, 1) = 1.0;
    s.E.makeCompressed();
    SparseMatrix A(4, 4);
    A.insert(0, 2) = 1.0 / p.L;
    A.insert(1, 0) = 1.0 / p.C;
    A.insert(2, 0) = p.R;
    A.insert(2, 3) = -1.0;
    A.insert(3, 1) = 1.0;
    A.insert(3, 2) = 1.0;
    A.insert(3, 3) = 1.0;
    A.makeCompressed();
    s.A = AffineOperator<SparseMatrix>(A);
    Vector dir = Vector::Zero(4);
    dir[3]     = -1.0;
    s.rhs.add(ThetaExpression::constant(1.0), TimeFunction::separable(dir, source.voltage));
    return s;
}

///
/// Closed-form RLC state for a sinusoidal source and zero initial state.
///
/// The charge q solves L q'' + R q' + q / C = a sin(w t), q(0) = q'(0) = 0;
/// then current = q', V_C = q / C, V_L = L q'', V_R = R q'.
///
class RlcAnalytic
{
  public:
    RlcAnalytic(const RlcParams& p, const RlcSource& source) : p_(p)
    {
        detail::check_rlc(p);
        if (!source.sinusoid)
            throw UnsupportedSource("no closed-form solution for source '" + source.name + "'");
        a_ = source.sinusoid->amplitude;
        w_ = source.sinusoid->omega;
        using namespace std::complex_literals;
        const std::complex<double> iw = 1i * w_;
        // Particular solution q_p = Im(a e^{iwt} / Z).
        z_inv_ = a_ / (p.L * iw * iw + p.R * iw + 1.0 / p.C);
        const double qp0  = std::imag(z_inv_);
        const double dqp0 = std::imag(z_inv_ * iw);
        const std::complex<double> disc = std::sqrt(std::complex<double>(p.R * p.R - 4.0 * p.L / p.C));
        r1_ = (-p.R + disc) / (2.0 * p.L);
        r2_ = (-p.R - disc) / (2.0 * p.L);
        repeated_ = std::abs(r1_ - r2_) <= 1e-12 * std::max(1.0, std::abs(r1_));
        if (repeated_)
        {
            // q_h = (c1 + c2 t) e^{r t}
            c1_ = -qp0;
            c2_ = -dqp0 - r1_ * c1_;
        }
        else
        {
            // c1 + c2 = -qp0, r1 c1 + r2 c2 = -dqp0
            c1_ = (-dqp0 + r2_ * qp0) / (r1_ - r2_);
            c2_ = -qp0 - c1_;
        }
    }

    Vector operator()(double t) const
    {
        using namespace std::complex_literals;
        const std::complex<double> iw = 1i * w_;
        const std::complex<double> e  = std::exp(iw * t);
        double dq  = std::imag(z_inv_ * iw * e);
        double ddq = std::imag(z_inv_ * iw * iw * e);
        double q   = std::imag(z_inv_ * e);
        if (repeated_)
        {
            const std::complex<double> er = std::exp(r1_ * t);
            q += std::real((c1_ + c2_ * t) * er);
            dq += std::real((c2_ + r1_ * (c1_ + c2_ * t)) * er);
            ddq += std::real((2.0 * r1_ * c2_ + r1_ * r1_ * (c1_ + c2_ * t)) * er);
        }
        else
        {
            const std::complex<double> e1 = std::exp(r1_ * t), e2 = std::exp(r2_ * t);
            q += std::real(c1_ * e1 + c2_ * e2);
            dq += std::real(c1_ * r1_ * e1 + c2_ * r2_ * e2);
            ddq += std::real(c1_ * r1_ * r1_ * e1 + c2_ * r2_ * r2_ * e2);
        }
        Vector x(4);
        x << dq, q / p_.C, p_.L * ddq, p_.R * dq;
        return x;
    }

    /// Time derivative of the state (for plug-in residual checks).
    Vector derivative(double t, double h = 1e-5) const
    {
        return ((*this)(t + h) - (*this)(t - h)) / (2.0 * h);
    }

  private:
    RlcParams p_;
    double a_ = 0.0, w_ = 0.0;
    std::complex<double> z_inv_, r1_, r2_, c1_, c2_;
    bool repeated_ = false;
};

inline Vector rlc_analytic(const RlcParams& p, const RlcSource& source, double t)
{
    return RlcAnalytic(p, source)(t);
}

// ---------------------------------------------------------------------------
// Stokes-like saddle point DAE on a staggered grid
// ---------------------------------------------------------------------------

struct StokesLikeParams
{
    Index m_g = 8;
    double nu = 1.0;
    double T  = 1.0;
    /// Velocity unknown driven by the input; -1 selects a horizontal velocity near the center.
    Index input_velocity = -1;
    /// Velocity unknown observed by the output; -1 selects a vertical velocity off center.
    Index output_velocity = -1;
    /// Scale of the divergence-free initial velocity (0 gives x(0) = 0).
    double initial_amplitude = 1.0;
};

///
/// Staggered (MAC) layout on the unit square with m = m_g cells per side.
///
/// Horizontal velocities live on interior vertical faces (i, j), i = 1..m-1,
/// j = 0..m-1; vertical velocities on interior horizontal faces (i, j),
/// i = 0..m-1, j = 1..m-1; pressures in cells, the last one pinned to zero.
///
struct StaggeredGrid
{
    Index m = 0;

    double h() const { return 1.0 / static_cast<double>(m); }
    Index num_u() const { return (m - 1) * m; }
    Index num_v() const { return m * (m - 1); }
    Index num_velocity() const { return num_u() + num_v(); }
    Index num_pressure() const { return m * m - 1; }
    Index dimension() const { return num_velocity() + num_pressure(); }

    Index u(Index i, Index j) const { return (i - 1) + (m - 1) * j; }
    Index v(Index i, Index j) const { return num_u() + i + m * (j - 1); }
    Index cell(Index i, Index j) const { return i + m * j; }
};

namespace detail
{

inline SparseMatrix staggered_laplacian(const StaggeredGrid& g)
{
    const Index m    = g.m;
    const double ih2 = 1.0 / (g.h() * g.h());
    std::vector<Triplet> t;
    // Horizontal velocities: Dirichlet on the faces x = 0, 1; ghost reflection at y = 0, 1.
    for (Index j = 0; j < m; ++j)
        for (Index i = 1; i < m; ++i)
        {
            const Index r = g.u(i, j);
            double diag   = -4.0 * ih2;
            if (i > 1)
                t.emplace_back(r, g.u(i - 1, j), ih2);
            if (i < m - 1)
                t.emplace_back(r, g.u(i + 1, j), ih2);
            if (j > 0)
                t.emplace_back(r, g.u(i, j - 1), ih2);
            else
                diag -= ih2;
            if (j < m - 1)
                t.emplace_back(r, g.u(i, j + 1), ih2);
            else
                diag -= ih2;
            t.emplace_back(r, r, diag);
        }
    for (Index j = 1; j < m; ++j)
        for (Index i = 0; i < m; ++i)
        {
            const Index r = g.v(i, j);
            double diag   = -4.0 * ih2;
            if (j > 1)
                t.emplace_back(r, g.v(i, j - 1), ih2);
            if (j < m - 1)
                t.emplace_back(r, g.v(i, j + 1), ih2);
            if (i > 0)
                t.emplace_back(r, g.v(i - 1, j), ih2);
            else
                diag -= ih2;
            if (i < m - 1)
                t.emplace_back(r, g.v(i + 1, j), ih2);
            else
                diag -= ih2;
            t.emplace_back(r, r, diag);
        }
    SparseMatrix L(g.num_velocity(), g.num_velocity());
    L.setFromTriplets(t.begin(), t.end());
    return L;
}

/// Cell divergence of the face velocities, all m*m rows.
inline SparseMatrix staggered_divergence(const StaggeredGrid& g)
{
    const Index m   = g.m;
    const double ih = 1.0 / g.h();
    std::vector<Triplet> t;
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < m; ++i)
        {
            const Index r = g.cell(i, j);
            if (i + 1 < m)
                t.emplace_back(r, g.u(i + 1, j), ih);
            if (i > 0)
                t.emplace_back(r, g.u(i, j), -ih);
            if (j + 1 < m)
                t.emplace_back(r, g.v(i, j + 1), ih);
            if (j > 0)
                t.emplace_back(r, g.v(i, j), -ih);
        }
    SparseMatrix D(m * m, g.num_velocity());
    D.setFromTriplets(t.begin(), t.end());
    return D;
}

/// Face velocities of the stream function sin^2(pi x) sin^2(pi y); discretely divergence free.
inline Vector stream_velocity(const StaggeredGrid& g)
{
    const Index m = g.m;
    const double h = g.h();
    auto psi = [](double x, double y) {
        const double sx = std::sin(std::numbers::pi * x), sy = std::sin(std::numbers::pi * y);
        return sx * sx * sy * sy;
    };
    Vector vel = Vector::Zero(g.num_velocity());
    for (Index j = 0; j < m; ++j)
        for (Index i = 1; i < m; ++i)
            vel[g.u(i, j)] = (psi(i * h, (j + 1) * h) - psi(i * h, j * h)) / h;
    for (Index j = 1; j < m; ++j)
        for (Index i = 0; i < m; ++i)
            vel[g.v(i, j)] = -(psi((i + 1) * h, j * h) - psi(i * h, j * h)) / h;
    return vel;
}

} // namespace detail

///
/// Semi-discrete Stokes flow E x' - A x = B u with
///   A = [nu Lap, D^T; D, 0],  E = blockdiag(I, 0),
/// single input B = e_in and output C = e_out^T on velocity unknowns, and a
/// divergence-free initial velocity (parameter-independent).
///
inline DaeSystem make_stokes_like(const StokesLikeParams& p)
{
    if (p.m_g < 2)
        throw InputError("Stokes-like grid needs at least 2 cells per side");
    if (!(p.nu > 0.0))
        throw InputError("viscosity must be positive");
    if (!(p.T > 0.0))
        throw InputError("horizon must be positive");
    const StaggeredGrid g{p.m_g};
    const Index nvel = g.num_velocity(), n = g.dimension();

    const SparseMatrix Lap = detail::staggered_laplacian(g);
    const SparseMatrix D   = detail::staggered_divergence(g).topRows(g.num_pressure());

    std::vector<Triplet> t;
    for (Index k = 0; k < Lap.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(Lap, k); it; ++it)
            t.emplace_back(it.row(), it.col(), p.nu * it.value());
    for (Index k = 0; k < D.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(D, k); it; ++it)
        {
            t.emplace_back(nvel + it.row(), it.col(), it.value());
            t.emplace_back(it.col(), nvel + it.row(), it.value());
        }
    SparseMatrix A(n, n);
    A.setFromTriplets(t.begin(), t.end());

    DaeSystem s;
    s.n = n;
    s.T = p.T;
    s.E = SparseMatrix(n, n);
    for (Index i = 0; i < nvel; ++i)
        s.E.insert(i, i) = 1.0;
    s.E.makeCompressed();
    s.A = AffineOperator<SparseMatrix>(A);

    const Index in  = p.input_velocity >= 0 ? p.input_velocity : g.u(p.m_g / 2, p.m_g / 2);
    const Index out = p.output_velocity >= 0 ? p.output_velocity : g.v(p.m_g / 4, (3 * p.m_g) / 4);
    if (in >= nvel || out >= nvel)
        throw InputError("input/output must address a velocity unknown (< " + std::to_string(nvel) + ")");
    SparseMatrix B(n, 1), C(1, n);
    B.insert(in, 0)  = 1.0;
    C.insert(0, out) = 1.0;
    s.control        = B;
    s.output         = C;

    if (p.initial_amplitude != 0.0)
    {
        Vector x0             = Vector::Zero(n);
        x0.head(nvel)         = p.initial_amplitude * detail::stream_velocity(g);
        s.x0                  = AffineOperator<Vector>(x0);
    }
    return s;
}

///
/// Fully linear control problem derived from a system with control matrix B:
/// `base` is the homogenized system (its rhs carries the initial-value terms),
/// `controlled` adds the Ku+1 hat-function control samples as leading
/// parameters, giving Q_f = m (Ku+1) + Q_x rhs terms.
///
struct ControlProblem
{
    DaeSystem base;
    DaeSystem controlled;
    Index Ku = 0;
    Index num_inputs = 0;

    Index num_control_parameters() const { return num_inputs * (Ku + 1); }
};

inline ControlProblem make_control_problem(const DaeSystem& sys, Index Ku)
{
    if (!sys.control)
        throw InputError("system has no control matrix B");
    ControlProblem cp;
    cp.base       = homogenize(sys);
    cp.controlled = with_control(cp.base, Ku);
    cp.Ku         = Ku;
    cp.num_inputs = sys.control->cols();
    return cp;
}

/// Training set of control samples iid uniform in [-bound, bound], remaining parameters in [lo, hi].
inline TrainingSet control_training_set(const ControlProblem& cp, std::size_t count, std::uint64_t seed,
                                        double bound = 1.0)
{
    const Index P = static_cast<Index>(cp.controlled.parameter_dimension());
    Vector lo     = Vector::Zero(P), hi = Vector::Ones(P);
    lo.head(cp.num_control_parameters()).setConstant(-bound);
    hi.head(cp.num_control_parameters()).setConstant(bound);
    TrainingSet ts = uniform_training_set(lo, hi, count, seed);
    ts.generator   = "uniform-control-box";
    return ts;
}

// ---------------------------------------------------------------------------
// Studies
// ---------------------------------------------------------------------------

/// Least-squares slope of log(y) over log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InputError("slope fit needs at least two points of equal count");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

struct ConvergenceRow
{
    Index K = 0;
    double error = 0.0;
    double rel_err = 0.0;
    double estimator = 0.0;
    double rel_est = 0.0;
};

struct ConvergenceTable
{
    std::vector<ConvergenceRow> rows;
    double error_slope = 0.0;
    double estimator_slope = 0.0;
    /// True if errors are measured against an exact reference, false for grid-doubling differences.
    bool exact_reference = false;
};

struct ConvergenceOptions
{
    Index refinement = 2;
    unsigned threads = 1;
    int points_per_cell = 4;
};

///
/// Error and estimator over a list of K. With a reference the error is
/// ||x* - x^K|| / ||x*||; without one it is the grid-doubling difference
/// ||x^{2K} - x^K|| / ||x^{2K}||.
///
inline ConvergenceTable convergence_study(const DaeSystem& sys, const Parameter& mu, const std::vector<Index>& Ks,
                                          const std::optional<StateFunction>& reference,
                                          const ConvergenceOptions& opt = {})
{
    ConvergenceTable table;
    table.exact_reference = reference.has_value();
    table.rows.resize(Ks.size());
    const auto sp = std::make_shared<const DaeSystem>(sys);
    parallel_for(Ks.size(), opt.threads, [&](std::size_t i) {
        const TimeGrid grid(sys.T, Ks[i]);
        const auto sol = solve_detailed(std::make_shared<const DetailedProblem>(sp, mu, grid));
        ConvergenceRow r;
        r.K         = Ks[i];
        r.estimator = estimator_detailed(sol, opt.refinement);
        double scale;
        if (reference)
        {
            r.error = l2_error(sol, *reference, opt.points_per_cell);
            scale   = l2_norm(*reference, grid, opt.points_per_cell);
        }
        else
        {
            const auto fine =
                solve_detailed(std::make_shared<const DetailedProblem>(sp, mu, grid.refined(2)));
            r.error = l2_difference(fine, sol);
            scale   = l2_norm(fine);
        }
        r.rel_err     = scale > 0.0 ? r.error / scale : r.error;
        r.rel_est     = scale > 0.0 ? r.estimator / scale : r.estimator;
        table.rows[i] = r;
    });
    if (Ks.size() >= 2)
    {
        std::vector<double> k, e, d;
        for (const auto& r : table.rows)
        {
            k.push_back(static_cast<double>(r.K));
            e.push_back(r.rel_err);
            d.push_back(r.rel_est);
        }
        table.error_slope     = loglog_slope(k, e);
        table.estimator_slope = loglog_slope(k, d);
    }
    return table;
}

struct GreedyStudyRow
{
    Index K = 0;
    Index Q_f = 0;
    std::vector<GreedyStep> history;
};

/// Greedy decay curves with K_u = K for each K; eps = 0 and N_max = Q_f.
inline std::vector<GreedyStudyRow> greedy_study(const DaeSystem& sys, const std::vector<Index>& Ks,
                                                std::size_t training_size, std::uint64_t seed,
                                                unsigned threads = 1)
{
    std::vector<GreedyStudyRow> out;
    for (Index K : Ks)
    {
        const ControlProblem cp = make_control_problem(sys, K);
        const TrainingSet train = control_training_set(cp, training_size, seed);
        GreedyStudyRow row;
        row.K   = K;
        row.Q_f = static_cast<Index>(cp.controlled.rhs.size());
        GreedyOptions go;
        go.threads  = threads;
        row.history = greedy(cp.controlled, TimeGrid(sys.T, K), train, 0.0, row.Q_f, go).history;
        out.push_back(std::move(row));
    }
    return out;
}

/// Smooth random control sum_j a_j sin(j pi t / T + phi_j) / j^2, per input.
inline std::function<Vector(double)> random_smooth_control(Index inputs, double T, std::uint64_t seed,
                                                           int modes = 6)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2.0 * std::numbers::pi);
    Matrix a(inputs, modes), ph(inputs, modes);
    for (Index i = 0; i < inputs; ++i)
        for (int j = 0; j < modes; ++j)
        {
            a(i, j)  = amp(rng);
            ph(i, j) = phase(rng);
        }
    return [a, ph, T](double t) {
        Vector u = Vector::Zero(a.rows());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j)
            {
                const double k = static_cast<double>(j + 1);
                u[i] += a(i, j) * std::sin(k * std::numbers::pi * t / T + ph(i, j)) / (k * k);
            }
        return u;
    };
}

struct TimeReductionRow
{
    Index Ku = 0;
    double max_rel_err = 0.0;
};

///
/// For random smooth controls, the state driven by the control sampled on a
/// K_u grid (hat interpolation) against the state driven by the control
/// sampled on the full K grid. Reports the max relative L2 error per K_u.
///
inline std::vector<TimeReductionRow> timereduction_study(const DaeSystem& sys, Index K,
                                                         const std::vector<Index>& Kus, std::size_t samples,
                                                         std::uint64_t seed, unsigned threads = 1)
{
    if (!sys.control)
        throw InputError("system has no control matrix B");
    const DaeSystem base = homogenize(sys);
    const TimeGrid grid(sys.T, K);
    const Parameter mu2 = Parameter::Zero(static_cast<Index>(base.parameter_dimension()));
    const auto problem  = std::make_shared<const DetailedProblem>(std::make_shared<const DaeSystem>(base), mu2, grid);
    const Index m       = sys.control->cols();

    auto samples_on = [m](const std::function<Vector(double)>& u, const TimeGrid& g) {
        Vector s(m * g.num_nodes());
        for (Index k = 0; k < g.num_nodes(); ++k)
        {
            const Vector v = u(g.node(k));
            for (Index j = 0; j < m; ++j)
                s[j * g.num_nodes() + k] = v[j];
        }
        return s;
    };

    std::vector<std::vector<double>> rel(Kus.size(), std::vector<double>(samples, 0.0));
    parallel_for(samples, threads, [&](std::size_t s) {
        const auto u   = random_smooth_control(m, sys.T, seed + s);
        const Vector f = assemble_control_rhs(base, problem->rhs_operator(), grid, samples_on(u, grid), K, mu2);
        const Vector x_full = problem->solve(f);
        const double nrm    = l2_norm(*problem, x_full);
        for (std::size_t i = 0; i < Kus.size(); ++i)
        {
            const TimeGrid coarse(sys.T, Kus[i]);
            const Vector fc =
                assemble_control_rhs(base, problem->rhs_operator(), grid, samples_on(u, coarse), Kus[i], mu2);
            const Vector x = problem->solve(fc);
            rel[i][s]      = l2_norm(*problem, Vector(x - x_full)) / nrm;
        }
    });
    std::vector<TimeReductionRow> out;
    for (std::size_t i = 0; i < Kus.size(); ++i)
        out.push_back({Kus[i], *std::max_element(rel[i].begin(), rel[i].end())});
    return out;
}

} // namespace uwdae

#endif // UWDAE_BENCH_HPP
