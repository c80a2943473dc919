#include <array>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "uwdae/bench.hpp"

using namespace uwdae;

TEST(Rlc, MatricesMatchTheCircuitEquations)
{
    RlcParams p;
    p.R = 2.0;
    p.L = 0.5;
    p.C = 4.0;
    const DaeSystem s = make_rlc(p, RlcSource::smooth(p));
    Matrix E(4, 4), A(4, 4);
    E << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0;
    A << 0, 0, 2, 0, 0.25, 0, 0, 0, 2, 0, 0, -1, 0, 1, 1, 1;
    EXPECT_EQ(Matrix(s.E), E);
    EXPECT_EQ(Matrix(s.A_at(Parameter())), A);
    const double t = 0.3;
    Vector f       = Vector::Zero(4);
    f[3]           = -std::sin(4.0 * std::numbers::pi / p.T * t);
    EXPECT_LT((s.f_at(Parameter(), t) - f).norm(), 1e-15);
    EXPECT_TRUE(s.x0.empty());
    RlcParams bad;
    bad.R = 0.0;
    EXPECT_THROW(make_rlc(bad, RlcSource::smooth(bad)), InputError);
}

TEST(Rlc, DiscontinuousSourceIsASquareWave)
{
    const RlcParams p;
    const RlcSource s = RlcSource::discontinuous(p);
    EXPECT_FALSE(s.sinusoid.has_value());
    const double w = 4.0 * std::numbers::pi / p.T;
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 3.3})
        EXPECT_EQ(s.voltage(t), std::cos(w * t) > 0 ? 1.0 : -1.0);
    EXPECT_THROW(RlcAnalytic(p, s), UnsupportedSource);
}

// The closed form satisfies E x' = A x + f pointwise, starts at rest and
// obeys the Kirchhoff voltage law, for underdamped, critical and overdamped circuits.
TEST(Rlc, AnalyticSolutionSatisfiesTheDae)
{
    for (double R : {0.5, 2.0, 5.0})
    {
        SCOPED_TRACE(R);
        RlcParams p;
        p.R               = R;  // R^2 = 4 L / C at R = 2
        const RlcSource s = RlcSource::sine(1.3, 2.1);
        const DaeSystem sys = make_rlc(p, s);
        const RlcAnalytic x(p, s);
        const Matrix E = Matrix(sys.E), A = Matrix(sys.A_at(Parameter()));
        EXPECT_LT(x(0.0).norm(), 1e-12);
        for (double t : {0.2, 1.0, 3.7, 9.0})
        {
            const Vector res = E * x.derivative(t) - A * x(t) - sys.f_at(Parameter(), t);
            EXPECT_LT(res.norm(), 1e-8);
            const Vector v = x(t);
            EXPECT_NEAR(v[1] + v[2] + v[3], s.voltage(t), 1e-12);
            EXPECT_NEAR(v[3], R * v[0], 1e-12);
        }
    }
}

TEST(Stokes, StructureAndDimensions)
{
    const StokesLikeParams p;
    const DaeSystem s = make_stokes_like(p);
    const StaggeredGrid g{8};
    EXPECT_EQ(s.n, 175);
    EXPECT_EQ(g.num_velocity(), 112);
    EXPECT_EQ(g.num_pressure(), 63);
    const Matrix A = Matrix(s.A_at(Parameter()));
    EXPECT_LT((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(A.bottomRightCorner(63, 63).cwiseAbs().maxCoeff(), 0.0);
    // Velocity block is negative definite.
    Eigen::SelfAdjointEigenSolver<Matrix> es(A.topLeftCorner(112, 112));
    EXPECT_LT(es.eigenvalues().maxCoeff(), 0.0);
    // Divergence has full row rank after pinning one pressure.
    Eigen::FullPivLU<Matrix> lu(A.bottomLeftCorner(63, 112));
    EXPECT_EQ(lu.rank(), 63);
    ASSERT_TRUE(s.control && s.output);
    EXPECT_EQ(s.control->coeff(g.u(4, 4), 0), 1.0);
    EXPECT_EQ(s.output->coeff(0, g.v(2, 6)), 1.0);
    EXPECT_THROW(make_stokes_like({1}), InputError);
}

TEST(Stokes, InitialVelocityIsDiscretelyDivergenceFree)
{
    for (Index m : {4, 8, 12})
    {
        StokesLikeParams p;
        p.m_g              = m;
        const DaeSystem s  = make_stokes_like(p);
        const StaggeredGrid g{m};
        const Vector x0    = s.x0_at(Parameter());
        const SparseMatrix D = detail::staggered_divergence(g);
        EXPECT_LT((D * x0.head(g.num_velocity())).cwiseAbs().maxCoeff(), 1e-12 * x0.cwiseAbs().maxCoeff());
        EXPECT_GT(x0.norm(), 0.0);
        EXPECT_EQ(x0.tail(g.num_pressure()).cwiseAbs().maxCoeff(), 0.0);
    }
    StokesLikeParams zero;
    zero.initial_amplitude = 0.0;
    EXPECT_TRUE(make_stokes_like(zero).x0.empty());
}

TEST(Stokes, ControlProblemShapes)
{
    StokesLikeParams p;
    p.m_g                   = 4;
    const ControlProblem cp = make_control_problem(make_stokes_like(p), 6);
    EXPECT_EQ(cp.num_control_parameters(), 7);
    EXPECT_EQ(cp.controlled.rhs.size(), 8u);
    EXPECT_EQ(cp.controlled.parameter_dimension(), 7u);
    EXPECT_TRUE(cp.controlled.x0.empty());
    const TrainingSet ts = control_training_set(cp, 30, 5, 2.0);
    for (const auto& mu : ts.parameters)
    {
        ASSERT_EQ(mu.size(), 7);
        EXPECT_LE(mu.cwiseAbs().maxCoeff(), 2.0);
    }
    EXPECT_THROW(make_control_problem(make_scalar_relaxation(), 4), InputError);
}

TEST(Studies, LoglogSlope)
{
    std::vector<double> x{1, 2, 4, 8}, y{3, 1.5, 0.75, 0.375};
    EXPECT_NEAR(loglog_slope(x, y), -1.0, 1e-14);
    EXPECT_THROW(loglog_slope({1.0}, {1.0}), InputError);
}

TEST(Studies, ConvergenceWithExactReference)
{
    const ConvergenceTable t =
        convergence_study(make_scalar_relaxation(), Parameter(), {16, 32, 64}, scalar_relaxation_solution());
    EXPECT_TRUE(t.exact_reference);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_NEAR(t.error_slope, -1.0, 0.05);
    EXPECT_NEAR(t.estimator_slope, -1.0, 0.05);
    for (const auto& r : t.rows)
        EXPECT_LE(r.estimator, r.error * (1.0 + 1e-9));
}

TEST(Studies, ConvergenceWithoutReferenceUsesGridDoubling)
{
    const RlcParams p;
    const ConvergenceTable t =
        convergence_study(make_rlc(p, RlcSource::smooth(p)), Parameter(), {64, 128}, std::nullopt);
    EXPECT_FALSE(t.exact_reference);
    EXPECT_LT(t.rows[1].rel_err, t.rows[0].rel_err);
    // Without a reference, the error column is exactly the estimator with refinement 2.
    for (const auto& r : t.rows)
        EXPECT_NEAR(r.error, r.estimator, 1e-9 * r.error);
}

TEST(Studies, TimeReductionIsExactAtFullResolution)
{
    StokesLikeParams p;
    p.m_g      = 4;
    const auto rows = timereduction_study(make_stokes_like(p), 24, {3, 6, 12, 24}, 4, 1);
    ASSERT_EQ(rows.size(), 4u);
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_LT(rows[i].max_rel_err, rows[i - 1].max_rel_err);
    EXPECT_LT(rows.back().max_rel_err, 1e-12);
    EXPECT_THROW(timereduction_study(make_scalar_relaxation(), 8, {4}, 1, 1), InputError);
}

TEST(Studies, RandomSmoothControlIsSeeded)
{
    const auto a = random_smooth_control(2, 1.0, 7), b = random_smooth_control(2, 1.0, 7);
    const auto c = random_smooth_control(2, 1.0, 8);
    EXPECT_EQ(a(0.3), b(0.3));
    EXPECT_NE(a(0.3), c(0.3));
    EXPECT_EQ(a(0.3).size(), 2);
}

// The scheme enforces the incompressibility constraint weakly: (D v, sigma_k) = 0
// for every hat function, while D v itself need not vanish pointwise.
TEST(Stokes, VelocityIsWeaklyDivergenceFree)
{
    StokesLikeParams p;
    p.m_g                = 4;
    const DaeSystem sys  = make_stokes_like(p);
    const ControlProblem cp = make_control_problem(sys, 10);
    const TimeGrid g(1.0, 20);
    Parameter mu = Parameter::LinSpaced(11, -1.0, 1.0);
    const auto sol         = solve_detailed(cp.controlled, mu, g);
    const StaggeredGrid sg{4};
    const Matrix D         = Matrix(detail::staggered_divergence(sg).topRows(sg.num_pressure()));
    const std::array<double, 2> gx{0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
    Matrix weak = Matrix::Zero(sg.num_pressure(), g.num_nodes());
    double l2sq = 0.0;
    for (Index c = 0; c < g.K(); ++c)
        for (double s : gx)
        {
            const double t  = g.node(c) + s * g.dt();
            const Vector dv = D * evaluate_state(sol, {t}).col(0).head(sg.num_velocity());
            weak.col(c) += 0.5 * g.dt() * (1.0 - s) * dv;
            weak.col(c + 1) += 0.5 * g.dt() * s * dv;
            l2sq += 0.5 * g.dt() * dv.squaredNorm();
        }
    ASSERT_GT(l2sq, 0.0);
    EXPECT_LE(weak.norm(), 1e-6 * std::sqrt(l2sq));
}
