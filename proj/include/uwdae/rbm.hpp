#ifndef UWDAE_RBM_HPP
#define UWDAE_RBM_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "uwdae/detailed.hpp"
#include "uwdae/errors.hpp"
#include "uwdae/parallel.hpp"
#include "uwdae/system.hpp"

namespace uwdae
{

struct TrainingSet
{
    std::vector<Parameter> parameters;
    std::uint64_t seed = 0;
    std::string generator;
};

/// `count` iid uniform samples from the box [lower, upper]; reproducible from (box, count, seed).
inline TrainingSet uniform_training_set(const Vector& lower, const Vector& upper, std::size_t count,
                                        std::uint64_t seed)
{
    if (lower.size() != upper.size())
        throw DimensionMismatch("training box bounds differ in dimension");
    if ((lower.array() > upper.array()).any())
        throw InputError("training box has lower > upper");
    TrainingSet ts;
    ts.seed      = seed;
    ts.generator = "uniform-box";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ts.parameters.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        Parameter mu(lower.size());
        for (Index j = 0; j < mu.size(); ++j)
            mu[j] = lower[j] + unit(rng) * (upper[j] - lower[j]);
        ts.parameters.push_back(std::move(mu));
    }
    return ts;
}

///
/// Reduced model of a system with parameter-independent A.
///
/// The basis is stored through its test coefficients eta_i (columns of `eta`,
/// B-orthonormal); the trial basis is zeta_i = B* eta_i, so `eta` doubles as
/// the trial coefficient matrix in the xi basis.
///
/// `residual_gram` is the Gram matrix, in the Y^N inner product, of the Riesz
/// representers of the rhs terms after removing their Y_N components. Together
/// with `rhs_offline` and `reduced_stiffness` it determines the full
/// (Q_f + N) estimator Gram (see estimator_gram()), but evaluates the
/// residual norm without the cancellation of the expanded quadratic form.
///
struct ReducedModel
{
    Matrix eta;                 // N_det x N
    Matrix reduced_stiffness;   // N x N, [B_N]_{j,i} = b(zeta_i, eta_j)
    Matrix rhs_offline;         // Q_f x N, (f_q, eta_j)
    Matrix residual_gram;       // Q_f x Q_f
    std::vector<ThetaExpression> rhs_thetas;
    std::vector<Parameter> snapshots;
    TimeGrid grid{1.0, 1};
    KernelBasis kernel;
    Index n = 0;
    std::size_t parameter_dim = 0;
    std::uint64_t seed = 0;

    Index size() const { return eta.cols(); }
    Index num_rhs_terms() const { return static_cast<Index>(rhs_thetas.size()); }
    Index detailed_dimension() const { return eta.rows(); }

    Vector rhs_coefficients(const Parameter& mu) const
    {
        Vector th(num_rhs_terms());
        for (Index q = 0; q < th.size(); ++q)
            th[q] = rhs_thetas[static_cast<std::size_t>(q)](mu);
        return th;
    }

    /// f_N(mu) in O(Q_f N).
    Vector reduced_rhs(const Parameter& mu) const { return rhs_offline.transpose() * rhs_coefficients(mu); }

    /// Full Gram of the residual pieces [rhs representers, eta_1..eta_N] in the Y^N inner product.
    Matrix estimator_gram() const
    {
        const Index Q = num_rhs_terms(), N = size();
        Matrix G(Q + N, Q + N);
        const Matrix BNinv_C = reduced_stiffness.ldlt().solve(rhs_offline.transpose());
        G.topLeftCorner(Q, Q)     = residual_gram + rhs_offline * BNinv_C;
        G.topRightCorner(Q, N)    = rhs_offline;
        G.bottomLeftCorner(N, Q)  = rhs_offline.transpose();
        G.bottomRightCorner(N, N) = reduced_stiffness;
        return G;
    }

    /// Nested sub-model spanned by the first N basis functions.
    ReducedModel truncated(Index N) const
    {
        if (N < 1 || N > size())
            throw InputError("cannot truncate a model of size " + std::to_string(size()) + " to " +
                             std::to_string(N));
        ReducedModel m = *this;
        m.eta               = eta.leftCols(N);
        m.reduced_stiffness = reduced_stiffness.topLeftCorner(N, N);
        m.rhs_offline       = rhs_offline.leftCols(N);
        const Matrix tail   = rhs_offline.rightCols(size() - N);
        m.residual_gram     = residual_gram + tail * tail.transpose();
        m.snapshots.resize(static_cast<std::size_t>(N));
        return m;
    }
};

/// Solves B_N x = f_N(mu).
inline Vector reduced_solve(const ReducedModel& model, const Parameter& mu)
{
    const Vector f = model.reduced_rhs(mu);
    Eigen::LLT<Matrix> llt(model.reduced_stiffness);
    if (llt.info() != Eigen::Success)
        throw SingularReducedSystem("reduced stiffness matrix is not positive definite (corrupt model?)");
    Vector x = llt.solve(f);
    if (!x.allFinite())
        throw SingularReducedSystem("reduced solve produced non-finite values");
    return x;
}

///
/// Delta_N(mu) = dual norm of the residual of x_N, which equals the error
/// ||x^N_mu - x_N(mu)||_{L2}. Cost O(Q_f^2 + Q_f N + N^2), independent of N_det.
///
inline double estimator_online(const ReducedModel& model, const Parameter& mu, const Vector& xN)
{
    const Vector th = model.rhs_coefficients(mu);
    const Vector g  = model.rhs_offline.transpose() * th - xN;
    const double sq = th.dot(model.residual_gram * th) + g.dot(model.reduced_stiffness * g);
    return std::sqrt(std::max(0.0, sq));
}

/// Detailed trial coefficients of x_N = sum_i x_i zeta_i.
inline Vector lift(const ReducedModel& model, const Vector& xN)
{
    if (xN.size() != model.size())
        throw DimensionMismatch("reduced vector has length " + std::to_string(xN.size()) + ", expected " +
                                std::to_string(model.size()));
    return model.eta * xN;
}

struct GreedyStep
{
    Index N = 0;
    std::size_t argmax = 0;  // index into the training set
    double max_error = 0.0;
};

struct GreedyOptions
{
    unsigned threads = 1;
    /// Candidates whose orthogonalized Y-norm falls below this fraction of the original are rejected.
    double reject_tol = 1e-10;
};

struct GreedyResult
{
    ReducedModel model;
    std::vector<GreedyStep> history;
};

namespace detail
{

// Indices sorted by value descending, ties by lowest index.
inline std::vector<std::size_t> descending_order(const std::vector<double>& v)
{
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    return idx;
}

} // namespace detail

///
/// Weak greedy construction of a certified reduced basis.
///
/// mu^(1) maximizes ||f^N(mu)|| over the training set; afterwards the training
/// parameter with the largest Delta_N is added until max Delta_N <= eps or
/// N = n_max. history[k] holds (N, argmax, max training error) for N = k + 1.
///
inline GreedyResult greedy(const DaeSystem& sys, const TimeGrid& grid, const TrainingSet& train, double eps,
                           Index n_max, const GreedyOptions& opt = {})
{
    if (!sys.A.parameter_independent())
        throw UnsupportedSystem("the reduced basis pipeline requires a parameter-independent A");
    if (train.parameters.empty())
        throw InputError("training set is empty");
    if (n_max < 1)
        throw InputError("N_max must be at least 1");
    if (sys.rhs.empty())
        throw DegenerateTraining("system has no right-hand side terms; every snapshot is zero");

    const auto problem = std::make_shared<const DetailedProblem>(std::make_shared<const DaeSystem>(sys),
                                                                 train.parameters.front(), grid);
    const SparseMatrix& B = problem->stiffness();
    const Matrix Fq       = assemble_rhs_terms(sys, grid, problem->rhs_operator());
    const Index Q         = Fq.cols();
    const std::size_t M   = train.parameters.size();

    Matrix Theta(Q, static_cast<Index>(M));
    for (std::size_t i = 0; i < M; ++i)
        Theta.col(static_cast<Index>(i)) = sys.rhs.coefficients(train.parameters[i]);

    Matrix Rperp  = problem->solve(Fq);
    Matrix BRperp = B * Rperp;
    Matrix eta(problem->dimension(), 0), Beta(problem->dimension(), 0);

    auto b_norm = [&B](const Vector& v) { return std::sqrt(std::max(0.0, v.dot(B * v))); };

    auto try_add = [&](std::size_t i) -> bool {
        Vector s          = problem->solve(Vector(Fq * Theta.col(static_cast<Index>(i))));
        const double orig = b_norm(s);
        if (orig == 0.0)
            return false;
        for (int pass = 0; pass < 2; ++pass)
            for (Index j = 0; j < eta.cols(); ++j)
                s -= Beta.col(j).dot(s) * eta.col(j);
        const double nrm = b_norm(s);
        if (nrm < opt.reject_tol * orig)
            return false;
        s /= nrm;
        const Vector Bs = B * s;
        eta.conservativeResize(Eigen::NoChange, eta.cols() + 1);
        Beta.conservativeResize(Eigen::NoChange, Beta.cols() + 1);
        eta.col(eta.cols() - 1)   = s;
        Beta.col(Beta.cols() - 1) = Bs;
        for (int pass = 0; pass < 2; ++pass)
        {
            const Eigen::RowVectorXd c = Bs.transpose() * Rperp;
            Rperp -= s * c;
            BRperp -= Bs * c;
        }
        return true;
    };

    GreedyResult result;
    std::vector<Parameter> chosen;

    // Initial parameter: largest ||f^N(mu)||.
    std::vector<double> fnorm(M);
    parallel_for(M, opt.threads, [&](std::size_t i) { fnorm[i] = (Fq * Theta.col(static_cast<Index>(i))).norm(); });
    if (*std::max_element(fnorm.begin(), fnorm.end()) == 0.0)
        throw DegenerateTraining("all training right-hand sides vanish; the system is trivially exact");
    for (std::size_t i : detail::descending_order(fnorm))
        if (try_add(i))
        {
            chosen.push_back(train.parameters[i]);
            break;
        }

    std::vector<double> err(M);
    Matrix G;
    while (true)
    {
        G = Rperp.transpose() * BRperp;
        G               = 0.5 * (G + G.transpose()).eval();
        parallel_for(M, opt.threads, [&](std::size_t i) {
            const auto th = Theta.col(static_cast<Index>(i));
            err[i]        = std::sqrt(std::max(0.0, th.dot(G * th)));
        });
        const auto order = detail::descending_order(err);
        result.history.push_back({eta.cols(), order.front(), err[order.front()]});
        if (eta.cols() >= n_max || err[order.front()] <= eps)
            break;
        bool added = false;
        for (std::size_t i : order)
        {
            if (err[i] <= eps)
                break;
            if (try_add(i))
            {
                chosen.push_back(train.parameters[i]);
                added = true;
                break;
            }
        }
        if (!added)
            break;
    }

    ReducedModel& m     = result.model;
    m.eta               = eta;
    m.reduced_stiffness = eta.transpose() * Beta;
    m.rhs_offline       = Fq.transpose() * eta;
    m.residual_gram     = G;
    for (const auto& t : sys.rhs.terms())
        m.rhs_thetas.push_back(t.theta);
    m.snapshots     = std::move(chosen);
    m.grid          = grid;
    m.kernel        = problem->kernel();
    m.n             = sys.n;
    m.parameter_dim = sys.parameter_dimension();
    m.seed          = train.seed;
    return result;
}

} // namespace uwdae

#endif // UWDAE_RBM_HPP
