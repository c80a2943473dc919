// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "uwdae/io/model_io.hpp"
#include "uwdae/uwdae.hpp"

using namespace uwdae;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

struct Criterion
{
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

oracle::Setting setting_of(const DetailedProblem& p)
{
    return {Matrix(p.system().E), Matrix(p.A()), p.kernel().V, p.grid().T(), p.grid().K()};
}

// ---------------------------------------------------------------------------
// Shared Stokes-like greedy run (criteria 5, 6, 10)

struct StokesRun
{
    ControlProblem cp;
    TimeGrid grid{1.0, 75};
    TrainingSet train;
    GreedyResult result;
    Index Q_f = 0;
};

const StokesRun& stokes_run()
{
    static const StokesRun r = [] {
        StokesRun s;
        const StokesLikeParams p;  // m_g = 8
        s.cp    = make_control_problem(make_stokes_like(p), 75);
        s.grid  = TimeGrid(p.T, 75);
        s.train = control_training_set(s.cp, 100, 42);
        s.Q_f   = static_cast<Index>(s.cp.controlled.rhs.size());
        GreedyOptions go;
        go.threads = threads();
        s.result   = greedy(s.cp.controlled, s.grid, s.train, 0.0, s.Q_f, go);
        return s;
    }();
    return r;
}

// ---------------------------------------------------------------------------

Outcome gram_identity()
{
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        std::mt19937_64 rng(20240 + seed);
        const Index n  = 1 + static_cast<Index>(rng() % 5);
        const Index K  = 1 + static_cast<Index>(rng() % 8);
        const Index r  = static_cast<Index>(seed % static_cast<std::uint64_t>(n + 1));
        const Matrix E = oracle::random_sparse_rank(rng, n, r);
        const Matrix A = oracle::random_dense(rng, n, n);
        const double T = 0.5 + static_cast<double>(rng() % 4);
        const TimeGrid grid(T, K);
        const KernelBasis kb = kernel_basis(to_sparse(E));
        const Matrix B       = Matrix(assemble_stiffness(to_sparse(E), to_sparse(A), grid, kb).monolithic());
        const Matrix G       = oracle::trial_gram({E, A, kb.V, T, K});
        if (B.rows() != G.rows())
            return {false, "dimension mismatch at seed " + std::to_string(seed)};
        worst = std::max(worst, (B - G).cwiseAbs().maxCoeff() / G.cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-10, "max relative deviation " + sci(worst) + " over 20 systems (tol 1e-10)"};
}

Outcome error_residual_identity()
{
    const DaeSystem s = make_scalar_relaxation(1.0, 1.0);
    const auto exact  = scalar_relaxation_solution(1.0);
    const std::vector<Index> Ks{32, 64, 128, 256, 512};
    std::vector<double> k, err, est;
    double worst_ratio_dev = 0.0;
    for (Index K : Ks)
    {
        const auto sol     = solve_detailed(s, Parameter(), TimeGrid(1.0, K));
        const auto st      = setting_of(*sol.problem);
        const double scale = oracle::l2_norm_function(exact, 1.0, K);
        const double e     = oracle::l2_error_nodal(st, sol.coeffs, exact) / scale;
        const double d     = estimator_detailed(sol, 2) / scale;
        k.push_back(static_cast<double>(K));
        err.push_back(e);
        est.push_back(d);
        worst_ratio_dev = std::max(worst_ratio_dev, std::abs(d - e) / e);
    }
    const double se = loglog_slope(k, err), sd = loglog_slope(k, est);
    const bool within = worst_ratio_dev <= 0.10;
    const bool slopes = std::abs(se + 1.0) <= 0.1 && std::abs(sd + 1.0) <= 0.1;
    return {within && slopes, "max |est-err|/err " + fmt("%.4f", worst_ratio_dev) + " (tol 0.10), est/err at K=512 " +
                                  fmt("%.4f", est.back() / err.back()) + ", slopes err " + fmt("%.3f", se) +
                                  " est " + fmt("%.3f", sd) + " (target -1 +- 0.1)"};
}

Outcome rlc_convergence()
{
    const RlcParams p;
    const RlcSource src = RlcSource::smooth(p);
    const DaeSystem s   = make_rlc(p, src);
    const oracle::RlcOde ref(p.R, p.L, p.C, p.T, src.voltage);
    const std::function<Vector(double)> reff = [&ref](double t) { return ref(t); };
    std::vector<double> k, err;
    for (Index K : {64, 128, 256, 512, 1024})
    {
        const auto sol = solve_detailed(s, Parameter(), TimeGrid(p.T, K));
        const double e = oracle::l2_error_nodal(setting_of(*sol.problem), sol.coeffs, reff) /
                         oracle::l2_norm_function(reff, p.T, K);
        k.push_back(static_cast<double>(K));
        err.push_back(e);
    }
    const double slope = loglog_slope(k, err);
    return {std::abs(slope + 1.0) <= 0.15,
            "slope " + fmt("%.3f", slope) + " (target -1 +- 0.15), rel err " + sci(err.front()) + " -> " +
                sci(err.back())};
}

Outcome rlc_discontinuous()
{
    const RlcParams p;
    const DaeSystem s = make_rlc(p, RlcSource::discontinuous(p));
    std::vector<double> diffs;
    std::string detail = "grid-doubling differences";
    for (Index K : {128, 256, 512, 1024})
    {
        const auto coarse = solve_detailed(s, Parameter(), TimeGrid(p.T, K));
        const auto fine   = solve_detailed(s, Parameter(), TimeGrid(p.T, 2 * K));
        diffs.push_back(oracle::l2_norm_nodal(setting_of(*fine.problem),
                                              Vector(fine.coeffs - prolong_coefficients(coarse.coeffs, s.n, K,
                                                                                        coarse.kernel(), 2))));
        detail += " " + sci(diffs.back());
    }
    bool ok = true;
    for (std::size_t i = 1; i < diffs.size(); ++i)
        ok = ok && diffs[i] < diffs[i - 1];
    return {ok, detail};
}

Outcome rb_error_identity()
{
    const StokesRun& r   = stokes_run();
    const ReducedModel& m = r.result.model;
    const auto problem   = make_detailed_problem(r.cp.controlled, r.train.parameters.front(), r.grid);
    const auto st        = setting_of(*problem);
    const TrainingSet val = control_training_set(r.cp, 100, 4242);
    const Index Nq        = std::min(r.Q_f, m.size());
    std::vector<Index> Ns{1, 5, 10, Nq};
    std::vector<ReducedModel> models;
    for (Index N : Ns)
        models.push_back(m.truncated(N));
    double worst = 0.0;
    for (const Parameter& mu : val.parameters)
    {
        const Vector x     = problem->solve(assemble_rhs(r.cp.controlled, mu, r.grid, problem->rhs_operator()));
        const double xnorm = oracle::l2_norm_nodal(st, x);
        for (const ReducedModel& rm : models)
        {
            const Vector xN   = reduced_solve(rm, mu);
            const double err  = oracle::l2_norm_nodal(st, Vector(x - lift(rm, xN)));
            const double est  = estimator_online(rm, mu, xN);
            worst             = std::max(worst, std::abs(err - est) / xnorm);
        }
    }
    return {worst <= 1e-6, "max |err - Delta_N| / ||x|| " + sci(worst) + " (tol 1e-6) over 100 parameters, N in {1,5,10," +
                               std::to_string(Nq) + "}, Q_f = " + std::to_string(r.Q_f) + ", basis size " +
                               std::to_string(m.size())};
}

Outcome greedy_exactness()
{
    const StokesRun& r = stokes_run();
    const auto& h      = r.result.history;
    bool monotone      = true;
    for (std::size_t i = 1; i < h.size(); ++i)
        monotone = monotone && h[i].max_error <= h[i - 1].max_error;
    // The basis cannot grow once every training residual vanishes, so the
    // error at N = Q_f equals the last recorded one.
    const double ratio = h.back().max_error / h.front().max_error;
    return {monotone && ratio <= 1e-8, std::string(monotone ? "monotone" : "NOT monotone") + ", final/initial " +
                                           sci(ratio) + " (tol 1e-8) at N = " + std::to_string(h.back().N) +
                                           " (Q_f = " + std::to_string(r.Q_f) + ")"};
}

Outcome control_reduction()
{
    const DaeSystem s = make_stokes_like({});
    const auto rows   = timereduction_study(s, 100, {10, 25, 50, 100}, 10, 7, threads());
    bool monotone     = true;
    std::string detail;
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        if (i > 0)
            monotone = monotone && rows[i].max_rel_err < rows[i - 1].max_rel_err;
        detail += "Ku=" + std::to_string(rows[i].Ku) + ": " + sci(rows[i].max_rel_err) + "  ";
    }
    const bool exact = rows.back().max_rel_err <= 1e-10;
    return {monotone && exact, detail + (monotone ? "(monotone)" : "(NOT monotone)")};
}

Outcome best_approximation()
{
    const DaeSystem s = make_scalar_relaxation(1.0, 1.0);
    const auto exact  = scalar_relaxation_solution(1.0);
    const auto sol    = solve_detailed(s, Parameter(), TimeGrid(1.0, 128));
    const auto st     = setting_of(*sol.problem);
    const Vector proj = oracle::trial_gram(st).ldlt().solve(oracle::project_rhs(st, exact));
    const double e_pg = oracle::l2_error(st, sol.coeffs, exact);
    const double e_pr = oracle::l2_error(st, proj, exact);
    const double rel  = std::abs(e_pg - e_pr) / e_pr;
    return {rel <= 1e-8, "PG error " + sci(e_pg) + ", projection error " + sci(e_pr) + ", relative gap " + sci(rel) +
                             " (tol 1e-8)"};
}

Outcome homogenization()
{
    const DaeSystem s = make_scalar_decay(1.0);
    const DaeSystem h = homogenize(s);
    const ExtensionField xbar(s);
    const std::function<Vector(double)> exact = [](double t) { return Vector::Constant(1, std::exp(-t)); };
    std::vector<double> k, err;
    double worst_ie = 0.0;
    for (Index K : {32, 64, 128, 256})
    {
        const TimeGrid g(1.0, K);
        const auto sol = solve_detailed(h, Parameter(), g);
        const std::function<Vector(double)> shifted = [&](double t) {
            return Vector(exact(t) - xbar(Parameter(), t));
        };
        err.push_back(oracle::l2_error_nodal(setting_of(*sol.problem), sol.coeffs, shifted));
        k.push_back(static_cast<double>(K));
        // Implicit Euler x_k = x_{k-1} / (1 + dt) at the nodes.
        const Matrix X = evaluate_state(sol, g.nodes());
        double x_ie    = 1.0, dev = 0.0;
        for (Index j = 1; j <= K; ++j)
        {
            x_ie /= 1.0 + g.dt();
            dev = std::max(dev, std::abs(X(0, j) + xbar(Parameter(), g.node(j))[0] - x_ie));
        }
        worst_ie = std::max(worst_ie, dev / g.dt());
    }
    const double slope = loglog_slope(k, err);
    const bool ok      = std::abs(slope + 1.0) <= 0.1 && worst_ie <= 1.0;
    return {ok, "slope vs exp(-t) " + fmt("%.3f", slope) + " (target -1 +- 0.1), max nodal |x - x_IE| / dt " +
                    fmt("%.3f", worst_ie) + " (bound 1)"};
}

Outcome persistence()
{
    const StokesRun& r   = stokes_run();
    const ReducedModel& m = r.result.model;
    const fs::path dir   = fs::temp_directory_path() / ("uwdae_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    io::save_model(dir, m);
    const ReducedModel back = io::load_model(dir);
    fs::remove_all(dir);
    double worst_x = 0.0, worst_d = 0.0;
    for (const Parameter& mu : control_training_set(r.cp, 20, 777).parameters)
    {
        const Vector a = reduced_solve(m, mu), b = reduced_solve(back, mu);
        worst_x        = std::max(worst_x, (a - b).cwiseAbs().maxCoeff());
        worst_d        = std::max(worst_d, std::abs(estimator_online(m, mu, a) - estimator_online(back, mu, b)));
    }
    return {worst_x <= 1e-12 && worst_d <= 1e-12,
            "max |dx_N| " + sci(worst_x) + ", max |dDelta_N| " + sci(worst_d) + " (tol 1e-12) on 20 parameters"};
}

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "stiffness equals trial Gram matrix", 10, gram_identity},
        {2, "estimator tracks the error (scalar ODE)", 30, error_residual_identity},
        {3, "RLC first-order convergence", 60, rlc_convergence},
        {4, "RLC discontinuous source", 60, rlc_discontinuous},
        {5, "reduced error identity (Stokes-like)", 300, rb_error_identity},
        {6, "greedy exactness drop-off", 600, greedy_exactness},
        {7, "control-grid reduction", 300, control_reduction},
        {8, "best approximation", 5, best_approximation},
        {9, "homogenization round trip", 5, homogenization},
        {10, "persistence determinism", 30, persistence},
    };
    int failures = 0;
    for (const auto& c : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass    = o.pass && in_time;
        failures += pass ? 0 : 1;
        std::printf("%s [%d] %s: %s; %.2f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", EXCEEDED");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
