// uwdae: command-line front end for the ultraweak DAE solver and reduced basis tools.
//
// Exit codes: 0 success, 2 invalid input, 3 numerical failure, 1 anything else.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uwdae/io/csv.hpp"
#include "uwdae/io/manifest.hpp"
#include "uwdae/io/model_io.hpp"
#include "uwdae/io/mtx.hpp"
#include "uwdae/uwdae.hpp"

namespace fs = std::filesystem;
using namespace uwdae;
using io::json;

namespace
{

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level()
{
    const char* env = std::getenv("UWDAE_LOG");
    const std::string v = env ? env : "error";
    if (v == "debug")
        return LogLevel::debug;
    if (v == "info")
        return LogLevel::info;
    return LogLevel::error;
}

void log(LogLevel lvl, const std::string& msg)
{
    static const LogLevel current = log_level();
    if (lvl <= current)
        std::cerr << "[uwdae] " << msg << '\n';
}

// Name of the stage currently running; reported on failure.
std::string g_stage = "startup";

void stage(std::string name)
{
    log(LogLevel::info, "stage: " + name);
    g_stage = std::move(name);
}

struct Timer
{
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (item.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::size_t used = 0;
        double v         = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch (const std::exception&)
        {
            throw InputError("not a number in list: '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw InputError("not a number in list: '" + item + "'");
        out.push_back(v);
    }
    return out;
}

Parameter parse_mu(const std::string& s)
{
    const auto v = parse_list(s);
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<Index> parse_index_list(const std::string& s)
{
    std::vector<Index> out;
    for (double v : parse_list(s))
    {
        if (v < 1 || v != std::floor(v))
            throw InputError("expected positive integers, got " + std::to_string(v));
        out.push_back(static_cast<Index>(v));
    }
    return out;
}

void ensure_valid(const DaeSystem& sys)
{
    const auto diags = validate_system(sys);
    if (diags.empty())
        return;
    std::string msg = "system validation failed:";
    for (const auto& d : diags)
        msg += "\n  - " + d.message;
    throw InputError(msg);
}

void write_summary(const fs::path& out, const json& summary)
{
    fs::create_directories(out);
    io::write_json(out / "summary.json", summary);
}

Matrix trajectory_table(const std::vector<double>& times, const Matrix& values)
{
    Matrix table(static_cast<Index>(times.size()), values.rows() + 1);
    for (std::size_t j = 0; j < times.size(); ++j)
    {
        table(static_cast<Index>(j), 0)                       = times[j];
        table.row(static_cast<Index>(j)).tail(values.rows()) = values.col(static_cast<Index>(j)).transpose();
    }
    return table;
}

/// Samples of a control CSV (t,u_1..u_m) at the nodes of `grid`, component-major.
Vector control_samples_from_csv(const fs::path& path, Index m, const TimeGrid& grid)
{
    const io::CsvTable t = io::read_csv(path);
    if (t.data.cols() != m + 1)
        throw DimensionMismatch(path.string() + ": expected columns t,u_1..u_" + std::to_string(m));
    std::vector<double> times(static_cast<std::size_t>(t.data.rows()));
    for (Index i = 0; i < t.data.rows(); ++i)
        times[static_cast<std::size_t>(i)] = t.data(i, 0);
    const TimeFunction u = TimeFunction::interpolate(times, t.data.rightCols(m).transpose());
    Vector s(m * grid.num_nodes());
    for (Index k = 0; k < grid.num_nodes(); ++k)
    {
        const Vector v = u(grid.node(k));
        for (Index j = 0; j < m; ++j)
            s[j * grid.num_nodes() + k] = v[j];
    }
    return s;
}

/// The system actually discretized: homogenized, optionally with control samples as leading parameters.
struct Target
{
    DaeSystem system;
    DaeSystem original;
    Index control_parameters = 0;

    /// Parameter of the original system contained in a target parameter.
    Parameter original_mu(const Parameter& mu) const
    {
        return mu.size() >= control_parameters ? Parameter(mu.tail(mu.size() - control_parameters)) : mu;
    }
};

Target make_target(const DaeSystem& sys, std::optional<Index> Ku)
{
    Target t;
    t.original = sys;
    if (Ku)
    {
        if (!sys.control)
            throw InputError("--Ku given but the manifest has no control matrix B");
        const ControlProblem cp = make_control_problem(sys, *Ku);
        t.system                = cp.controlled;
        t.control_parameters    = cp.num_control_parameters();
    }
    else
        t.system = sys.x0.empty() ? sys : homogenize(sys);
    return t;
}

// ---------------------------------------------------------------------------

struct Options
{
    std::string manifest;
    std::string model;
    std::string mu;
    std::string controls;
    std::string Ks = "32,64,128,256";
    std::string Kus = "10,25,50,100";
    std::string bench;
    std::optional<Index> K;
    std::optional<Index> Ku;
    double eps = 0.0;
    std::optional<Index> nmax;
    std::uint64_t seed = 42;
    Index refine = 2;
    std::string out = "uwdae_out";
    unsigned threads = 1;
    std::optional<std::size_t> train;
    std::size_t samples = 20;
    bool export_mtx = false;
};

Index grid_K(const Options& o, const io::Manifest& m)
{
    if (o.K)
        return *o.K;
    if (m.K)
        return *m.K;
    throw InputError("no time grid: pass --K or set grid.K in the manifest");
}

int cmd_solve(const Options& o)
{
    Timer timer;
    stage("load manifest");
    const io::Manifest m = io::load_manifest(o.manifest);
    stage("validate system");
    ensure_valid(m.system);
    const Index K = grid_K(o, m);
    const TimeGrid grid(m.system.T, K);
    std::optional<Index> Ku = o.Ku;
    if (!o.controls.empty() && !Ku)
        Ku = K;
    const Target target = make_target(m.system, Ku);

    Parameter mu = parse_mu(o.mu);
    if (!o.controls.empty())
    {
        const Vector u = control_samples_from_csv(o.controls, m.system.control->cols(), TimeGrid(grid.T(), *Ku));
        Parameter full(u.size() + mu.size());
        full << u, mu;
        mu = full;
    }
    log(LogLevel::debug, "parameter dimension " + std::to_string(mu.size()));

    stage("assemble and factorize");
    const auto problem = make_detailed_problem(target.system, mu, grid);
    stage("solve");
    const DetailedSolution sol = solve_detailed(problem);
    const Vector f             = problem->rhs();
    const double fn            = f.norm();
    const double residual =
        fn > 0.0 ? (problem->stiffness() * sol.coeffs - f).norm() / fn : (problem->stiffness() * sol.coeffs).norm();
    stage("estimate error");
    const double est  = estimator_detailed(sol, o.refine);
    const double xnrm = l2_norm(sol);

    stage("write output");
    fs::create_directories(o.out);
    Trajectory tr = midpoint_trajectory(sol);
    if (!m.system.x0.empty())
    {
        const ExtensionField ext(m.system);
        const Parameter mu0 = target.original_mu(mu);
        for (std::size_t j = 0; j < tr.times.size(); ++j)
            tr.values.col(static_cast<Index>(j)) += ext(mu0, tr.times[j]);
    }
    io::write_csv(fs::path(o.out) / "trajectory.csv", io::numbered_header("t", "x_", m.system.n),
                  trajectory_table(tr.times, tr.values));
    if (m.system.output)
        io::write_csv(fs::path(o.out) / "output.csv", io::numbered_header("t", "y_", m.system.output->rows()),
                      trajectory_table(tr.times, Matrix(*m.system.output * tr.values)));
    if (o.export_mtx)
    {
        io::write_mtx(fs::path(o.out) / "B.mtx", problem->stiffness());
        io::write_mtx(fs::path(o.out) / "f.mtx", f);
    }
    json summary;
    summary["command"] = "solve";
    summary["dims"]    = {{"n", m.system.n}, {"K", K}, {"d", problem->kernel().d}, {"N_det", problem->dimension()},
                          {"parameters", mu.size()}};
    summary["residual"]           = residual;
    summary["estimator"]          = est;
    summary["relative_estimator"] = xnrm > 0.0 ? est / xnrm : 0.0;
    summary["state_norm"]         = xnrm;
    summary["refinement"]         = o.refine;
    summary["wall_ms"]            = timer.ms();
    write_summary(o.out, summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

std::optional<StateFunction> reference_from_manifest(const io::Manifest& m)
{
    if (!m.document.contains("reference"))
        return std::nullopt;
    const json& r          = m.document.at("reference");
    const std::string kind = r.at("kind").get<std::string>();
    if (kind == "rlc")
    {
        RlcParams p{r.value("R", 1.0), r.value("L", 1.0), r.value("C", 1.0), m.system.T};
        const RlcAnalytic an(p, RlcSource::sine(r.value("amplitude", 1.0), r.at("omega").get<double>()));
        return StateFunction(an);
    }
    if (kind == "scalar_relaxation")
        return scalar_relaxation_solution(r.value("lambda", 1.0));
    throw InputError("unknown reference kind '" + kind + "'");
}

int cmd_convergence(const Options& o)
{
    Timer timer;
    stage("load manifest");
    const io::Manifest m = io::load_manifest(o.manifest);
    stage("validate system");
    ensure_valid(m.system);
    const auto Ks        = parse_index_list(o.Ks);
    const Target target  = make_target(m.system, std::nullopt);
    const Parameter mu   = parse_mu(o.mu);
    const auto reference = reference_from_manifest(m);
    if (reference && !m.system.x0.empty())
        throw InputError("an exact reference requires a manifest with zero initial value");
    stage("convergence study");
    ConvergenceOptions co;
    co.refinement = o.refine;
    co.threads    = o.threads;
    const ConvergenceTable t = convergence_study(target.system, mu, Ks, reference, co);
    stage("write output");
    fs::create_directories(o.out);
    Matrix table(static_cast<Index>(t.rows.size()), 3);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        table.row(static_cast<Index>(i)) << static_cast<double>(t.rows[i].K), t.rows[i].rel_err, t.rows[i].rel_est;
    io::write_csv(fs::path(o.out) / "convergence.csv", {"K", "rel_err", "rel_est"}, table);
    json summary;
    summary["command"]         = "convergence";
    summary["dims"]            = {{"n", m.system.n}, {"Ks", Ks}};
    summary["residual"]        = nullptr;
    summary["estimator"]       = t.rows.empty() ? 0.0 : t.rows.back().rel_est;
    summary["error_slope"]     = t.error_slope;
    summary["estimator_slope"] = t.estimator_slope;
    summary["exact_reference"] = t.exact_reference;
    summary["wall_ms"]         = timer.ms();
    write_summary(o.out, summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_greedy(const Options& o)
{
    Timer timer;
    stage("load manifest");
    const io::Manifest m = io::load_manifest(o.manifest);
    stage("validate system");
    ensure_valid(m.system);
    const Index K            = grid_K(o, m);
    std::optional<Index> Ku  = o.Ku ? o.Ku : m.Ku;
    const Target target      = make_target(m.system, Ku);
    const std::size_t count  = o.train.value_or(m.training_size.value_or(100));
    const std::uint64_t seed = o.seed;

    stage("training set");
    TrainingSet train;
    const Index P = static_cast<Index>(target.system.parameter_dimension());
    if (target.control_parameters > 0)
    {
        Vector lo = Vector::Zero(P), hi = Vector::Ones(P);
        lo.head(target.control_parameters).setConstant(-1.0);
        hi.head(target.control_parameters).setConstant(1.0);
        const Index rest = P - target.control_parameters;
        if (m.lower && m.upper && rest > 0)
        {
            if (m.lower->size() != rest || m.upper->size() != rest)
                throw DimensionMismatch("parameter box must cover the " + std::to_string(rest) +
                                        " non-control parameters");
            lo.tail(rest) = *m.lower;
            hi.tail(rest) = *m.upper;
        }
        train           = uniform_training_set(lo, hi, count, seed);
        train.generator = "uniform-control-box";
    }
    else
    {
        if (!m.lower || !m.upper)
            throw InputError("greedy needs parameters.lower/upper in the manifest (or a control grid via --Ku)");
        if (m.lower->size() != P)
            throw DimensionMismatch("parameter box has dimension " + std::to_string(m.lower->size()) +
                                    ", system needs " + std::to_string(P));
        train = uniform_training_set(*m.lower, *m.upper, count, seed);
    }

    stage("greedy");
    const Index Qf   = static_cast<Index>(target.system.rhs.size());
    GreedyOptions go;
    go.threads            = o.threads;
    const GreedyResult gr = greedy(target.system, TimeGrid(m.system.T, K), train, o.eps, o.nmax.value_or(Qf), go);

    stage("write output");
    const fs::path out(o.out);
    fs::create_directories(out);
    io::save_model(out / "model", gr.model);
    Matrix hist(static_cast<Index>(gr.history.size()), 2);
    for (std::size_t i = 0; i < gr.history.size(); ++i)
        hist.row(static_cast<Index>(i)) << static_cast<double>(gr.history[i].N), gr.history[i].max_error;
    io::write_csv(out / "greedy_history.csv", {"N", "max_train_err"}, hist);
    json summary;
    summary["command"] = "greedy";
    summary["dims"]    = {{"n", m.system.n}, {"K", K}, {"N", gr.model.size()}, {"Q_f", Qf},
                          {"N_det", gr.model.detailed_dimension()}, {"training", count}};
    summary["residual"] =
        (gr.model.reduced_stiffness - Matrix::Identity(gr.model.size(), gr.model.size())).cwiseAbs().maxCoeff();
    summary["estimator"] = gr.history.back().max_error;
    std::vector<std::size_t> picks;
    for (const auto& h : gr.history)
        picks.push_back(h.argmax);
    summary["argmax"]  = picks;
    summary["seed"]    = seed;
    summary["wall_ms"] = timer.ms();
    write_summary(out, summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_reduce(const Options& o)
{
    Timer timer;
    stage("load manifest");
    const io::Manifest m = io::load_manifest(o.manifest);
    stage("validate system");
    ensure_valid(m.system);
    if (!m.system.control)
        throw InputError("control-grid reduction needs a control matrix B in the manifest");
    const Index K  = grid_K(o, m);
    const auto Kus = parse_index_list(o.Kus);
    stage("control-grid reduction study");
    const auto rows = timereduction_study(m.system, K, Kus, o.samples, o.seed, o.threads);
    stage("write output");
    fs::create_directories(o.out);
    Matrix table(static_cast<Index>(rows.size()), 2);
    for (std::size_t i = 0; i < rows.size(); ++i)
        table.row(static_cast<Index>(i)) << static_cast<double>(rows[i].Ku), rows[i].max_rel_err;
    io::write_csv(fs::path(o.out) / "timereduction.csv", {"Ku", "max_rel_err"}, table);
    json summary;
    summary["command"]   = "reduce";
    summary["dims"]      = {{"n", m.system.n}, {"K", K}, {"Kus", Kus}, {"samples", o.samples}};
    summary["residual"]  = nullptr;
    summary["estimator"] = rows.empty() ? 0.0 : rows.front().max_rel_err;
    summary["seed"]      = o.seed;
    summary["wall_ms"]   = timer.ms();
    write_summary(o.out, summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int cmd_rbsolve(const Options& o)
{
    stage("load model");
    const ReducedModel model = io::load_model(o.model);
    const Parameter mu       = parse_mu(o.mu);
    stage("reduced solve");
    Timer timer;
    const Vector xN     = reduced_solve(model, mu);
    const double delta  = estimator_online(model, mu, xN);
    const double online = timer.ms();
    const Vector fN     = model.reduced_rhs(mu);
    json summary;
    summary["command"]  = "rbsolve";
    summary["dims"]     = {{"N", model.size()}, {"Q_f", model.num_rhs_terms()}, {"K", model.grid.K()},
                           {"n", model.n}, {"N_det", model.detailed_dimension()}};
    summary["x_N"]      = std::vector<double>(xN.data(), xN.data() + xN.size());
    summary["residual"] = (model.reduced_stiffness * xN - fN).norm();
    summary["estimator"] = delta;
    summary["wall_ms"]   = online;
    if (!o.manifest.empty())
    {
        stage("lift");
        const io::Manifest m = io::load_manifest(o.manifest);
        if (m.system.n != model.n)
            throw DimensionMismatch("manifest state dimension differs from the model");
        const SparseMatrix A = m.system.A_at(Parameter::Zero(static_cast<Index>(m.system.parameter_dimension())));
        Matrix X             = midpoint_states(lift(model, xN), m.system.E, A, model.grid, model.kernel);
        const auto times     = model.grid.midpoints();
        if (!m.system.x0.empty())
        {
            const ExtensionField ext(m.system);
            const Index offs = static_cast<Index>(model.parameter_dim) -
                               static_cast<Index>(m.system.parameter_dimension());
            const Parameter mu0 = offs > 0 && mu.size() >= offs ? Parameter(mu.tail(mu.size() - offs)) : mu;
            for (std::size_t j = 0; j < times.size(); ++j)
                X.col(static_cast<Index>(j)) += ext(mu0, times[j]);
        }
        fs::create_directories(o.out);
        io::write_csv(fs::path(o.out) / "trajectory.csv", io::numbered_header("t", "x_", model.n),
                      trajectory_table(times, X));
    }
    write_summary(o.out, summary);
    std::cout << summary.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// bench-export: writes manifests for the built-in benchmark systems.

json theta1() { return io::theta_to_json(ThetaExpression::constant(1.0)); }

int cmd_bench_export(const Options& o)
{
    stage("export benchmark");
    const fs::path out(o.out);
    fs::create_directories(out);
    json d;
    d["schema"] = io::manifest_schema;
    if (o.bench == "rlc-smooth" || o.bench == "rlc-disc")
    {
        const RlcParams p;
        const bool smooth = o.bench == "rlc-smooth";
        const DaeSystem s = make_rlc(p, smooth ? RlcSource::smooth(p) : RlcSource::discontinuous(p));
        io::write_mtx(out / "E.mtx", s.E);
        io::write_mtx(out / "A.mtx", s.A[0].value);
        const double w = 4.0 * std::numbers::pi / p.T;
        d["T"]         = p.T;
        d["E"]         = "E.mtx";
        d["A"]         = "A.mtx";
        d["rhs"]       = json::array({{{"theta", theta1()},
                                       {"source",
                                        {{"kind", smooth ? "sine" : "sign_cos"},
                                         {"omega", w},
                                         {"direction", {0.0, 0.0, 0.0, -1.0}}}}}});
        d["grid"]      = {{"K", 1000}};
        if (smooth)
            d["reference"] = {{"kind", "rlc"}, {"R", p.R}, {"L", p.L}, {"C", p.C}, {"omega", w}};
    }
    else if (o.bench == "stokes")
    {
        const StokesLikeParams p;
        const DaeSystem s = make_stokes_like(p);
        io::write_mtx(out / "E.mtx", s.E);
        io::write_mtx(out / "A.mtx", s.A[0].value);
        io::write_mtx(out / "B.mtx", *s.control);
        io::write_mtx(out / "C.mtx", *s.output);
        io::write_mtx(out / "x0.mtx", s.x0[0].value);
        d["T"]        = p.T;
        d["E"]        = "E.mtx";
        d["A"]        = "A.mtx";
        d["B"]        = "B.mtx";
        d["C"]        = "C.mtx";
        d["x0"]       = json::array({{{"theta", theta1()}, {"vector", "x0.mtx"}}});
        d["grid"]     = {{"K", 75}};
        d["control"]  = {{"Ku", 75}};
        d["training"] = {{"size", 100}, {"seed", 42}};
    }
    else if (o.bench == "scalar")
    {
        const DaeSystem s = make_scalar_relaxation();
        io::write_mtx(out / "E.mtx", s.E);
        io::write_mtx(out / "A.mtx", s.A[0].value);
        d["T"]         = s.T;
        d["E"]         = "E.mtx";
        d["A"]         = "A.mtx";
        d["rhs"]       = json::array({{{"theta", theta1()}, {"source", {{"kind", "constant"}, {"value", {1.0}}}}}});
        d["grid"]      = {{"K", 128}};
        d["reference"] = {{"kind", "scalar_relaxation"}, {"lambda", 1.0}};
    }
    else
        throw InputError("unknown benchmark '" + o.bench + "' (rlc-smooth, rlc-disc, stokes, scalar)");
    io::write_json(out / "manifest.json", d);
    std::cout << (out / "manifest.json").string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ultraweak space-time solver and certified reduced basis for linear DAEs"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&o](CLI::App* c) {
        c->add_option("--out", o.out, "Output directory")->capture_default_str();
        c->add_option("--threads", o.threads, "Maximum worker threads")->capture_default_str();
    };
    auto add_manifest = [&o](CLI::App* c, bool required) {
        auto* opt = c->add_option("--manifest", o.manifest, "System manifest (JSON)");
        if (required)
            opt->required();
    };

    auto* solve = app.add_subcommand("solve", "Detailed ultraweak solve with error certificate");
    add_manifest(solve, true);
    add_common(solve);
    solve->add_option("--K", o.K, "Number of time intervals");
    solve->add_option("--Ku", o.Ku, "Control grid intervals (parameters start with control samples)");
    solve->add_option("--mu", o.mu, "Parameter vector, comma separated");
    solve->add_option("--controls", o.controls, "Control CSV (t,u_1..u_m), sampled on the control grid");
    solve->add_option("--refine", o.refine, "Refinement factor of the estimator")->capture_default_str();
    solve->add_flag("--export-mtx", o.export_mtx, "Also write B.mtx and f.mtx");

    auto* conv = app.add_subcommand("convergence", "Error and estimator over a list of K");
    add_manifest(conv, true);
    add_common(conv);
    conv->add_option("--Ks", o.Ks, "Comma-separated K values")->capture_default_str();
    conv->add_option("--mu", o.mu, "Parameter vector, comma separated");
    conv->add_option("--refine", o.refine, "Refinement factor of the estimator")->capture_default_str();

    auto* gr = app.add_subcommand("greedy", "Weak greedy reduced basis training");
    add_manifest(gr, true);
    add_common(gr);
    gr->add_option("--K", o.K, "Number of time intervals");
    gr->add_option("--Ku", o.Ku, "Control grid intervals");
    gr->add_option("--eps", o.eps, "Target max training error")->capture_default_str();
    gr->add_option("--nmax", o.nmax, "Maximum reduced dimension (default Q_f)");
    gr->add_option("--seed", o.seed, "Training set seed")->capture_default_str();
    gr->add_option("--train", o.train, "Training set size (default 100)");

    auto* red = app.add_subcommand("reduce", "Control-grid reduction study");
    add_manifest(red, true);
    add_common(red);
    red->add_option("--K", o.K, "Number of time intervals");
    red->add_option("--Kus", o.Kus, "Comma-separated control grid sizes")->capture_default_str();
    red->add_option("--samples", o.samples, "Number of random controls")->capture_default_str();
    red->add_option("--seed", o.seed, "Random control seed")->capture_default_str();

    auto* rb = app.add_subcommand("rbsolve", "Online reduced solve with certificate");
    rb->add_option("--model", o.model, "Reduced model directory")->required();
    rb->add_option("--mu", o.mu, "Parameter vector, comma separated")->required();
    add_manifest(rb, false);
    add_common(rb);

    auto* be = app.add_subcommand("bench-export", "Write a manifest for a built-in benchmark");
    be->add_option("--bench", o.bench, "rlc-smooth | rlc-disc | stokes | scalar")->required();
    add_common(be);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (solve->parsed())
            return cmd_solve(o);
        if (conv->parsed())
            return cmd_convergence(o);
        if (gr->parsed())
            return cmd_greedy(o);
        if (red->parsed())
            return cmd_reduce(o);
        if (rb->parsed())
            return cmd_rbsolve(o);
        if (be->parsed())
            return cmd_bench_export(o);
    }
    catch (const InputError& e)
    {
        std::cerr << "uwdae: " << g_stage << " failed: " << e.what() << '\n';
        return 2;
    }
    catch (const NumericalError& e)
    {
        std::cerr << "uwdae: " << g_stage << " failed: " << e.what() << '\n';
        return 3;
    }
    catch (const std::exception& e)
    {
        std::cerr << "uwdae: " << g_stage << " failed: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
