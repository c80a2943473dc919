#ifndef UWDAE_IO_MODEL_IO_HPP
#define UWDAE_IO_MODEL_IO_HPP

#include <filesystem>
#include <fstream>

#include "uwdae/errors.hpp"
#include "uwdae/io/manifest.hpp"
#include "uwdae/io/mtx.hpp"
#include "uwdae/rbm.hpp"

namespace uwdae::io
{

inline constexpr const char* model_schema = "uwdae-reduced-model/1";

///
/// Directory layout:
///   header.json            dimensions, grid, seed, snapshot parameters, rhs thetas
///   eta.mtx                test coefficients of the basis (N_det x N)
///   reduced_stiffness.mtx  B_N
///   rhs_offline.mtx        (f_q, eta_j), Q_f x N
///   residual_gram.mtx      projected Riesz Gram, Q_f x Q_f
///   estimator_offline.mtx  full (Q_f + N) estimator Gram (informational)
///   kernel.mtx             basis of ker(E^T)
///
inline void save_model(const std::filesystem::path& dir, const ReducedModel& m)
{
    std::filesystem::create_directories(dir);
    json h;
    h["schema"]             = model_schema;
    h["N"]                  = m.size();
    h["Q_f"]                = m.num_rhs_terms();
    h["detailed_dimension"] = m.detailed_dimension();
    h["n"]                  = m.n;
    h["d"]                  = m.kernel.d;
    h["kernel_tol"]         = m.kernel.tol;
    h["parameter_dim"]      = m.parameter_dim;
    h["seed"]               = m.seed;
    h["grid"]               = {{"T", m.grid.T()}, {"K", m.grid.K()}};
    json thetas             = json::array();
    for (const auto& th : m.rhs_thetas)
        thetas.push_back(theta_to_json(th));
    h["rhs_thetas"] = thetas;
    json snaps      = json::array();
    for (const auto& mu : m.snapshots)
        snaps.push_back(vector_to_json(mu));
    h["snapshots"] = snaps;
    write_json(dir / "header.json", h);
    write_mtx(dir / "eta.mtx", m.eta);
    write_mtx(dir / "reduced_stiffness.mtx", m.reduced_stiffness);
    write_mtx(dir / "rhs_offline.mtx", m.rhs_offline);
    write_mtx(dir / "residual_gram.mtx", m.residual_gram);
    write_mtx(dir / "estimator_offline.mtx", m.estimator_gram());
    write_mtx(dir / "kernel.mtx", m.kernel.V);
}

inline ReducedModel load_model(const std::filesystem::path& dir)
{
    const auto hp = dir / "header.json";
    std::ifstream in(hp);
    if (!in)
        throw InputError("cannot open reduced model header: " + hp.string());
    ReducedModel m;
    try
    {
        const json h = json::parse(in);
        if (h.value("schema", std::string()) != model_schema)
            throw InputError(hp.string() + ": schema tag must be '" + std::string(model_schema) + "'");
        m.n             = h.at("n").get<Index>();
        m.parameter_dim = h.at("parameter_dim").get<std::size_t>();
        m.seed          = h.at("seed").get<std::uint64_t>();
        m.grid          = TimeGrid(h.at("grid").at("T").get<double>(), h.at("grid").at("K").get<Index>());
        for (const auto& th : h.at("rhs_thetas"))
            m.rhs_thetas.push_back(theta_from_json(th));
        for (const auto& mu : h.at("snapshots"))
            m.snapshots.push_back(vector_from_json(mu));
        m.eta               = read_mtx_dense(dir / "eta.mtx");
        m.reduced_stiffness = read_mtx_dense(dir / "reduced_stiffness.mtx");
        m.rhs_offline       = read_mtx_dense(dir / "rhs_offline.mtx");
        m.residual_gram     = read_mtx_dense(dir / "residual_gram.mtx");
        m.kernel.V          = read_mtx_dense(dir / "kernel.mtx");
        m.kernel.d          = h.at("d").get<Index>();
        m.kernel.tol        = h.value("kernel_tol", 1e-10);
        const Index N = h.at("N").get<Index>(), Q = h.at("Q_f").get<Index>();
        if (m.eta.cols() != N || m.reduced_stiffness.rows() != N || m.reduced_stiffness.cols() != N ||
            m.rhs_offline.rows() != Q || m.rhs_offline.cols() != N || m.residual_gram.rows() != Q ||
            m.residual_gram.cols() != Q || m.num_rhs_terms() != Q ||
            m.eta.rows() != h.at("detailed_dimension").get<Index>())
            throw DimensionMismatch(dir.string() + ": payload dimensions disagree with header.json");
    }
    catch (const json::exception& e)
    {
        throw InputError(hp.string() + ": " + e.what());
    }
    return m;
}

} // namespace uwdae::io

#endif // UWDAE_IO_MODEL_IO_HPP
