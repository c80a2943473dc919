#ifndef UWDAE_IO_MANIFEST_HPP
#define UWDAE_IO_MANIFEST_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uwdae/errors.hpp"
#include "uwdae/io/csv.hpp"
#include "uwdae/io/mtx.hpp"
#include "uwdae/system.hpp"
#include "uwdae/theta.hpp"

namespace uwdae::io
{

using json = nlohmann::json;

inline constexpr const char* manifest_schema = "uwdae-manifest/1";

// ---------------------------------------------------------------------------
// theta expressions
// ---------------------------------------------------------------------------

/// {"type": "constant", "value": c} | {"type": "component", "index": j}
/// | {"type": "monomial", "coeff": c, "exponents": [...]}; a bare number is a constant.
inline ThetaExpression theta_from_json(const json& j)
{
    if (j.is_number())
        return ThetaExpression::constant(j.get<double>());
    if (!j.is_object() || !j.contains("type"))
        throw InputError("theta expression must be a number or an object with a 'type' tag");
    const std::string type = j.at("type").get<std::string>();
    if (type == "constant")
        return ThetaExpression::constant(j.value("value", 1.0));
    if (type == "component")
    {
        const auto idx = j.at("index").get<long long>();
        if (idx < 0)
            throw InputError("theta component index must be nonnegative");
        return ThetaExpression::component(static_cast<std::size_t>(idx));
    }
    if (type == "monomial")
        return ThetaExpression::monomial(j.value("coeff", 1.0), j.at("exponents").get<std::vector<int>>());
    throw InputError("unknown theta type '" + type + "'");
}

inline json theta_to_json(const ThetaExpression& th)
{
    if (const auto* c = th.as_constant())
        return {{"type", "constant"}, {"value", c->value}};
    if (const auto* c = th.as_component())
        return {{"type", "component"}, {"index", c->index}};
    if (const auto* m = th.as_monomial())
        return {{"type", "monomial"}, {"coeff", m->coeff}, {"exponents", m->exponents}};
    throw InputError("callback theta expressions cannot be serialized");
}

inline Vector vector_from_json(const json& j)
{
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

inline json vector_to_json(const Vector& v)
{
    return std::vector<double>(v.data(), v.data() + v.size());
}

// ---------------------------------------------------------------------------
// manifest
// ---------------------------------------------------------------------------

struct Manifest
{
    std::filesystem::path path;
    DaeSystem system;
    std::optional<Index> K;
    std::optional<Index> Ku;
    std::optional<Vector> lower, upper;
    std::optional<std::size_t> training_size;
    std::optional<std::uint64_t> seed;
    json document;
};

namespace detail
{

inline std::filesystem::path resolve(const std::filesystem::path& base, const json& j, const std::string& what)
{
    if (!j.is_string())
        throw InputError("manifest field '" + what + "' must be a file path");
    std::filesystem::path p = j.get<std::string>();
    if (p.is_relative())
        p = base / p;
    if (!std::filesystem::exists(p))
        throw InputError("manifest references missing file for '" + what + "': " + p.string());
    return p;
}

inline TimeFunction source_from_json(const json& s, Index n)
{
    const std::string kind = s.at("kind").get<std::string>();
    auto direction = [&]() {
        const Vector d = vector_from_json(s.at("direction"));
        if (d.size() != n)
            throw DimensionMismatch("rhs source direction has length " + std::to_string(d.size()) + ", expected " +
                                    std::to_string(n));
        return d;
    };
    if (kind == "constant")
    {
        const Vector v = vector_from_json(s.at("value"));
        if (v.size() != n)
            throw DimensionMismatch("constant rhs has length " + std::to_string(v.size()) + ", expected " +
                                    std::to_string(n));
        return TimeFunction::constant(v);
    }
    if (kind == "sine")
    {
        const double a = s.value("amplitude", 1.0), w = s.at("omega").get<double>(), ph = s.value("phase", 0.0);
        return TimeFunction::separable(direction(), [a, w, ph](double t) { return a * std::sin(w * t + ph); });
    }
    if (kind == "sign_cos")
    {
        const double a = s.value("amplitude", 1.0), w = s.at("omega").get<double>();
        return TimeFunction::separable(direction(), [a, w](double t) {
            const double c = std::cos(w * t);
            return a * static_cast<double>((c > 0.0) - (c < 0.0));
        });
    }
    throw UnsupportedSource("unknown rhs source kind '" + kind + "'");
}

inline TimeFunction samples_from_csv(const std::filesystem::path& p, Index n)
{
    const CsvTable t = read_csv(p);
    if (t.data.cols() != n + 1)
        throw DimensionMismatch(p.string() + ": expected columns t,f_1..f_" + std::to_string(n) + ", got " +
                                std::to_string(t.data.cols()));
    if (t.data.rows() < 1)
        throw InputError(p.string() + ": no samples");
    std::vector<double> times(static_cast<std::size_t>(t.data.rows()));
    for (Index i = 0; i < t.data.rows(); ++i)
        times[static_cast<std::size_t>(i)] = t.data(i, 0);
    Matrix values = t.data.rightCols(n).transpose();
    return TimeFunction::interpolate(std::move(times), std::move(values));
}

} // namespace detail

///
/// Loads a system manifest. Relative paths resolve against the manifest's directory.
///
inline Manifest load_manifest(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open manifest: " + path.string());
    Manifest m;
    m.path = path;
    try
    {
        m.document = json::parse(in);
    }
    catch (const json::parse_error& e)
    {
        throw InputError("manifest " + path.string() + " is not valid JSON: " + e.what());
    }
    const json& d = m.document;
    const auto base = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    try
    {
        if (d.value("schema", std::string()) != manifest_schema)
            throw InputError("manifest schema tag must be '" + std::string(manifest_schema) + "'");
        DaeSystem& s = m.system;
        s.E          = read_mtx_sparse(detail::resolve(base, d.at("E"), "E"));
        s.n          = s.E.rows();
        s.T          = d.at("T").get<double>();

        const json& A = d.at("A");
        if (A.is_string())
            s.A.add(ThetaExpression::constant(1.0), read_mtx_sparse(detail::resolve(base, A, "A")));
        else
            for (const auto& term : A)
                s.A.add(theta_from_json(term.value("theta", json(1.0))),
                        read_mtx_sparse(detail::resolve(base, term.at("matrix"), "A.matrix")));

        if (d.contains("rhs"))
            for (const auto& term : d.at("rhs"))
            {
                const ThetaExpression th = theta_from_json(term.value("theta", json(1.0)));
                if (term.contains("samples"))
                    s.rhs.add(th, detail::samples_from_csv(detail::resolve(base, term.at("samples"), "rhs.samples"),
                                                           s.n));
                else if (term.contains("source"))
                    s.rhs.add(th, detail::source_from_json(term.at("source"), s.n));
                else
                    throw InputError("rhs term needs 'samples' or 'source'");
            }

        if (d.contains("x0"))
            for (const auto& term : d.at("x0"))
            {
                const ThetaExpression th = theta_from_json(term.value("theta", json(1.0)));
                if (term.contains("vector"))
                    s.x0.add(th, read_mtx_vector(detail::resolve(base, term.at("vector"), "x0.vector")));
                else
                    s.x0.add(th, vector_from_json(term.at("values")));
            }

        if (d.contains("B"))
            s.control = read_mtx_sparse(detail::resolve(base, d.at("B"), "B"));
        if (d.contains("C"))
            s.output = read_mtx_sparse(detail::resolve(base, d.at("C"), "C"));

        if (d.contains("parameters"))
        {
            const json& p = d.at("parameters");
            if (p.contains("dimension"))
                s.parameter_dim = p.at("dimension").get<std::size_t>();
            if (p.contains("lower"))
                m.lower = vector_from_json(p.at("lower"));
            if (p.contains("upper"))
                m.upper = vector_from_json(p.at("upper"));
        }
        if (d.contains("grid") && d.at("grid").contains("K"))
            m.K = d.at("grid").at("K").get<Index>();
        if (d.contains("control") && d.at("control").contains("Ku"))
            m.Ku = d.at("control").at("Ku").get<Index>();
        if (d.contains("training"))
        {
            const json& t = d.at("training");
            if (t.contains("size"))
                m.training_size = t.at("size").get<std::size_t>();
            if (t.contains("seed"))
                m.seed = t.at("seed").get<std::uint64_t>();
        }
    }
    catch (const json::exception& e)
    {
        throw InputError("manifest " + path.string() + ": " + e.what());
    }
    return m;
}

inline void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

} // namespace uwdae::io

#endif // UWDAE_IO_MANIFEST_HPP
