#include <fstream>
#include <random>

#include <unistd.h>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "uwdae/bench.hpp"
#include "uwdae/io/csv.hpp"
#include "uwdae/io/manifest.hpp"
#include "uwdae/io/model_io.hpp"
#include "uwdae/io/mtx.hpp"
#include "uwdae/rbm.hpp"

using namespace uwdae;
namespace fs = std::filesystem;

namespace
{

class TempDir
{
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("uwdae_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

void write_text(const fs::path& p, const std::string& s)
{
    std::ofstream(p) << s;
}

} // namespace

TEST(Mtx, SparseAndDenseRoundTripBitExactly)
{
    TempDir dir;
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Index r = 1 + static_cast<Index>(rng() % 7), c = 1 + static_cast<Index>(rng() % 7);
        Matrix m = oracle::random_dense(rng, r, c) * 1e3;
        for (Index i = 0; i < r; ++i)
            if (rng() % 3 == 0)
                m.row(i).setZero();
        io::write_mtx(dir / "s.mtx", to_sparse(m));
        io::write_mtx(dir / "d.mtx", m);
        EXPECT_EQ(io::read_mtx_dense(dir / "s.mtx"), m);
        EXPECT_EQ(io::read_mtx_dense(dir / "d.mtx"), m);
    }
    const Vector v = Vector::LinSpaced(5, -1.0, 1.0 / 3.0);
    io::write_mtx(dir / "v.mtx", v);
    EXPECT_EQ(io::read_mtx_vector(dir / "v.mtx"), v);
}

TEST(Mtx, SymmetricAndPatternVariants)
{
    TempDir dir;
    write_text(dir / "sym.mtx", "%%MatrixMarket matrix coordinate real symmetric\n% c\n3 3 3\n1 1 2\n3 1 -1\n2 2 5\n");
    Matrix expect(3, 3);
    expect << 2, 0, -1, 0, 5, 0, -1, 0, 0;
    EXPECT_EQ(io::read_mtx_dense(dir / "sym.mtx"), expect);

    write_text(dir / "skew.mtx", "%%MatrixMarket matrix array real skew-symmetric\n2 2\n4\n");
    Matrix skew(2, 2);
    skew << 0, -4, 4, 0;
    EXPECT_EQ(io::read_mtx_dense(dir / "skew.mtx"), skew);

    write_text(dir / "pat.mtx", "%%MatrixMarket matrix coordinate pattern general\n2 2 2\n1 2\n2 1\n");
    Matrix pat(2, 2);
    pat << 0, 1, 1, 0;
    EXPECT_EQ(io::read_mtx_dense(dir / "pat.mtx"), pat);
}

TEST(Mtx, MalformedFilesAreReportedAsInputErrors)
{
    TempDir dir;
    EXPECT_THROW(io::read_mtx_sparse(dir / "missing.mtx"), InputError);
    write_text(dir / "a.mtx", "not a banner\n");
    EXPECT_THROW(io::read_mtx_sparse(dir / "a.mtx"), InputError);
    write_text(dir / "b.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n");
    EXPECT_THROW(io::read_mtx_sparse(dir / "b.mtx"), InputError);
    write_text(dir / "c.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
    EXPECT_THROW(io::read_mtx_sparse(dir / "c.mtx"), InputError);
    write_text(dir / "d.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\n");
    EXPECT_THROW(io::read_mtx_sparse(dir / "d.mtx"), InputError);
    io::write_mtx(dir / "m.mtx", Matrix(Matrix::Ones(2, 2)));
    EXPECT_THROW(io::read_mtx_vector(dir / "m.mtx"), InputError);
}

TEST(Csv, WriteThenRead)
{
    TempDir dir;
    Matrix data(3, 3);
    data << 0, 1.5, -2, 0.5, 1e-17, 3, 1, 0.1, 1.0 / 3.0;
    io::write_csv(dir / "t.csv", io::numbered_header("t", "x_", 2), data);
    const io::CsvTable t = io::read_csv(dir / "t.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"t", "x_1", "x_2"}));
    EXPECT_EQ(t.data, data);
}

TEST(Csv, ErrorsNameTheLine)
{
    TempDir dir;
    write_text(dir / "bad.csv", "t,x\n0,1\n1,abc\n");
    try
    {
        io::read_csv(dir / "bad.csv");
        FAIL() << "expected InputError";
    }
    catch (const InputError& e)
    {
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
    }
    write_text(dir / "ragged.csv", "t,x\n0,1,2\n");
    EXPECT_THROW(io::read_csv(dir / "ragged.csv"), InputError);
    write_text(dir / "empty.csv", "");
    EXPECT_THROW(io::read_csv(dir / "empty.csv"), InputError);
}

TEST(Manifest, LoadsAnAffineSystem)
{
    TempDir dir;
    const RlcParams p;
    const DaeSystem rlc = make_rlc(p, RlcSource::smooth(p));
    io::write_mtx(dir / "E.mtx", rlc.E);
    io::write_mtx(dir / "A.mtx", rlc.A_at(Parameter()));
    write_text(dir / "f.csv", "t,f_1,f_2,f_3,f_4\n0,0,0,0,0\n12.566370614359172,0,0,0,-4\n");
    write_text(dir / "m.json", R"({
        "schema": "uwdae-manifest/1",
        "E": "E.mtx", "T": 12.566370614359172,
        "A": [{"theta": 1, "matrix": "A.mtx"}, {"theta": {"type": "component", "index": 0}, "matrix": "A.mtx"}],
        "rhs": [{"theta": {"type": "monomial", "coeff": 2, "exponents": [0, 1]}, "samples": "f.csv"},
                {"source": {"kind": "sine", "omega": 2, "direction": [0, 0, 0, 1]}}],
        "x0": [{"values": [0, 0, 0, 0]}],
        "parameters": {"dimension": 2, "lower": [0, 0], "upper": [1, 1]},
        "grid": {"K": 64}, "training": {"size": 10, "seed": 3}
    })");
    const io::Manifest m = io::load_manifest(dir / "m.json");
    EXPECT_EQ(m.system.n, 4);
    EXPECT_EQ(m.K.value(), 64);
    EXPECT_EQ(m.training_size.value(), 10u);
    EXPECT_EQ(m.seed.value(), 3u);
    EXPECT_FALSE(m.Ku.has_value());
    Parameter mu(2);
    mu << 0.5, 0.25;
    EXPECT_LT((Matrix(m.system.A_at(mu)) - 1.5 * Matrix(rlc.A_at(Parameter()))).cwiseAbs().maxCoeff(), 1e-15);
    const double t = p.T / 2.0;
    Vector f       = Vector::Zero(4);
    f[3]           = 2.0 * 0.25 * -2.0 + std::sin(2.0 * t);
    EXPECT_LT((m.system.f_at(mu, t) - f).norm(), 1e-12);
    EXPECT_TRUE(validate_system(m.system).empty());
}

TEST(Manifest, ReportsMissingAndMalformedInput)
{
    TempDir dir;
    EXPECT_THROW(io::load_manifest(dir / "none.json"), InputError);
    write_text(dir / "bad.json", "{ not json");
    EXPECT_THROW(io::load_manifest(dir / "bad.json"), InputError);
    write_text(dir / "schema.json", R"({"schema": "other", "E": "E.mtx", "A": "E.mtx", "T": 1})");
    EXPECT_THROW(io::load_manifest(dir / "schema.json"), InputError);
    write_text(dir / "missing.json", R"({"schema": "uwdae-manifest/1", "E": "E.mtx", "A": "E.mtx", "T": 1})");
    try
    {
        io::load_manifest(dir / "missing.json");
        FAIL() << "expected InputError";
    }
    catch (const InputError& e)
    {
        EXPECT_NE(std::string(e.what()).find("E.mtx"), std::string::npos);
    }
    io::write_mtx(dir / "E.mtx", Matrix(Matrix::Identity(2, 2)));
    write_text(dir / "src.json", R"({"schema": "uwdae-manifest/1", "E": "E.mtx", "A": "E.mtx", "T": 1,
        "rhs": [{"source": {"kind": "sawtooth"}}]})");
    EXPECT_THROW(io::load_manifest(dir / "src.json"), UnsupportedSource);
    write_text(dir / "dim.json", R"({"schema": "uwdae-manifest/1", "E": "E.mtx", "A": "E.mtx", "T": 1,
        "rhs": [{"source": {"kind": "constant", "value": [1, 2, 3]}}]})");
    EXPECT_THROW(io::load_manifest(dir / "dim.json"), DimensionMismatch);
    write_text(dir / "key.json", R"({"schema": "uwdae-manifest/1", "E": "E.mtx", "A": "E.mtx"})");
    EXPECT_THROW(io::load_manifest(dir / "key.json"), InputError);
}

TEST(Manifest, ThetaJsonRoundTrip)
{
    const std::vector<ThetaExpression> ths{ThetaExpression::constant(-2.5), ThetaExpression::component(3),
                                           ThetaExpression::monomial(1.5, {2, 0, 0, 1})};
    Parameter mu(4);
    mu << 0.3, -0.7, 1.1, 2.0;
    for (const auto& th : ths)
        EXPECT_DOUBLE_EQ(io::theta_from_json(io::theta_to_json(th))(mu), th(mu));
    EXPECT_THROW(io::theta_to_json(ThetaExpression::callback([](const Parameter&) { return 1.0; }, 0)), InputError);
    EXPECT_THROW(io::theta_from_json(io::json{{"type", "bogus"}}), InputError);
    EXPECT_THROW(io::theta_from_json(io::json{{"type", "component"}, {"index", -1}}), InputError);
}

TEST(ModelIo, SaveLoadReproducesOnlineQuantities)
{
    TempDir dir;
    StokesLikeParams p;
    p.m_g                   = 4;
    const ControlProblem cp = make_control_problem(make_stokes_like(p), 5);
    const TrainingSet train = control_training_set(cp, 20, 4);
    const ReducedModel m    = greedy(cp.controlled, TimeGrid(1.0, 5), train, 0.0, 4).model;
    io::save_model(dir.path(), m);
    const ReducedModel r = io::load_model(dir.path());
    EXPECT_EQ(r.size(), m.size());
    EXPECT_EQ(r.grid, m.grid);
    EXPECT_EQ(r.kernel.d, m.kernel.d);
    EXPECT_EQ(r.snapshots.size(), m.snapshots.size());
    for (const auto& mu : control_training_set(cp, 10, 77).parameters)
    {
        const Vector a = reduced_solve(m, mu), b = reduced_solve(r, mu);
        EXPECT_LE((a - b).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()));
        EXPECT_NEAR(estimator_online(m, mu, a), estimator_online(r, mu, b), 1e-12);
    }
    EXPECT_TRUE(fs::exists(dir / "estimator_offline.mtx"));

    io::write_mtx(dir / "eta.mtx", Matrix(Matrix::Zero(3, 3)));
    EXPECT_THROW(io::load_model(dir.path()), DimensionMismatch);
    fs::remove(dir / "header.json");
    EXPECT_THROW(io::load_model(dir.path()), InputError);
}
