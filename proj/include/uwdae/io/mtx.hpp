#ifndef UWDAE_IO_MTX_HPP
#define UWDAE_IO_MTX_HPP

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/types.hpp"

namespace uwdae::io
{

/// Matrix Market banner fields.
struct MtxHeader
{
    bool coordinate = true;  // false: array (dense, column-major)
    enum class Symmetry { general, symmetric, skew_symmetric } symmetry = Symmetry::general;
    bool pattern = false;
    Index rows = 0, cols = 0, entries = 0;
};

namespace detail
{

inline std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct MtxReader
{
    std::ifstream in;
    std::string path;
    std::size_t line_no = 0;

    explicit MtxReader(const std::filesystem::path& p) : in(p), path(p.string())
    {
        if (!in)
            throw InputError("cannot open Matrix Market file: " + path);
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw InputError(path + ":" + std::to_string(line_no) + ": " + what);
    }

    bool next_data_line(std::string& line)
    {
        while (std::getline(in, line))
        {
            ++line_no;
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '%')
                continue;
            return true;
        }
        return false;
    }

    MtxHeader header()
    {
        std::string line;
        if (!std::getline(in, line))
            fail("empty file");
        ++line_no;
        std::istringstream ss(lower(line));
        std::string banner, object, format, field, sym;
        ss >> banner >> object >> format >> field >> sym;
        if (banner != "%%matrixmarket" || object != "matrix")
            fail("missing '%%MatrixMarket matrix' banner");
        MtxHeader h;
        if (format == "coordinate")
            h.coordinate = true;
        else if (format == "array")
            h.coordinate = false;
        else
            fail("unknown format '" + format + "'");
        if (field == "pattern")
            h.pattern = true;
        else if (field != "real" && field != "integer" && field != "double")
            fail("unsupported field '" + field + "'");
        if (sym == "general" || sym.empty())
            h.symmetry = MtxHeader::Symmetry::general;
        else if (sym == "symmetric")
            h.symmetry = MtxHeader::Symmetry::symmetric;
        else if (sym == "skew-symmetric")
            h.symmetry = MtxHeader::Symmetry::skew_symmetric;
        else
            fail("unsupported symmetry '" + sym + "'");
        if (!h.coordinate && h.pattern)
            fail("array format cannot be a pattern");
        if (!next_data_line(line))
            fail("missing size line");
        std::istringstream sz(line);
        if (h.coordinate)
        {
            if (!(sz >> h.rows >> h.cols >> h.entries))
                fail("malformed size line");
        }
        else
        {
            if (!(sz >> h.rows >> h.cols))
                fail("malformed size line");
            h.entries = h.rows * h.cols;
        }
        if (h.rows < 0 || h.cols < 0 || h.entries < 0)
            fail("negative dimensions");
        if (h.symmetry != MtxHeader::Symmetry::general && h.rows != h.cols)
            fail("symmetric storage requires a square matrix");
        return h;
    }
};

} // namespace detail

/// Reads a coordinate or array Matrix Market file into a sparse matrix.
inline SparseMatrix read_mtx_sparse(const std::filesystem::path& path)
{
    detail::MtxReader r(path);
    const MtxHeader h = r.header();
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(h.entries) * (h.symmetry == MtxHeader::Symmetry::general ? 1 : 2));
    std::string line;
    auto add = [&](Index i, Index j, double v) {
        t.emplace_back(i, j, v);
        if (i != j && h.symmetry == MtxHeader::Symmetry::symmetric)
            t.emplace_back(j, i, v);
        else if (i != j && h.symmetry == MtxHeader::Symmetry::skew_symmetric)
            t.emplace_back(j, i, -v);
    };
    if (h.coordinate)
    {
        for (Index e = 0; e < h.entries; ++e)
        {
            if (!r.next_data_line(line))
                r.fail("expected " + std::to_string(h.entries) + " entries, found " + std::to_string(e));
            std::istringstream ss(line);
            Index i = 0, j = 0;
            double v = 1.0;
            if (!(ss >> i >> j) || (!h.pattern && !(ss >> v)))
                r.fail("malformed entry");
            if (i < 1 || i > h.rows || j < 1 || j > h.cols)
                r.fail("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
            add(i - 1, j - 1, v);
        }
    }
    else
    {
        for (Index j = 0; j < h.cols; ++j)
            for (Index i = (h.symmetry == MtxHeader::Symmetry::general ? 0 : j); i < h.rows; ++i)
            {
                if (h.symmetry == MtxHeader::Symmetry::skew_symmetric && i == j)
                    continue;
                if (!r.next_data_line(line))
                    r.fail("array data ended early");
                double v = 0.0;
                std::istringstream ss(line);
                if (!(ss >> v))
                    r.fail("malformed value");
                if (v != 0.0)
                    add(i, j, v);
            }
    }
    SparseMatrix m(h.rows, h.cols);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

/// Reads any Matrix Market file into a dense matrix.
inline Matrix read_mtx_dense(const std::filesystem::path& path)
{
    return Matrix(read_mtx_sparse(path));
}

/// Reads a vector stored as an n x 1 (or 1 x n) Matrix Market file.
inline Vector read_mtx_vector(const std::filesystem::path& path)
{
    const Matrix m = read_mtx_dense(path);
    if (m.cols() == 1)
        return m.col(0);
    if (m.rows() == 1)
        return m.row(0).transpose();
    throw InputError(path.string() + ": expected a vector, got " + std::to_string(m.rows()) + " x " +
                     std::to_string(m.cols()));
}

/// Writes a sparse matrix in coordinate/real/general format with round-trip precision.
inline void write_mtx(const std::filesystem::path& path, const SparseMatrix& m)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write Matrix Market file: " + path.string());
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << detail::format_double(it.value()) << '\n';
    if (!out)
        throw InputError("failed writing " + path.string());
}

/// Writes a dense matrix in array/real/general format (column-major) with round-trip precision.
inline void write_mtx(const std::filesystem::path& path, const Matrix& m)
{
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write Matrix Market file: " + path.string());
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            out << detail::format_double(m(i, j)) << '\n';
    if (!out)
        throw InputError("failed writing " + path.string());
}

inline void write_mtx(const std::filesystem::path& path, const Vector& v)
{
    write_mtx(path, Matrix(v));
}

} // namespace uwdae::io

#endif // UWDAE_IO_MTX_HPP
