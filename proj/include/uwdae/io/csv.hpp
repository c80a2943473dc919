#ifndef UWDAE_IO_CSV_HPP
#define UWDAE_IO_CSV_HPP

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "uwdae/errors.hpp"
#include "uwdae/io/mtx.hpp"
#include "uwdae/types.hpp"

namespace uwdae::io
{

struct CsvTable
{
    std::vector<std::string> header;
    Matrix data;  // one row per record
};

namespace detail
{

inline std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line)
    {
        if (c == ',')
        {
            out.push_back(cur);
            cur.clear();
        }
        else if (c != '\r')
            cur += c;
    }
    out.push_back(cur);
    for (auto& s : out)
    {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s            = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }
    return out;
}

} // namespace detail

/// Numeric CSV with a single header row.
inline CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open CSV file: " + path.string());
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            break;
    }
    if (line_no == 0 || line.find_first_not_of(" \t\r") == std::string::npos)
        throw InputError(path.string() + ": empty CSV file");
    t.header = detail::split_csv(line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto cells = detail::split_csv(line);
        if (cells.size() != t.header.size())
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " + std::to_string(cells.size()));
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j)
        {
            const char* b = cells[j].data();
            const char* e = b + cells[j].size();
            auto [p, ec]  = std::from_chars(b, e, row[j]);
            if (ec != std::errc() || p != e)
                throw InputError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + cells[j] +
                                 "'");
        }
        rows.push_back(std::move(row));
    }
    t.data.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            t.data(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return t;
}

inline void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& data)
{
    for (std::size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << '\n';
    for (Index i = 0; i < data.rows(); ++i)
    {
        for (Index j = 0; j < data.cols(); ++j)
            out << (j ? "," : "") << detail::format_double(data(i, j));
        out << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header, const Matrix& data)
{
    if (static_cast<Index>(header.size()) != data.cols())
        throw DimensionMismatch("CSV header has " + std::to_string(header.size()) + " names for " +
                                std::to_string(data.cols()) + " columns");
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write CSV file: " + path.string());
    write_csv(out, header, data);
}

/// Header "<first>,<prefix>1,...,<prefix>n".
inline std::vector<std::string> numbered_header(const std::string& first, const std::string& prefix, Index n)
{
    std::vector<std::string> h{first};
    for (Index i = 1; i <= n; ++i)
        h.push_back(prefix + std::to_string(i));
    return h;
}

} // namespace uwdae::io

#endif // UWDAE_IO_CSV_HPP
