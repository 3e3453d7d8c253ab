#pragma once
//
// Text serialization shared by every module: round-trip number formatting,
// complex-matrix CSV, and atomic file replacement.
//

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "teich/error.hpp"
#include "teich/fourier.hpp"

namespace teich {

using CMatrix = Eigen::MatrixXcd;

/// Shortest-round-trip-safe decimal form ("%.17g"), locale independent.
inline std::string format_number(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// One line per row; each entry becomes two columns `re,im`.
inline std::string matrix_to_csv(const CMatrix& m)
{
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0)
                out += ',';
            out += format_number(m(i, j).real());
            out += ',';
            out += format_number(m(i, j).imag());
        }
        out += '\n';
    }
    return out;
}

inline std::vector<double> parse_csv_row(std::string_view line)
{
    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
        const auto comma = line.find(',', start);
        const auto cell = line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
        try {
            std::size_t used = 0;
            const std::string text(cell);
            row.push_back(std::stod(text, &used));
            if (text.find_first_not_of(" \t\r", used) != std::string::npos)
                throw ConfigError("trailing characters in CSV cell '" + text + "'");
        } catch (const std::logic_error&) {
            throw ConfigError("malformed CSV cell '" + std::string(cell) + "'");
        }
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return row;
}

inline CMatrix matrix_from_csv(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        rows.push_back(parse_csv_row(line));
    }
    if (rows.empty())
        return CMatrix(0, 0);
    const std::size_t width = rows.front().size();
    if (width % 2 != 0)
        throw ConfigError("matrix CSV rows must hold re,im pairs");
    CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width / 2));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != width)
            throw ConfigError("matrix CSV rows have unequal lengths");
        for (std::size_t j = 0; j < width / 2; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cplx{rows[i][2 * j], rows[i][2 * j + 1]};
    }
    return m;
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes `content` to a sibling temp file and renames it over `path`.
inline void atomic_write(const std::filesystem::path& path, std::string_view content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace teich
