#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "kaczmarz/problems.hpp"

namespace kaczmarz {
namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

struct Header {
    std::string format;    // coordinate | array
    std::string field;     // real | integer
    std::string symmetry;  // general | symmetric
};

Header parse_header(const std::string& line, std::size_t line_no) {
    std::istringstream iss(line);
    std::string banner, object, format, field, symmetry;
    iss >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || !iss)
        throw ParseError(line_no, "malformed MatrixMarket header");
    object = lower(object);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (object != "matrix")
        throw ParseError(line_no, "unsupported object '" + object + "'");
    if (format != "coordinate" && format != "array")
        throw ParseError(line_no, "unsupported format '" + format + "'");
    if (field == "pattern" || field == "complex")
        throw ParseError(line_no, "unsupported field '" + field + "'");
    if (field != "real" && field != "integer")
        throw ParseError(line_no, "unknown field '" + field + "'");
    if (symmetry == "skew-symmetric" || symmetry == "hermitian")
        throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError(line_no, "unknown symmetry '" + symmetry + "'");
    return {format, field, symmetry};
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;  // blank
        if (line[start] == '%') continue;          // comment
        return true;
    }
    return false;
}

}  // namespace

LoadedMatrix load_matrix_market(const std::string& path, const MatrixMarketOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    ++line_no;
    const Header header = parse_header(line, line_no);

    if (!next_content_line(in, line, line_no))
        throw ParseError(line_no, "missing size line");

    std::size_t rows = 0, cols = 0, declared = 0;
    std::vector<Triplet> entries;

    if (header.format == "coordinate") {
        {
            std::istringstream iss(line);
            long long r = 0, c = 0, nnz = 0;
            if (!(iss >> r >> c >> nnz) || r <= 0 || c <= 0 || nnz < 0)
                throw ParseError(line_no, "malformed size line");
            rows = static_cast<std::size_t>(r);
            cols = static_cast<std::size_t>(c);
            declared = static_cast<std::size_t>(nnz);
        }
        entries.reserve(declared);
        for (std::size_t k = 0; k < declared; ++k) {
            if (!next_content_line(in, line, line_no))
                throw ParseError(line_no, "unexpected end of file: expected " +
                                              std::to_string(declared) + " entries");
            std::istringstream iss(line);
            long long r = 0, c = 0;
            double v = 0.0;
            if (!(iss >> r >> c >> v))
                throw ParseError(line_no, "malformed entry");
            if (r < 1 || static_cast<std::size_t>(r) > rows ||
                c < 1 || static_cast<std::size_t>(c) > cols)
                throw ParseError(line_no, "entry index out of range");
            if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
            const std::size_t ri = static_cast<std::size_t>(r - 1);
            const std::size_t ci = static_cast<std::size_t>(c - 1);
            entries.push_back({ri, ci, v});
            if (header.symmetry == "symmetric" && ri != ci)
                entries.push_back({ci, ri, v});
        }
    } else {
        {
            std::istringstream iss(line);
            long long r = 0, c = 0;
            if (!(iss >> r >> c) || r <= 0 || c <= 0)
                throw ParseError(line_no, "malformed size line");
            rows = static_cast<std::size_t>(r);
            cols = static_cast<std::size_t>(c);
        }
        // Array data is column-major; symmetric array files store the lower
        // triangle of each column only.
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t first = header.symmetry == "symmetric" ? j : 0;
            for (std::size_t i = first; i < rows; ++i) {
                if (!next_content_line(in, line, line_no))
                    throw ParseError(line_no, "unexpected end of file in array data");
                std::istringstream iss(line);
                double v = 0.0;
                if (!(iss >> v)) throw ParseError(line_no, "malformed array value");
                if (!std::isfinite(v)) throw ParseError(line_no, "non-finite value");
                entries.push_back({i, j, v});
                if (header.symmetry == "symmetric" && i != j)
                    entries.push_back({j, i, v});
            }
        }
    }

    LoadedMatrix out;
    if (opts.drop_zero_rows) {
        std::vector<double> row_sq(rows, 0.0);
        for (const Triplet& t : entries) row_sq[t.row] += t.value * t.value;
        std::vector<std::size_t> remap(rows, SIZE_MAX);
        for (std::size_t i = 0; i < rows; ++i) {
            if (row_sq[i] > 0.0) {
                remap[i] = out.kept_rows.size();
                out.kept_rows.push_back(i);
            }
        }
        out.dropped_rows = rows - out.kept_rows.size();
        if (out.kept_rows.empty())
            throw std::invalid_argument("load_matrix_market: every row is zero");
        std::vector<Triplet> kept;
        kept.reserve(entries.size());
        for (const Triplet& t : entries)
            if (remap[t.row] != SIZE_MAX) kept.push_back({remap[t.row], t.col, t.value});
        out.matrix = SparseRowMatrix::from_triplets(out.kept_rows.size(), cols,
                                                    std::move(kept));
    } else {
        out.kept_rows.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) out.kept_rows[i] = i;
        out.matrix = SparseRowMatrix::from_triplets(rows, cols, std::move(entries));
    }
    return out;
}

void save_matrix_market(const std::string& path, const SparseRowMatrix& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    char buf[64];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto idx = a.row_indices(i);
        const auto val = a.row_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", val[k]);
            out << (i + 1) << ' ' << (idx[k] + 1) << ' ' << buf << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Vector load_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Vector v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '%' || line[start] == '#') continue;
        std::istringstream iss(line);
        double x = 0.0;
        if (!(iss >> x)) throw ParseError(line_no, "malformed vector entry");
        if (!std::isfinite(x)) throw ParseError(line_no, "non-finite vector entry");
        v.push_back(x);
    }
    return v;
}

void save_vector(const std::string& path, std::span<const double> v) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    char buf[64];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace kaczmarz
