#include "skl/path.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace skl {

SampledPath::SampledPath(std::vector<double> times, std::vector<double> vals, int d)
    : t(std::move(times)), values(std::move(vals)), dim(d) {
    validate();
}

SampledPath SampledPath::uniform(double dt, std::size_t steps, int d) {
    if (!(dt > 0.0)) throw std::invalid_argument("SampledPath: dt must be positive");
    SampledPath p;
    p.dim = d;
    p.t.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) p.t[i] = static_cast<double>(i) * dt;
    p.values.assign((steps + 1) * static_cast<std::size_t>(d), 0.0);
    return p;
}

double SampledPath::dt() const {
    if (points() < 2) throw std::logic_error("SampledPath: dt undefined for < 2 points");
    if (!is_uniform()) throw std::logic_error("SampledPath: grid is not uniform");
    return t[1] - t[0];
}

bool SampledPath::is_uniform(double rel_tol) const {
    if (points() < 2) return true;
    const double h = t[1] - t[0];
    for (std::size_t i = 1; i + 1 < points(); ++i)
        if (std::fabs((t[i + 1] - t[i]) - h) > rel_tol * h) return false;
    return true;
}

void SampledPath::validate() const {
    if (dim <= 0) throw std::invalid_argument("SampledPath: dimension must be positive");
    if (values.size() != t.size() * static_cast<std::size_t>(dim))
        throw std::invalid_argument("SampledPath: value count does not match grid");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]))
            throw std::invalid_argument("SampledPath: grid must be strictly increasing");
    if (!all_finite(values) || !all_finite(t))
        throw std::invalid_argument("SampledPath: non-finite entries");
}

void ReflectedSolution::validate() const {
    X.validate();
    Phi.validate();
    if (X.points() != Phi.points() || X.dimension() != Phi.dimension())
        throw std::invalid_argument("ReflectedSolution: X and Phi must share the grid");
    if (total_variation.size() != X.points())
        throw std::invalid_argument("ReflectedSolution: total_variation length mismatch");
    if (norm(Phi.at(0)) != 0.0)
        throw std::invalid_argument("ReflectedSolution: Phi(0) must be zero");
    for (std::size_t i = 0; i + 1 < total_variation.size(); ++i)
        if (total_variation[i + 1] + 1e-15 < total_variation[i])
            throw std::invalid_argument("ReflectedSolution: total variation must be non-decreasing");
}

namespace {

void write_double(std::ostream& os, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    os.write(buf, res.ptr - buf);
}

}  // namespace

void write_csv(std::ostream& os, const SampledPath& path) {
    os << "t";
    for (int c = 1; c <= path.dimension(); ++c) os << ",x" << c;
    os << "\n";
    for (std::size_t i = 0; i < path.points(); ++i) {
        write_double(os, path.t[i]);
        const auto row = path.at(i);
        for (double v : row) {
            os << ',';
            write_double(os, v);
        }
        os << "\n";
    }
}

SampledPath read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
    int d = 0;
    {
        std::stringstream hs(line);
        std::string col;
        bool first = true;
        while (std::getline(hs, col, ',')) {
            if (first) {
                if (col != "t") throw std::runtime_error("csv: first column must be 't'");
                first = false;
            } else {
                ++d;
                if (col != "x" + std::to_string(d))
                    throw std::runtime_error("csv: bad header column '" + col + "'");
            }
        }
        if (d == 0) throw std::runtime_error("csv: no value columns");
    }
    SampledPath p;
    p.dim = d;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const char* ptr = line.data();
        const char* end = line.data() + line.size();
        for (int c = 0; c <= d; ++c) {
            double v = 0.0;
            const auto res = std::from_chars(ptr, end, v);
            if (res.ec != std::errc{})
                throw std::runtime_error("csv: bad number in row: " + line);
            ptr = res.ptr;
            if (c < d) {
                if (ptr >= end || *ptr != ',')
                    throw std::runtime_error("csv: expected ',' in row: " + line);
                ++ptr;
            }
            if (c == 0)
                p.t.push_back(v);
            else
                p.values.push_back(v);
        }
        if (ptr != end) throw std::runtime_error("csv: trailing characters in row: " + line);
    }
    p.validate();
    return p;
}

void write_csv_file(const std::string& filename, const SampledPath& path) {
    std::ofstream f(filename, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + filename);
    write_csv(f, path);
}

SampledPath read_csv_file(const std::string& filename) {
    std::ifstream f(filename, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + filename);
    return read_csv(f);
}

}  // namespace skl
