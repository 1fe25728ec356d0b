#include "floqgen/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace floqgen {

void write_trajectory_csv(const std::string& path, const Trajectory& tr,
                          const std::vector<std::string>& observable_order) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot open for writing: " + path);
    std::fprintf(f, "t");
    for (const auto& name : observable_order) std::fprintf(f, ",%s", name.c_str());
    std::fprintf(f, "\n");
    for (size_t i = 0; i < tr.size(); ++i) {
        std::fprintf(f, "%.12g", tr.times()[i]);
        for (const auto& name : observable_order)
            std::fprintf(f, ",%.12g", tr.observable(name)[i]);
        std::fprintf(f, "\n");
    }
    std::fclose(f);
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    CsvData out;
    std::string line;
    if (!std::getline(in, line)) throw Error("empty csv: " + path);
    {
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                if (cell != "t") throw Error("csv header must start with t: " + path);
                first = false;
            } else {
                out.names.push_back(cell);
            }
        }
    }
    out.columns.resize(out.names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            const double v = std::stod(cell);
            if (col == 0)
                out.times.push_back(v);
            else if (col - 1 < out.columns.size())
                out.columns[col - 1].push_back(v);
            else
                throw Error("ragged csv row in " + path);
            ++col;
        }
        if (col != out.names.size() + 1) throw Error("ragged csv row in " + path);
    }
    return out;
}

namespace {

// Sliding mean of width w(t_i) centred on each sample.
std::vector<double> sliding_mean(const std::vector<double>& t, const std::vector<double>& y,
                                 const std::function<double(double)>& window_at) {
    const size_t n = t.size();
    std::vector<double> out(n);
    size_t lo = 0, hi = 0;
    for (size_t i = 0; i < n; ++i) {
        const double half = 0.5 * window_at(t[i]);
        while (lo < n && t[lo] < t[i] - half) ++lo;
        if (hi < i) hi = i;
        while (hi + 1 < n && t[hi + 1] <= t[i] + half) ++hi;
        double s = 0.0;
        for (size_t j = lo; j <= hi; ++j) s += y[j];
        out[i] = s / double(hi - lo + 1);
    }
    return out;
}

} // namespace

CompareResult compare_csv(const CsvData& a, const CsvData& b,
                          const std::function<double(double)>& window_at) {
    if (a.times.size() != b.times.size()) throw Error("compare: time grids differ in length");
    for (size_t i = 0; i < a.times.size(); ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-9 * std::max(1.0, std::abs(a.times[i])))
            throw Error("compare: time grids differ at row " + std::to_string(i));
    if (a.names != b.names) throw Error("compare: column sets differ");

    CompareResult r;
    for (size_t c = 0; c < a.columns.size(); ++c)
        for (size_t i = 0; i < a.times.size(); ++i)
            r.pointwise = std::max(r.pointwise, std::abs(a.columns[c][i] - b.columns[c][i]));
    if (window_at) {
        r.envelope = 0.0;
        for (size_t c = 0; c < a.columns.size(); ++c) {
            const auto ea = sliding_mean(a.times, a.columns[c], window_at);
            const auto eb = sliding_mean(b.times, b.columns[c], window_at);
            for (size_t i = 0; i < ea.size(); ++i)
                r.envelope = std::max(r.envelope, std::abs(ea[i] - eb[i]));
        }
    }
    return r;
}

} // namespace floqgen
