#include "expfit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "expfit/errors.hpp"

namespace expfit {

namespace {

bool parse_double(std::string_view field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

// Split a line on commas and/or whitespace; empty fields are dropped.
std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ',' || std::isspace(static_cast<unsigned char>(line[i]))))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ',' && !std::isspace(static_cast<unsigned char>(line[j])))
            ++j;
        if (j > i) fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

} // namespace

Dataset::Dataset(std::vector<double> t, std::vector<double> T)
    : t_(std::move(t)), T_(std::move(T)) {
    if (t_.size() != T_.size())
        throw InputError("dataset: t and T must have equal length");
    if (t_.size() < 2)
        throw InputError("dataset: at least 2 rows required");
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || !std::isfinite(T_[i]))
            throw InputError("dataset: non-finite value at row " + std::to_string(i));
    }

    std::vector<std::size_t> order(t_.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return t_[a] < t_[b]; });

    std::vector<double> ts(t_.size()), Ts(T_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        ts[i] = t_[order[i]];
        Ts[i] = T_[order[i]];
    }
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (ts[i] == ts[i - 1])
            throw InputError("dataset: duplicate abscissa t = " + std::to_string(ts[i]));
    }
    t_ = std::move(ts);
    T_ = std::move(Ts);
}

Dataset Dataset::reflect_t() const {
    std::vector<double> t(size()), T(size());
    for (std::size_t i = 0; i < size(); ++i) {
        t[i] = -t_[size() - 1 - i];
        T[i] = T_[size() - 1 - i];
    }
    return Dataset(std::move(t), std::move(T));
}

Dataset Dataset::negate_T() const {
    std::vector<double> T(size());
    for (std::size_t i = 0; i < size(); ++i) T[i] = -T_[i];
    return Dataset(t_, std::move(T));
}

Dataset Dataset::load(std::istream& in) {
    std::vector<double> t, T;
    std::string line;
    std::size_t lineno = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        auto fields = split_fields(line);
        if (fields.empty()) continue;

        double a = 0.0, b = 0.0;
        const bool numeric = fields.size() == 2 && parse_double(fields[0], a) && parse_double(fields[1], b);
        if (!numeric) {
            // A single leading non-numeric row is a header.
            if (first_content_row) {
                first_content_row = false;
                continue;
            }
            throw InputError("dataset: line " + std::to_string(lineno) +
                             ": expected two numeric columns");
        }
        first_content_row = false;
        t.push_back(a);
        T.push_back(b);
    }
    if (t.size() < 2)
        throw InputError("dataset: fewer than 2 data rows");
    return Dataset(std::move(t), std::move(T));
}

Dataset Dataset::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("dataset: cannot open '" + path + "'");
    return load(in);
}

void Dataset::serialize(std::ostream& out) const {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < size(); ++i)
        out << t_[i] << ',' << T_[i] << '\n';
}

} // namespace expfit
