#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace expfit {

/// Immutable discrete sample (t_0 < t_1 < ... < t_{n-1}, T_i).
///
/// Construction sorts rows by t and validates: n >= 2, all values finite,
/// abscissae pairwise distinct. Fitting routines additionally require
/// n >= 3 (or exactly 4 for the quartet solver) and enforce it themselves.
class Dataset {
public:
    Dataset(std::vector<double> t, std::vector<double> T);

    std::size_t size() const { return t_.size(); }
    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& T() const { return T_; }

    /// Mirror of the abscissae: rows become (-t_{n-1-i}, T_{n-1-i}).
    /// Involution; a model a*e^{kt}+b for the image corresponds to
    /// (a, -k, b) for the original.
    Dataset reflect_t() const;

    /// Ordinate negation: rows become (t_i, -T_i). Involution; a model
    /// (a, k, b) for the image corresponds to (-a, k, -b).
    Dataset negate_T() const;

    /// Parse a two-column text stream: one row per line, columns separated
    /// by a comma or whitespace. A single leading non-numeric row is
    /// treated as a header and skipped. Blank lines are ignored.
    static Dataset load(std::istream& in);

    /// load() applied to the named file.
    static Dataset load_file(const std::string& path);

    /// Write "t,T" rows with enough digits that load() round-trips exactly.
    void serialize(std::ostream& out) const;

private:
    std::vector<double> t_;
    std::vector<double> T_;
};

} // namespace expfit
