// csv.hpp — Fixed-format CSV emission (9 significant digits, "," and "\n")

#pragma once

#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qbath::io {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    // '#'-prefixed line, emitted verbatim
    void comment(std::string_view text) { os_ << "# " << text << '\n'; }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << '\n';
    }

    CsvWriter& cell(double v) { return raw(format_number(v)); }
    CsvWriter& cell(std::complex<double> v) { return cell(v.real()).cell(v.imag()); }
    CsvWriter& cell(std::string_view s) { return raw(s); }
    CsvWriter& cell(const char* s) { return raw(s); }
    CsvWriter& cell(int v) { return raw(std::to_string(v)); }
    CsvWriter& cell(std::size_t v) { return raw(std::to_string(v)); }

    void end_row() {
        os_ << '\n';
        first_ = true;
    }

private:
    CsvWriter& raw(std::string_view s) {
        if (!first_) os_ << ',';
        os_ << s;
        first_ = false;
        return *this;
    }

    std::ostream& os_;
    bool first_{true};
};

// Column names for a complex quantity.
inline std::vector<std::string> complex_columns(const std::string& name) { return {name + "_re", name + "_im"}; }

} // namespace qbath::io
