#include "fxexp/csv.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace fxexp::csv {

std::string format_real(long double v) { return fmt::format("{:.12g}", v); }

void write_sweep(std::ostream& out, std::span<const SweepRow> rows)
{
    out << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        const ExpConfig& c = r.cfg;
        fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{}\n", c.out_precision, c.mult_precision, c.lut_precision,
                   to_string(c.arithmetic), to_string(c.variant), c.cubic_width, c.square_width,
                   format_real(r.report.max_abs_error), format_real(r.report.max_ulps), r.report.argmax_raw,
                   r.report.samples);
    }
}

void write_table2(std::ostream& out, std::span<const TermPrecisionCell> cells)
{
    out << kTable2Header << '\n';
    for (const TermPrecisionCell& c : cells)
        fmt::print(out, "{},{},{}\n", c.cubic_width, c.square_width, c.accuracy.bits);
}

void write_fig1(std::ostream& out, std::span<const RangeError> rows)
{
    out << kFig1Header << '\n';
    for (const RangeError& r : rows)
        fmt::print(out, "{},{},{},{}\n", r.terms, r.range_pow, format_real(r.max_abs_error), r.accuracy.bits);
}

void write_table1(std::ostream& out, std::span<const DerivedRow> rows)
{
    out << kTable1Header << '\n';
    for (const DerivedRow& r : rows)
        fmt::print(out, "{},{},{},{}\n", to_string(r.function), r.precision, format_real(r.report.max_abs_error),
                   format_real(r.report.max_ulps));
}

void write_coeff(std::ostream& out, const CoeffScan& scan)
{
    out << kCoeffHeader << '\n';
    const auto row = [&](const char* name, const ErrorReport& r) {
        fmt::print(out, "{},{},{},{},{},{}\n", name, r.precision, format_real(r.max_abs_error),
                   format_real(r.max_ulps), r.argmax_raw, r.samples);
    };
    row("shift_add", scan.shift_add);
    row("true_cubic", scan.true_cubic);
}

std::size_t Table::column(const std::string& name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::out_of_range("no CSV column named " + name);
}

std::string Table::joined_header() const
{
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i)
        s += (i ? "," : "") + header[i];
    return s;
}

namespace {

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos)
            return fields;
        start = comma + 1;
    }
}

}  // namespace

Table read(std::istream& in)
{
    Table t;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty CSV");
    t.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto fields = split_line(line);
        if (fields.size() != t.header.size())
            throw std::runtime_error("ragged CSV row: " + line);
        t.rows.push_back(std::move(fields));
    }
    return t;
}

}  // namespace fxexp::csv
