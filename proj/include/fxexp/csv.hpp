// CSV emitters for every dataset, plus a minimal reader used to check that
// emitted files parse back against their schema.
//
//   sweep / fig5  p,m,l,mode,variant,wc,ws,max_abs_err,max_ulps,argmax_raw,samples
//   table2        wc,ws,accuracy_bits
//   fig1          terms,range_pow,max_abs_err,accuracy_bits
//   table1        function,precision,max_abs_err,ulps
//   coeff         polynomial,p,max_abs_err,max_ulps,argmax_raw,samples

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fxexp/analysis.hpp"

namespace fxexp::csv {

inline constexpr const char* kSweepHeader = "p,m,l,mode,variant,wc,ws,max_abs_err,max_ulps,argmax_raw,samples";
inline constexpr const char* kTable2Header = "wc,ws,accuracy_bits";
inline constexpr const char* kFig1Header = "terms,range_pow,max_abs_err,accuracy_bits";
inline constexpr const char* kTable1Header = "function,precision,max_abs_err,ulps";
inline constexpr const char* kCoeffHeader = "polynomial,p,max_abs_err,max_ulps,argmax_raw,samples";

/// Locale-independent, 12 significant digits.
std::string format_real(long double v);

void write_sweep(std::ostream& out, std::span<const SweepRow> rows);
void write_table2(std::ostream& out, std::span<const TermPrecisionCell> cells);
void write_fig1(std::ostream& out, std::span<const RangeError> rows);
void write_table1(std::ostream& out, std::span<const DerivedRow> rows);
void write_coeff(std::ostream& out, const CoeffScan& scan);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range if absent.
    [[nodiscard]] std::size_t column(const std::string& name) const;
    [[nodiscard]] std::string joined_header() const;
};

/// Plain comma-separated values, no quoting. Throws std::runtime_error on ragged rows.
Table read(std::istream& in);

}  // namespace fxexp::csv
