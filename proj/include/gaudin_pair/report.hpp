#ifndef GAUDIN_PAIR_REPORT_HPP
#define GAUDIN_PAIR_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "gaudin_pair/oracle.hpp"
#include "gaudin_pair/spectrum.hpp"

namespace gaudin_pair {

/// One machine-output line. Records with several roots span several rows
/// (one per root); rows without roots carry root_index -1 and a zero root.
struct CsvRow {
  int sector = 0;
  std::string state_class;
  int root_index = -1;
  double root_re = 0.0;
  double root_im = 0.0;
  double energy = 0.0;
  double residual = 0.0;
  std::vector<double> eigenvalues;

  bool operator==(const CsvRow&) const = default;
};

/// %.17g, so every double survives a text round trip.
std::string format_double(double value);

std::string csv_header(int levels);
std::string format_csv_row(const CsvRow& row);
/// Inverse of format_csv_row. Throws DomainError on malformed input.
CsvRow parse_csv_row(const std::string& line);

/// Rows for one record; residual is the record's worst eigen-equation residual.
std::vector<CsvRow> record_rows(const EigenRecord& record);
/// Rows for one oracle eigenvector.
std::vector<CsvRow> oracle_rows(const OracleSpectrum& spectrum);

void write_csv(std::ostream& out, int levels, const std::vector<CsvRow>& rows);

/// Aligned table: sector, class, equations used, roots, e_j, energy, checks.
void write_record_table(std::ostream& out, const std::vector<EigenRecord>& records);
void write_oracle_table(std::ostream& out, const std::vector<OracleSpectrum>& spectra);
void write_audit(std::ostream& out, const AuditReport& audit, bool csv);
void write_coverage(std::ostream& out, const SpectrumReport& report, bool csv);

}  // namespace gaudin_pair

#endif  // GAUDIN_PAIR_REPORT_HPP
