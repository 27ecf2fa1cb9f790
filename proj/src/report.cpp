#include "gaudin_pair/report.hpp"

#include <charconv>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace gaudin_pair {

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string csv_header(int levels) {
  std::string header = "sector,class,root_index,root_re,root_im,energy,residual";
  for (int j = 1; j <= levels; ++j) header += ",e_" + std::to_string(j);
  return header;
}

std::string format_csv_row(const CsvRow& row) {
  std::string line = std::to_string(row.sector) + "," + row.state_class + "," + std::to_string(row.root_index) +
                     "," + format_double(row.root_re) + "," + format_double(row.root_im) + "," +
                     format_double(row.energy) + "," + format_double(row.residual);
  for (double e : row.eigenvalues) line += "," + format_double(e);
  return line;
}

namespace {

template <typename T>
T field_value(const std::string& text, const char* name) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw DomainError(std::string("bad CSV field ") + name + ": '" + text + "'");
  return value;
}

}  // namespace

CsvRow parse_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (fields.size() < 7) throw DomainError("CSV row needs at least 7 fields: '" + line + "'");
  CsvRow row;
  row.sector = field_value<int>(fields[0], "sector");
  row.state_class = fields[1];
  row.root_index = field_value<int>(fields[2], "root_index");
  row.root_re = field_value<double>(fields[3], "root_re");
  row.root_im = field_value<double>(fields[4], "root_im");
  row.energy = field_value<double>(fields[5], "energy");
  row.residual = field_value<double>(fields[6], "residual");
  for (std::size_t i = 7; i < fields.size(); ++i) row.eigenvalues.push_back(field_value<double>(fields[i], "e_j"));
  return row;
}

std::vector<CsvRow> record_rows(const EigenRecord& record) {
  CsvRow base;
  base.sector = record.sector;
  base.state_class = to_string(record.state_class);
  base.energy = record.energy;
  base.residual = record.max_residual();
  base.eigenvalues = record.invariant_eigenvalues;
  std::vector<CsvRow> rows;
  if (record.roots.empty()) {
    rows.push_back(base);
    return rows;
  }
  for (std::size_t k = 0; k < record.roots.size(); ++k) {
    CsvRow row = base;
    row.root_index = static_cast<int>(k);
    row.root_re = record.roots[k].real();
    row.root_im = record.roots[k].imag();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> oracle_rows(const OracleSpectrum& spectrum) {
  std::vector<CsvRow> rows;
  for (Index i = 0; i < spectrum.energies.size(); ++i) {
    CsvRow row;
    row.sector = spectrum.sector;
    row.state_class = "oracle";
    row.energy = spectrum.energies(i);
    row.residual = spectrum.max_residual;
    for (Index j = 0; j < spectrum.invariant_eigenvalues.cols(); ++j)
      row.eigenvalues.push_back(spectrum.invariant_eigenvalues(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(std::ostream& out, int levels, const std::vector<CsvRow>& rows) {
  out << csv_header(levels) << '\n';
  for (const auto& row : rows) out << format_csv_row(row) << '\n';
}

namespace {

std::string equations_used(StateClass state_class) {
  switch (state_class) {
    case StateClass::talmi_zero: return "zero-class";
    case StateClass::hole_zero: return "zero-class (hole)";
    case StateClass::generic: return "generic";
    case StateClass::richardson: return "Richardson";
    case StateClass::empty:
    case StateClass::full: return "none";
  }
  return "?";
}

std::string short_number(double value, int precision = 8) {
  std::ostringstream s;
  s << std::setprecision(precision) << value;
  return s.str();
}

std::string short_complex(Complex z) {
  if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z.real()))) return short_number(z.real());
  return short_number(z.real()) + (z.imag() < 0 ? "-" : "+") + short_number(std::abs(z.imag())) + "i";
}

void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> width;
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) line += "  ";
      line += row[c] + std::string(width[c] - row[c].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
}

}  // namespace

void write_record_table(std::ostream& out, const std::vector<EigenRecord>& records) {
  std::vector<std::vector<std::string>> cells{{"N", "class", "equations", "roots", "e_j", "energy", "residual", "oracle"}};
  for (const auto& r : records) {
    std::string roots;
    for (const Complex z : r.roots) roots += (roots.empty() ? "" : " ") + short_complex(z);
    std::string eig;
    for (double e : r.invariant_eigenvalues) eig += (eig.empty() ? "" : " ") + short_number(e);
    const std::string match = !r.oracle_match ? "-" : (*r.oracle_match ? "yes" : "NO");
    cells.push_back({std::to_string(r.sector), to_string(r.state_class), equations_used(r.state_class),
                     roots.empty() ? "-" : roots, eig.empty() ? "-" : eig, short_number(r.energy, 12),
                     short_number(r.max_residual(), 2), match});
  }
  print_table(out, cells);
}

void write_oracle_table(std::ostream& out, const std::vector<OracleSpectrum>& spectra) {
  std::vector<std::vector<std::string>> cells{{"N", "energy", "e_j"}};
  for (const auto& s : spectra)
    for (Index i = 0; i < s.energies.size(); ++i) {
      std::string eig;
      for (Index j = 0; j < s.invariant_eigenvalues.cols(); ++j)
        eig += (j ? " " : "") + short_number(s.invariant_eigenvalues(i, j));
      cells.push_back({std::to_string(s.sector), short_number(s.energies(i), 12), eig.empty() ? "-" : eig});
    }
  print_table(out, cells);
}

void write_audit(std::ostream& out, const AuditReport& audit, bool csv) {
  if (csv) {
    out << "check,value,tolerance,kind,status\n";
    for (const auto& e : audit.entries) {
      const bool ok = e.must_vanish ? e.value < e.tolerance : e.value > e.tolerance;
      out << '"' << e.name << "\"," << format_double(e.value) << ',' << format_double(e.tolerance) << ','
          << (e.must_vanish ? "below" : "above") << ',' << (ok ? "pass" : "FAIL") << '\n';
    }
    return;
  }
  std::vector<std::vector<std::string>> cells{{"check", "value", "bound", "status"}};
  for (const auto& e : audit.entries) {
    const bool ok = e.must_vanish ? e.value < e.tolerance : e.value > e.tolerance;
    cells.push_back({e.name, short_number(e.value, 3), (e.must_vanish ? "< " : "> ") + short_number(e.tolerance, 3),
                     ok ? "pass" : "FAIL"});
  }
  print_table(out, cells);
}

void write_coverage(std::ostream& out, const SpectrumReport& report, bool csv) {
  if (csv) {
    out << "sector,dimension,records,matched,unmatched\n";
    for (const auto& c : report.coverage)
      out << c.sector << ',' << c.dimension << ',' << c.records << ',' << c.matched << ',' << c.unmatched_records
          << '\n';
    return;
  }
  std::vector<std::vector<std::string>> cells{{"N", "dim", "records", "matched", "unmatched"}};
  for (const auto& c : report.coverage)
    cells.push_back({std::to_string(c.sector), std::to_string(c.dimension), std::to_string(c.records),
                     std::to_string(c.matched), std::to_string(c.unmatched_records)});
  print_table(out, cells);
  out << "coverage " << short_number(100.0 * report.coverage_fraction, 6) << "%\n";
}

}  // namespace gaudin_pair
