#include "tvpvarx/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tvpvarx {

QuarterDate QuarterDate::parse(const std::string& text) {
  int year = 0, q = 0, month = 0, day = 0;
  char sep = 0;
  if (std::sscanf(text.c_str(), "%d-%c%d", &year, &sep, &q) == 3 && (sep == 'Q' || sep == 'q')) {
    if (q < 1 || q > 4) throw ParseError("bad quarter in date '" + text + "'");
    return {year, q};
  }
  if (std::sscanf(text.c_str(), "%d-%d-%d", &year, &month, &day) == 3) {
    if (month < 1 || month > 12) throw ParseError("bad month in date '" + text + "'");
    return {year, (month - 1) / 3 + 1};
  }
  throw ParseError("unparseable date '" + text + "' (expected YYYY-Qn or YYYY-MM-DD)");
}

QuarterDate QuarterDate::next() const {
  return quarter == 4 ? QuarterDate{year + 1, 1} : QuarterDate{year, quarter + 1};
}

std::string QuarterDate::str() const {
  return std::to_string(year) + "-Q" + std::to_string(quarter);
}

void Dataset::finalize() {
  const int rows = static_cast<int>(levels.rows());
  if (rows != static_cast<int>(dates.size()))
    throw ParseError("dataset: date count does not match level rows");
  if (rows < 2) throw DataError("dataset: need at least two level rows");
  if (static_cast<int>(names.size()) != levels.cols())
    throw ParseError("dataset: name count does not match level columns");
  for (int r = 1; r < rows; ++r) {
    if (!(dates[r - 1].next() == dates[r]))
      throw DateGap("dataset: gap or disorder at row " + std::to_string(r) + " (" +
                    dates[r - 1].str() + " -> " + dates[r].str() + ")");
  }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < levels.cols(); ++c)
      if (!(levels(r, c) > 0.0))
        throw NonPositiveLevel("dataset: non-positive level in row " + std::to_string(r) +
                               ", column '" + names[c] + "'");
  const int nvar = n();
  y.resize(rows - 1, nvar);
  x.resize(rows - 1);
  for (int r = 1; r < rows; ++r) {
    for (int c = 0; c < nvar; ++c) y(r - 1, c) = std::log(levels(r, c) / levels(r - 1, c));
    x(r - 1) = std::log(levels(r, nvar) / levels(r - 1, nvar));
  }
}

Dataset Dataset::from_levels(std::vector<QuarterDate> dates, Matrix levels,
                             std::vector<std::string> names) {
  Dataset d;
  d.dates = std::move(dates);
  d.levels = std::move(levels);
  d.names = std::move(names);
  d.finalize();
  return d;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    // trim surrounding whitespace
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Dataset ingest_csv(const std::string& path, const ColumnMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty data file '" + path + "'");
  const auto header = split_csv_line(line);
  if (header.size() < 3)
    throw ParseError("header must name a date column, at least one endogenous column and the "
                     "exogenous column");

  auto find_column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw MissingColumn("column '" + name + "' not found in header");
    return static_cast<int>(it - header.begin());
  };

  const int exo_col = mapping.exogenous.empty() ? static_cast<int>(header.size()) - 1
                                                : find_column(mapping.exogenous);
  std::vector<int> endo_cols;
  if (mapping.endogenous.empty()) {
    for (int c = 1; c < static_cast<int>(header.size()); ++c)
      if (c != exo_col) endo_cols.push_back(c);
  } else {
    for (const auto& name : mapping.endogenous) endo_cols.push_back(find_column(name));
  }
  if (endo_cols.empty()) throw MissingColumn("no endogenous columns identified");

  std::vector<QuarterDate> dates;
  std::vector<std::vector<double>> rows;
  int row_index = 0;
  while (std::getline(in, line)) {
    ++row_index;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError("row " + std::to_string(row_index) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));
    dates.push_back(QuarterDate::parse(fields[0]));
    std::vector<double> vals;
    for (int c : endo_cols) {
      try {
        vals.push_back(std::stod(fields[c]));
      } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row_index) + ": unparseable value '" +
                         fields[c] + "' in column '" + header[c] + "'");
      }
    }
    try {
      vals.push_back(std::stod(fields[exo_col]));
    } catch (const std::exception&) {
      throw ParseError("row " + std::to_string(row_index) + ": unparseable value '" +
                       fields[exo_col] + "' in column '" + header[exo_col] + "'");
    }
    rows.push_back(std::move(vals));
  }
  if (rows.size() < 2) throw DataError("data file holds fewer than two rows");

  Matrix levels(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int r = 0; r < levels.rows(); ++r)
    for (int c = 0; c < levels.cols(); ++c) levels(r, c) = rows[r][c];

  std::vector<std::string> names;
  for (int c : endo_cols) names.push_back(header[c]);
  names.push_back(header[exo_col]);

  return Dataset::from_levels(std::move(dates), std::move(levels), std::move(names));
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "date";
  for (const auto& name : data.names) out << ',' << name;
  out << '\n';
  char buf[32];
  for (int r = 0; r < data.levels.rows(); ++r) {
    out << data.dates[r].str();
    for (int c = 0; c < data.levels.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", data.levels(r, c));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace tvpvarx
