#pragma once

// Quarterly dataset: positive level series for the endogenous variables and
// one exogenous variable, plus their log-difference transforms.

#include <string>
#include <vector>

#include "tvpvarx/numkit.hpp"

namespace tvpvarx {

struct QuarterDate {
  int year = 1980;
  int quarter = 1;  // 1..4

  // Accepts "1995-Q1" and "1995-03-01" (month mapped to its quarter).
  static QuarterDate parse(const std::string& text);
  QuarterDate next() const;
  bool operator==(const QuarterDate& o) const { return year == o.year && quarter == o.quarter; }
  bool operator<(const QuarterDate& o) const {
    return year != o.year ? year < o.year : quarter < o.quarter;
  }
  std::string str() const;
};

struct ColumnMapping {
  std::vector<std::string> endogenous;  // empty: every column between date and last
  std::string exogenous;                // empty: last column
};

struct Dataset {
  std::vector<QuarterDate> dates;   // one per level row
  Matrix levels;                    // rows x (n+1); endogenous columns then exogenous
  std::vector<std::string> names;   // column names matching `levels`

  Matrix y;  // log-differences of the endogenous levels, (rows-1) x n
  Vector x;  // log-differences of the exogenous level

  int n() const { return static_cast<int>(levels.cols()) - 1; }
  int size() const { return static_cast<int>(y.rows()); }  // log-difference count

  // Validates invariants (gap-free quarters, positive levels) and computes
  // the log-differences. Throws the ingestion errors with row indices.
  void finalize();

  static Dataset from_levels(std::vector<QuarterDate> dates, Matrix levels,
                             std::vector<std::string> names);
};

Dataset ingest_csv(const std::string& path, const ColumnMapping& mapping = {});
void write_csv(const Dataset& data, const std::string& path);

}  // namespace tvpvarx
