#pragma once

// Chain persistence and delimited-text writers for tables and grids.
//
// Chain file: a versioned key=value header (self-describing: a reader needs
// nothing else to parse the records), an `end_header` line, then one retained
// draw per line. Record fields, in order: iteration, theta (n), coefficient
// path (T_est x dim, row-major), alpha path, h path, Q, Qtilde, G blocks,
// W (all row-major), indicators (T_est x n). Doubles printed as %.17g so the
// round trip is exact.

#include <string>

#include "tvpvarx/analysis.hpp"
#include "tvpvarx/benchmarks.hpp"
#include "tvpvarx/gibbs.hpp"

namespace tvpvarx {

void write_chain(const Chain& chain, const std::string& path);
Chain read_chain(const std::string& path);

void write_error_tables(const BenchmarkResult& result, const std::string& path);
void write_irf_grid(const IrfGrid& grid, const std::string& path);

struct GrowthRow {
  int origin = 0;  // log-difference time index
  GrowthSummary summary;
};
void write_growth(const std::vector<GrowthRow>& rows,
                  const std::vector<std::string>& variables, const std::string& path);

void write_forecast(const ForecastSet& fs, const std::vector<std::string>& variables,
                    const std::string& path);

void write_text(const std::string& content, const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace tvpvarx
