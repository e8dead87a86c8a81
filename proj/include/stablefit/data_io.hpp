#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stablefit/series.hpp"

namespace stablefit {

struct PriceObservation {
  std::chrono::year_month_day date;
  double close = 0.0;
};

/// Daily closes of one asset, dates strictly increasing.
struct PriceSeries {
  std::string asset_id;
  std::vector<PriceObservation> observations;

  std::size_t size() const noexcept { return observations.size(); }
};

/// Column names looked up in the header row.
struct CsvSchema {
  std::string date_column = "Date";
  std::string close_column = "Close";
};

/// Moment summary of a return series. `kurtosis` is raw (3 for a Gaussian).
struct SummaryStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double min = 0.0;
  double max = 0.0;
  double jarque_bera = 0.0;
  std::size_t n_obs = 0;
};

/// Read a comma-separated file with a header row. Rows are sorted by date; duplicate dates,
/// malformed dates and missing or non-positive closes throw ParseError carrying the 1-based
/// data row number (the header is row 0). Missing columns throw SchemaError, a file with
/// no data rows EmptyFileError, an unreadable path FileError. `asset_id` defaults to the
/// file stem.
PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema = {}, std::string asset_id = {});

/// Parse "YYYY-MM-DD"; throws DomainError for anything else or an impossible date.
std::chrono::year_month_day parse_iso_date(const std::string& text);
std::string format_iso_date(const std::chrono::year_month_day& d);

/// r_i = ln c_{i+1} - ln c_i. Throws InsufficientDataError for fewer than two prices.
ReturnSeries log_returns(const PriceSeries& prices);

/// Mean, (n-1) standard deviation, moment skewness and raw kurtosis (1/n central moments),
/// range and Jarque-Bera. Throws InsufficientDataError for n < 4, DomainError for
/// non-finite values.
SummaryStats summary_stats(std::span<const double> returns);
inline SummaryStats summary_stats(const ReturnSeries& s) { return summary_stats(s.returns); }

}  // namespace stablefit
