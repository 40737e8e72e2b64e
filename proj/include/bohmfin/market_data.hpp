#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bohmfin/error.hpp"

namespace bohmfin {

// Calendar date, ordered lexicographically on (year, month, day).
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

bool is_valid_date(const Date& d);
std::string to_iso_string(const Date& d);
Date next_calendar_day(const Date& d);

enum class DateFormat { iso, dmy }; // YYYY-MM-DD or DD/MM/YYYY

// Dated, strictly positive price observations for one instrument.
// Dates strictly increasing, all prices > 0, length >= 2.
struct PriceSeries {
  std::string instrument_id;
  std::vector<Date> dates;
  std::vector<double> prices;

  std::size_t size() const { return prices.size(); }
};

// Log-returns at integer time scale tau:
//   values[k] = ln(prices[k*stride + tau] / prices[k*stride])
struct ReturnSeries {
  int scale_tau = 1;
  int stride = 1;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Column mapping and parsing options for delimited price files.
// Delimiter is auto-detected among comma / semicolon / tab from the
// header row; exactly one header row is expected.
struct LoadFormat {
  std::string date_column = "date";
  std::string price_column = "price";
  DateFormat date_format = DateFormat::iso;
};

struct LoadResult {
  PriceSeries series;
  std::size_t dropped_rows = 0; // unparsable / missing / non-positive price
};

// Parses a delimited text file into a PriceSeries. Rows with a bad or
// non-positive price are dropped and counted; a non-monotonic date is an
// error naming the offending row. Throws Error on unreadable files and
// on fewer than 2 valid rows.
LoadResult load_price_series(const std::filesystem::path& path,
                             const LoadFormat& format = {});

// Returns at scale tau with the given sampling stride. Requires
// tau >= 1, stride >= 1 and len(prices) > tau.
ReturnSeries log_returns(const PriceSeries& series, int tau, int stride = 1);

void validate(const PriceSeries& series);

} // namespace bohmfin
