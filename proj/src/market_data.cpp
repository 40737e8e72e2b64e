#include "bohmfin/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bohmfin {

namespace {

std::string trim(std::string s)
{
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split(const std::string& line, char delim)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

char detect_delimiter(const std::string& header)
{
  const char candidates[] = {',', ';', '\t'};
  char best = ',';
  std::size_t best_count = 0;
  for (char c : candidates) {
    auto n = static_cast<std::size_t>(std::count(header.begin(), header.end(), c));
    if (n > best_count) {
      best_count = n;
      best = c;
    }
  }
  return best;
}

bool parse_int(const std::string& s, int& out)
{
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_date(const std::string& raw, DateFormat fmt, Date& out)
{
  const std::string s = trim(raw);
  char sep = (fmt == DateFormat::iso) ? '-' : '/';
  auto parts = split(s, sep);
  if (parts.size() != 3) return false;
  int a = 0, b = 0, c = 0;
  if (!parse_int(parts[0], a) || !parse_int(parts[1], b) || !parse_int(parts[2], c))
    return false;
  Date d;
  if (fmt == DateFormat::iso) {
    d = Date{a, b, c};
  } else {
    d = Date{c, b, a};
  }
  if (!is_valid_date(d)) return false;
  out = d;
  return true;
}

bool parse_price(const std::string& raw, double& out)
{
  const std::string s = trim(raw);
  if (s.empty()) return false;
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

} // namespace

bool is_valid_date(const Date& d)
{
  using namespace std::chrono;
  return year_month_day{year{d.year}, month{static_cast<unsigned>(d.month)},
                        day{static_cast<unsigned>(d.day)}}
    .ok();
}

std::string to_iso_string(const Date& d)
{
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

Date next_calendar_day(const Date& d)
{
  using namespace std::chrono;
  year_month_day ymd{year{d.year}, month{static_cast<unsigned>(d.month)},
                     day{static_cast<unsigned>(d.day)}};
  year_month_day next{sys_days(ymd) + days{1}};
  return Date{int(next.year()), int(unsigned(next.month())),
              int(unsigned(next.day()))};
}

void validate(const PriceSeries& series)
{
  if (series.dates.size() != series.prices.size())
    throw Error(ErrorKind::invalid_argument,
                "price series: dates/prices length mismatch");
  if (series.size() < 2)
    throw Error(ErrorKind::insufficient_data,
                "price series: insufficient data (need at least 2 rows)");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!(series.prices[i] > 0.0))
      throw Error(ErrorKind::invalid_argument,
                  "price series: non-positive price at index " + std::to_string(i));
    if (i > 0 && !(series.dates[i - 1] < series.dates[i]))
      throw Error(ErrorKind::invalid_argument,
                  "price series: dates not strictly increasing at index " +
                    std::to_string(i));
  }
}

LoadResult load_price_series(const std::filesystem::path& path,
                             const LoadFormat& format)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::io, "cannot open input file: " + path.string());

  std::string header;
  if (!std::getline(in, header))
    throw Error(ErrorKind::parse, "empty input file: " + path.string());
  if (!header.empty() && header.back() == '\r') header.pop_back();

  const char delim = detect_delimiter(header);
  auto columns = split(header, delim);
  auto find_col = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw Error(ErrorKind::parse,
                "column '" + name + "' not found in header of " + path.string());
  };
  const std::size_t date_idx = find_col(format.date_column);
  const std::size_t price_idx = find_col(format.price_column);

  LoadResult result;
  result.series.instrument_id = path.stem().string();

  std::string line;
  std::size_t row = 1; // header is row 1
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split(line, delim);
    if (fields.size() <= std::max(date_idx, price_idx)) {
      ++result.dropped_rows;
      continue;
    }
    Date date;
    double price = 0.0;
    if (!parse_date(fields[date_idx], format.date_format, date) ||
        !parse_price(fields[price_idx], price) || !(price > 0.0)) {
      ++result.dropped_rows;
      continue;
    }
    if (!result.series.dates.empty() && !(result.series.dates.back() < date))
      throw Error(ErrorKind::parse,
                  "non-monotonic date at row " + std::to_string(row) + " (" +
                    to_iso_string(date) + ") in " + path.string());
    result.series.dates.push_back(date);
    result.series.prices.push_back(price);
  }

  if (result.series.size() < 2)
    throw Error(ErrorKind::insufficient_data,
                "insufficient data: fewer than 2 valid rows in " + path.string());
  return result;
}

ReturnSeries log_returns(const PriceSeries& series, int tau, int stride)
{
  if (tau < 1)
    throw Error(ErrorKind::invalid_argument, "tau must be >= 1");
  if (stride < 1)
    throw Error(ErrorKind::invalid_argument, "stride must be >= 1");
  const std::size_t len = series.size();
  if (len < 2)
    throw Error(ErrorKind::insufficient_data, "price series too short");
  if (static_cast<std::size_t>(tau) >= len)
    throw Error(ErrorKind::insufficient_data,
                "tau (" + std::to_string(tau) + ") >= series length (" +
                  std::to_string(len) + ")");

  ReturnSeries out;
  out.scale_tau = tau;
  out.stride = stride;
  const std::size_t last_start = len - 1 - static_cast<std::size_t>(tau);
  out.values.reserve(last_start / static_cast<std::size_t>(stride) + 1);
  for (std::size_t k = 0; k * stride <= last_start; ++k) {
    const std::size_t i = k * static_cast<std::size_t>(stride);
    out.values.push_back(std::log(series.prices[i + tau] / series.prices[i]));
  }
  return out;
}

} // namespace bohmfin
