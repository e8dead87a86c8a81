#include "stablefit/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <boost/algorithm/string/trim.hpp>
#include <boost/tokenizer.hpp>

#include "stablefit/errors.hpp"
#include "stablefit/gof.hpp"
#include "stablefit/simd/kernels.hpp"

namespace stablefit {

namespace {

using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;

std::vector<std::string> split_row(const std::string& line, std::size_t row) {
  std::vector<std::string> fields;
  try {
    Tokenizer tok(line, boost::escaped_list_separator<char>('\\', ',', '"'));
    for (const auto& f : tok) fields.push_back(boost::algorithm::trim_copy(f));
  } catch (const boost::escaped_list_error& e) {
    throw ParseError(row, std::string("malformed CSV row: ") + e.what());
  }
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw SchemaError("missing column \"" + name + "\" in header");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

std::chrono::year_month_day parse_iso_date(const std::string& text) {
  auto bad = [&] { return DomainError("date", "expected YYYY-MM-DD, got \"" + text + "\""); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  int y = 0;
  unsigned m = 0, d = 0;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    if (ec != std::errc() || ptr != text.data() + pos + len) throw bad();
  };
  field(0, 4, y);
  field(5, 2, m);
  field(8, 2, d);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw bad();
  return ymd;
}

std::string format_iso_date(const std::chrono::year_month_day& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

PriceSeries load_price_csv(const std::string& path, const CsvSchema& schema, std::string asset_id) {
  std::ifstream in(path);
  if (!in) throw FileError(path);

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // A UTF-8 byte order mark is tolerated on the header line.
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (boost::algorithm::trim_copy(line).empty()) continue;
    header = split_row(line, 0);
    break;
  }
  if (header.empty()) throw EmptyFileError("file has no header row: " + path);
  const std::size_t date_col = find_column(header, schema.date_column);
  const std::size_t close_col = find_column(header, schema.close_column);

  PriceSeries out;
  out.asset_id = asset_id.empty() ? std::filesystem::path(path).stem().string() : std::move(asset_id);
  std::vector<std::size_t> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (boost::algorithm::trim_copy(line).empty()) continue;
    ++row;
    const auto fields = split_row(line, row);
    if (fields.size() <= std::max(date_col, close_col)) throw ParseError(row, "too few fields");
    PriceObservation obs;
    try {
      obs.date = parse_iso_date(fields[date_col]);
    } catch (const DomainError&) {
      throw ParseError(row, "invalid date \"" + fields[date_col] + "\"");
    }
    const std::string& close_text = fields[close_col];
    if (close_text.empty() || close_text == "null" || close_text == "NA") throw ParseError(row, "missing price");
    const auto close = parse_number(close_text);
    if (!close || !std::isfinite(*close)) throw ParseError(row, "invalid price \"" + close_text + "\"");
    if (!(*close > 0.0)) throw ParseError(row, "non-positive price");
    obs.close = *close;
    out.observations.push_back(obs);
    rows.push_back(row);
  }
  if (out.observations.empty()) throw EmptyFileError("file has no data rows: " + path);

  std::vector<std::size_t> order(out.observations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return out.observations[a].date < out.observations[b].date;
  });
  std::vector<PriceObservation> sorted;
  sorted.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& obs = out.observations[order[i]];
    if (i > 0 && obs.date == sorted.back().date) {
      throw ParseError(std::max(rows[order[i]], rows[order[i - 1]]), "duplicate date " + format_iso_date(obs.date));
    }
    sorted.push_back(obs);
  }
  out.observations = std::move(sorted);
  return out;
}

ReturnSeries log_returns(const PriceSeries& prices) {
  if (prices.size() < 2) throw InsufficientDataError(prices.size(), 2, "log returns");
  ReturnSeries out;
  out.asset_id = prices.asset_id;
  out.returns.reserve(prices.size() - 1);
  for (std::size_t i = 1; i < prices.size(); ++i) {
    out.returns.push_back(std::log(prices.observations[i].close) - std::log(prices.observations[i - 1].close));
  }
  out.first_date = format_iso_date(prices.observations.front().date);
  out.last_date = format_iso_date(prices.observations.back().date);
  return out;
}

SummaryStats summary_stats(std::span<const double> returns) {
  if (returns.size() < 4) throw InsufficientDataError(returns.size(), 4, "summary statistics");
  for (double v : returns) {
    if (!std::isfinite(v)) throw DomainError("returns", "returns must be finite");
  }
  const double n = static_cast<double>(returns.size());
  // Two passes: a rough center first, then deviations from the mean.
  const double rough = simd::moment_sums(returns, 0.0).d1 / n;
  const auto pass1 = simd::moment_sums(returns, rough);
  const double mean = rough + pass1.d1 / n;
  const auto s = simd::moment_sums(returns, mean);
  const double m2 = s.d2 / n;
  const double m3 = s.d3 / n;
  const double m4 = s.d4 / n;
  if (!(m2 > 0.0)) throw DegenerateDataError("summary statistics: returns have zero variance");
  SummaryStats out;
  out.n_obs = returns.size();
  out.mean = mean;
  out.std_dev = std::sqrt(s.d2 / (n - 1.0));
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2);
  const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
  out.min = *lo;
  out.max = *hi;
  out.mean = std::clamp(out.mean, out.min, out.max);
  out.jarque_bera = jarque_bera(out);
  return out;
}

}  // namespace stablefit
