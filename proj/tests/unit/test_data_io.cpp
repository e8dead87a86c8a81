#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "stablefit/data_io.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/sampling.hpp"

using namespace stablefit;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("stablefit_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_SUITE("data_io") {
  TEST_CASE("two-row file") {
    const auto path = write_temp("two.csv", "Date,Close\n2017-01-01,100\n2017-01-02,105\n");
    const auto p = load_price_csv(path);
    REQUIRE(p.size() == 2);
    CHECK(p.asset_id == "stablefit_test_two");
    CHECK(format_iso_date(p.observations[1].date) == "2017-01-02");
    const auto r = log_returns(p);
    REQUIRE(r.size() == 1);
    CHECK(r.returns[0] == doctest::Approx(0.048790164169432).epsilon(1e-14));
    CHECK(r.first_date == "2017-01-01");
    CHECK(r.last_date == "2017-01-02");
  }

  TEST_CASE("row-numbered parse errors") {
    const auto path = write_temp("zero.csv", "Date,Close\n2017-01-01,100\n2017-01-02,101\n2017-01-03,0\n");
    try {
      load_price_csv(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 3);
      CHECK(e.reason() == "non-positive price");
    }
    const auto missing = write_temp("missing.csv", "Date,Close\n2017-01-01,100\n2017-01-02,\n");
    try {
      load_price_csv(missing);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
      CHECK(e.reason() == "missing price");
    }
    CHECK_THROWS_AS(load_price_csv(write_temp("baddate.csv", "Date,Close\n2017-02-30,1\n")), ParseError);
    CHECK_THROWS_AS(load_price_csv(write_temp("text.csv", "Date,Close\n2017-02-03,abc\n")), ParseError);
    CHECK_THROWS_AS(load_price_csv(write_temp("dup.csv", "Date,Close\n2017-01-02,1\n2017-01-01,2\n2017-01-02,3\n")),
                    ParseError);
  }

  TEST_CASE("schema, empty and missing files") {
    CHECK_THROWS_AS(load_price_csv(write_temp("schema.csv", "Day,Close\n2017-01-01,1\n")), SchemaError);
    CHECK_THROWS_AS(load_price_csv(write_temp("empty.csv", "")), EmptyFileError);
    CHECK_THROWS_AS(load_price_csv(write_temp("header.csv", "Date,Close\n")), EmptyFileError);
    CHECK_THROWS_AS(load_price_csv("/nonexistent/prices.csv"), FileError);
  }

  TEST_CASE("custom columns, quoting and sorting") {
    const auto path = write_temp("custom.csv",
                                 "\"Name\",day,Adj Close,price\r\n"
                                 "\"x, y\",2018-03-02,1,12.5\r\n"
                                 "z,2018-03-01,1,10\r\n"
                                 "\r\n"
                                 "z,2018-03-05,1,11\r\n");
    const auto p = load_price_csv(path, CsvSchema{"day", "price"}, "XRP");
    REQUIRE(p.size() == 3);
    CHECK(p.asset_id == "XRP");
    CHECK(p.observations[0].close == 10.0);
    CHECK(p.observations[1].close == 12.5);
    CHECK(p.observations[2].close == 11.0);
  }

  TEST_CASE("log returns") {
    PriceSeries p;
    for (int i = 1; i <= 5; ++i) p.observations.push_back({parse_iso_date("2020-01-0" + std::to_string(i)), 7.0});
    const auto r = log_returns(p);
    CHECK(r.size() == 4);
    for (double v : r.returns) CHECK(v == 0.0);
    PriceSeries one;
    one.observations.push_back({parse_iso_date("2020-01-01"), 1.0});
    CHECK_THROWS_AS(log_returns(one), InsufficientDataError);
  }

  TEST_CASE("round trip through cumulative prices") {
    const auto x = sample(StableParams{1.5, 0.2, 0.02, 0.0}, 500, 3);
    PriceSeries p;
    double log_c = std::log(250.0);
    std::chrono::sys_days day = std::chrono::year{2016} / 1 / 1;
    p.observations.push_back({day, std::exp(log_c)});
    for (double r : x) {
      day += std::chrono::days{1};
      log_c += r;
      p.observations.push_back({day, std::exp(log_c)});
    }
    const auto back = log_returns(p);
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(back.returns[i] == doctest::Approx(x[i]).epsilon(1e-12).scale(1.0));
  }

  TEST_CASE("summary statistics") {
    const std::vector<double> sym{-2.0, 2.0, -2.0, 2.0};
    const auto s = summary_stats(sym);
    CHECK(s.mean == 0.0);
    CHECK(s.skewness == 0.0);
    CHECK(s.kurtosis == doctest::Approx(1.0));
    CHECK(s.std_dev == doctest::Approx(std::sqrt(16.0 / 3.0)));
    CHECK(s.n_obs == 4);
    CHECK_THROWS_AS(summary_stats(std::vector<double>{1, 2, 3}), InsufficientDataError);
    CHECK_THROWS_AS(summary_stats(std::vector<double>{1, 1, 1, 1}), DegenerateDataError);
  }

  TEST_CASE("Gaussian kurtosis") {
    const auto x = sample(StableParams{2, 0, 1, 0}, 1000000, 8);
    CHECK(std::abs(summary_stats(x).kurtosis - 3.0) < 0.05);
  }

  TEST_CASE("summary invariances") {
    auto x = sample(StableParams{1.7, 0.5, 0.01, 0.001}, 3000, 6);
    const auto a = summary_stats(x);
    CHECK(a.min <= a.mean);
    CHECK(a.mean <= a.max);
    CHECK(a.kurtosis >= 1.0 + a.skewness * a.skewness);
    std::mt19937_64 g(1);
    std::shuffle(x.begin(), x.end(), g);
    const auto b = summary_stats(x);
    CHECK(b.mean == doctest::Approx(a.mean).epsilon(1e-12));
    CHECK(b.kurtosis == doctest::Approx(a.kurtosis).epsilon(1e-12));
    for (double& v : x) v *= 7.5;
    const auto c = summary_stats(x);
    CHECK(c.std_dev == doctest::Approx(7.5 * a.std_dev).epsilon(1e-12));
    CHECK(c.min == doctest::Approx(7.5 * a.min).epsilon(1e-12));
    CHECK(c.max == doctest::Approx(7.5 * a.max).epsilon(1e-12));
    CHECK(c.skewness == doctest::Approx(a.skewness).epsilon(1e-10));
    CHECK(c.kurtosis == doctest::Approx(a.kurtosis).epsilon(1e-10));
  }
}
