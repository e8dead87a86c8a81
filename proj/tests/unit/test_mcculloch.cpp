#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "stablefit/errors.hpp"
#include "stablefit/mcculloch.hpp"

using namespace stablefit;

namespace {

std::string read_default() {
  std::ifstream in(mcculloch_table_path());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("mcculloch") {
  TEST_CASE("bundled asset loads and verifies") {
    const auto& t = default_mcculloch_tables();
    CHECK(t.format_version == 1);
    CHECK(t.psi1.rows.size() == 15);
    CHECK(t.psi1.cols.size() == 7);
    CHECK(t.phi3.rows.size() == 16);
    CHECK(t.phi3.cols.size() == 5);
    const auto text = read_default();
    const auto again = parse_mcculloch_tables(text);
    CHECK(again.checksum == t.checksum);
  }

  TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  }

  TEST_CASE("a modified table fails the checksum") {
    auto text = read_default();
    const auto pos = text.find("1.916");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 5, "1.917");
    CHECK_THROWS_AS(parse_mcculloch_tables(text), TableError);
    CHECK_THROWS_AS(parse_mcculloch_tables("format stablefit-mcculloch 1\n"), TableError);
    CHECK_THROWS_AS(load_mcculloch_tables("/nonexistent/tables.txt"), Error);
  }

  TEST_CASE("exact Cauchy quantile ratios") {
    const auto& t = default_mcculloch_tables();
    const double nu_alpha = std::tan(0.45 * std::numbers::pi);
    const auto r = lookup_alpha_beta(t, nu_alpha, 0.0);
    CHECK(r.beta == 0.0);
    CHECK_FALSE(r.clamped);
    // The published table resolves alpha = 1 only to its own grid accuracy.
    CHECK(std::abs(r.alpha - 1.0) < 0.01);
  }

  TEST_CASE("Gaussian-like ratios clamp to alpha = 2") {
    const auto& t = default_mcculloch_tables();
    const auto r = lookup_alpha_beta(t, 2.3, 0.05);
    CHECK(r.alpha == 2.0);
    CHECK(r.clamped);
    const auto s = lookup_alpha_beta(t, 2.3, -0.05);
    CHECK(s.beta <= 0.0);
  }

  TEST_CASE("sign symmetry in beta") {
    const auto& t = default_mcculloch_tables();
    for (double nb : {0.05, 0.2, 0.6}) {
      const auto p = lookup_alpha_beta(t, 4.5, nb);
      const auto m = lookup_alpha_beta(t, 4.5, -nb);
      CHECK(p.alpha == m.alpha);
      CHECK(p.beta == -m.beta);
      CHECK(lookup_nu_zeta(t, 1.4, -0.3) == -lookup_nu_zeta(t, 1.4, 0.3));
      CHECK(lookup_nu_c(t, 1.4, -0.3) == lookup_nu_c(t, 1.4, 0.3));
    }
  }

  TEST_CASE("bilinear interpolation reproduces nodes") {
    const auto& t = default_mcculloch_tables();
    for (std::size_t r = 0; r < t.psi1.rows.size(); ++r) {
      for (std::size_t c = 0; c < t.psi1.cols.size(); ++c) {
        CHECK(t.psi1.interpolate(t.psi1.rows[r], t.psi1.cols[c]) == doctest::Approx(t.psi1.at(r, c)));
      }
    }
  }
}
