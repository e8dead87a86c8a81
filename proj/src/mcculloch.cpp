#include "stablefit/mcculloch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "stablefit/errors.hpp"

#ifndef STABLEFIT_DEFAULT_TABLE_PATH
#define STABLEFIT_DEFAULT_TABLE_PATH "data/mcculloch_tables.txt"
#endif

namespace stablefit {

namespace {

// Index i with axis[i] <= v <= axis[i + 1], for v inside the axis.
std::size_t bracket(const std::vector<double>& axis, double v) {
  auto it = std::upper_bound(axis.begin(), axis.end(), v);
  std::size_t i = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
  return std::min(i, axis.size() - 2);
}

double clamp_to(const std::vector<double>& axis, double v, bool& clamped) {
  if (v < axis.front()) {
    clamped = true;
    return axis.front();
  }
  if (v > axis.back()) {
    clamped = true;
    return axis.back();
  }
  return v;
}

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

}  // namespace

double Grid2D::interpolate(double row, double col) const {
  const std::size_t i = bracket(rows, row);
  const std::size_t j = bracket(cols, col);
  const double tr = (row - rows[i]) / (rows[i + 1] - rows[i]);
  const double tc = (col - cols[j]) / (cols[j + 1] - cols[j]);
  return (1.0 - tr) * ((1.0 - tc) * at(i, j) + tc * at(i, j + 1)) +
         tr * ((1.0 - tc) * at(i + 1, j) + tc * at(i + 1, j + 1));
}

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

McCullochTables parse_mcculloch_tables(const std::string& text) {
  const std::string marker = "checksum fnv1a64 ";
  const auto pos = text.rfind(marker);
  if (pos == std::string::npos || (pos != 0 && text[pos - 1] != '\n')) {
    throw TableError("McCulloch tables: missing checksum line");
  }
  const std::string body = text.substr(0, pos);
  std::uint64_t stated = 0;
  {
    std::istringstream in(text.substr(pos + marker.size()));
    std::string hex;
    in >> hex;
    char* end = nullptr;
    stated = std::strtoull(hex.c_str(), &end, 16);
    if (hex.empty() || *end != '\0') throw TableError("McCulloch tables: unreadable checksum");
  }
  const std::uint64_t actual = fnv1a64(body);
  if (actual != stated) throw TableError("McCulloch tables: checksum mismatch (file modified or corrupt)");

  McCullochTables out;
  out.checksum = actual;
  std::map<std::string, std::vector<double>> axes;
  std::map<std::string, Grid2D*> tables{{"psi1", &out.psi1}, {"psi2", &out.psi2},
                                        {"phi3", &out.phi3}, {"phi5", &out.phi5}};
  std::istringstream in(body);
  std::string line;
  auto fail = [](const std::string& why) { throw TableError("McCulloch tables: " + why); };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "format") {
      std::string name;
      ls >> name >> out.format_version;
      if (name != "stablefit-mcculloch" || out.format_version != 1) fail("unsupported format");
    } else if (keyword == "axis") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      std::vector<double> values(count);
      for (auto& v : values) {
        if (!(ls >> v)) fail("short axis " + name);
      }
      if (count < 2 || !strictly_increasing(values)) fail("axis " + name + " is not strictly increasing");
      axes[name] = std::move(values);
    } else if (keyword == "table") {
      std::string name, row_axis, col_axis;
      ls >> name >> row_axis >> col_axis;
      auto t = tables.find(name);
      if (t == tables.end()) fail("unknown table " + name);
      if (!axes.count(row_axis) || !axes.count(col_axis)) fail("table " + name + " uses an undeclared axis");
      Grid2D& g = *t->second;
      g.rows = axes[row_axis];
      g.cols = axes[col_axis];
      g.values.resize(g.rows.size() * g.cols.size());
      for (std::size_t r = 0; r < g.rows.size(); ++r) {
        if (!std::getline(in, line)) fail("table " + name + " is truncated");
        std::istringstream rs(line);
        for (std::size_t c = 0; c < g.cols.size(); ++c) {
          if (!(rs >> g.values[r * g.cols.size() + c])) fail("table " + name + " has a short row");
        }
      }
    } else {
      fail("unexpected line: " + line);
    }
  }
  for (auto& [name, g] : tables) {
    if (g->values.empty()) fail("table " + name + " missing");
  }
  for (double a : out.psi1.values) {
    if (!(a > 0.0 && a <= 2.0)) fail("psi1 entry outside (0, 2]");
  }
  for (double c : out.phi3.values) {
    if (!(c > 0.0)) fail("phi3 entry not positive");
  }
  return out;
}

McCullochTables load_mcculloch_tables(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FileError(path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_mcculloch_tables(ss.str());
}

std::string mcculloch_table_path() {
  if (const char* env = std::getenv("STABLEFIT_MCCULLOCH_TABLES"); env != nullptr && *env != '\0') {
    return env;
  }
  return STABLEFIT_DEFAULT_TABLE_PATH;
}

const McCullochTables& default_mcculloch_tables() {
  static const McCullochTables tables = load_mcculloch_tables(mcculloch_table_path());
  return tables;
}

TableLookup lookup_alpha_beta(const McCullochTables& t, double nu_alpha, double nu_beta) {
  TableLookup out;
  const double sign = nu_beta < 0.0 ? -1.0 : 1.0;
  if (nu_alpha < t.psi1.rows.front()) {
    out.alpha = 2.0;
    out.beta = nu_beta == 0.0 ? 0.0 : sign;
    out.clamped = true;
    return out;
  }
  const double na = clamp_to(t.psi1.rows, nu_alpha, out.clamped);
  const double nb = clamp_to(t.psi1.cols, std::abs(nu_beta), out.clamped);
  out.alpha = std::clamp(t.psi1.interpolate(na, nb), 0.0, 2.0);
  out.beta = std::clamp(sign * t.psi2.interpolate(na, nb), -1.0, 1.0);
  return out;
}

double lookup_nu_c(const McCullochTables& t, double alpha, double beta) {
  bool ignored = false;
  return t.phi3.interpolate(clamp_to(t.phi3.rows, alpha, ignored), clamp_to(t.phi3.cols, std::abs(beta), ignored));
}

double lookup_nu_zeta(const McCullochTables& t, double alpha, double beta) {
  bool ignored = false;
  const double v = t.phi5.interpolate(clamp_to(t.phi5.rows, alpha, ignored),
                                      clamp_to(t.phi5.cols, std::abs(beta), ignored));
  return beta < 0.0 ? -v : v;
}

}  // namespace stablefit
