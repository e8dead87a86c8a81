#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stablefit {

/// Rectangular table over two strictly increasing axes, stored row-major.
struct Grid2D {
  std::vector<double> rows;  ///< row axis nodes
  std::vector<double> cols;  ///< column axis nodes
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols.size() + c]; }
  /// Bilinear interpolation; arguments must lie inside the axes.
  double interpolate(double row, double col) const;
};

/// The four McCulloch lookup tables.
///
/// psi1, psi2 map (nu_alpha, nu_beta >= 0) to alpha and beta; phi3, phi5 map
/// (alpha, beta >= 0) to the scale and location factors nu_c and nu_zeta.
struct McCullochTables {
  Grid2D psi1;
  Grid2D psi2;
  Grid2D phi3;
  Grid2D phi5;
  int format_version = 0;
  std::uint64_t checksum = 0;
};

/// Result of mapping (nu_alpha, nu_beta) to (alpha, beta).
struct TableLookup {
  double alpha = 2.0;
  double beta = 0.0;
  bool clamped = false;  ///< an input fell outside the tabulated range and was clamped
};

/// Parse and verify a table file. Throws FileError if unreadable and TableError on a
/// malformed body, a checksum mismatch, or an invariant violation.
McCullochTables load_mcculloch_tables(const std::string& path);

/// Parse from an in-memory copy of the file contents (same checks).
McCullochTables parse_mcculloch_tables(const std::string& text);

/// Path used by default_mcculloch_tables(): $STABLEFIT_MCCULLOCH_TABLES if set, else the
/// data/mcculloch_tables.txt of the source tree the library was built from.
std::string mcculloch_table_path();

/// Tables loaded once from mcculloch_table_path() and cached for the process.
const McCullochTables& default_mcculloch_tables();

/// FNV-1a 64-bit hash, used as the table checksum.
std::uint64_t fnv1a64(const std::string& bytes) noexcept;

/// alpha = psi1(nu_alpha, |nu_beta|), beta = sign(nu_beta) psi2(nu_alpha, |nu_beta|).
/// nu_alpha below the table (heavier-than-Gaussian impossible region) gives alpha = 2 and
/// beta = sign(nu_beta), flagged; values above the table are clamped and flagged.
TableLookup lookup_alpha_beta(const McCullochTables& t, double nu_alpha, double nu_beta);

/// nu_c(alpha, beta) and nu_zeta(alpha, beta), using the symmetry in beta.
double lookup_nu_c(const McCullochTables& t, double alpha, double beta);
double lookup_nu_zeta(const McCullochTables& t, double alpha, double beta);

}  // namespace stablefit
