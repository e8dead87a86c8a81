#pragma once

#include <string>
#include <vector>

namespace stablefit {

/// Log returns of one asset, in time order.
struct ReturnSeries {
  std::string asset_id;
  std::vector<double> returns;
  std::string first_date;  ///< ISO date of the first price used, empty if unknown
  std::string last_date;

  std::size_t size() const noexcept { return returns.size(); }
};

}  // namespace stablefit
