#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bridgeirt/chain.hpp"

namespace bridgeirt {

// Columnar binary draw files: magic "BIDRAWS1", then a count of quantities,
// each stored as (name, dtype, dims, payload). Self-describing so readers
// need no side channel; little-endian fixed-width fields and sorted quantity
// order keep files byte-stable for the determinism contract.

struct DrawArray {
  enum Dtype : std::uint8_t { f64 = 0, u8 = 1 };
  Dtype dtype = f64;
  std::vector<std::uint64_t> dims;  // dims[0] = kept draws
  std::vector<double> real;
  std::vector<std::uint8_t> bytes;

  std::uint64_t rows() const { return dims.empty() ? 0 : dims[0]; }
  std::uint64_t width() const { return dims.size() < 2 ? 1 : dims[1]; }
  double at(std::uint64_t row, std::uint64_t col = 0) const {
    const std::uint64_t idx = row * width() + col;
    return dtype == f64 ? real[idx] : double(bytes[idx]);
  }
};

using DrawMap = std::map<std::string, DrawArray>;

DrawMap to_draw_map(const ChainDraws& draws);

void write_draws(const std::string& path, const DrawMap& draws);
void write_draws(const std::string& path, const ChainDraws& draws);
DrawMap read_draws(const std::string& path);

// Long-format CSV export of one stored quantity: chain,draw,index,value.
void export_draws_csv(const std::string& path, const std::string& name,
                      const std::vector<DrawMap>& per_chain);

}  // namespace bridgeirt
