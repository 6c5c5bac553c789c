#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "iprob/rational.hpp"
#include "iprob/rng.hpp"
#include "iprob/signature.hpp"

namespace iprob::tilings {

// Lozenge tiling of the a,b,c hexagon as a GT pattern of depth a+c whose top
// row is (b,...,b,0,...,0).
struct Tiling {
  HexagonSpec spec;
  GTPattern pattern;
};

struct SliceConfig {
  int h = 0;
  std::vector<std::int64_t> x;  // strictly decreasing shifted positions
};

BigInt count_tilings(const HexagonSpec& h);

// Depth-first enumeration; throws if the exact count exceeds `limit`.
void for_each_tiling(const HexagonSpec& h, std::int64_t limit,
                     const std::function<void(const Tiling&)>& visit);

// Exact uniform sample: top row deterministic, rows drawn sequentially from
// the schur stochastic link (exact integer weights, inverse CDF).
Tiling sample_tiling(const HexagonSpec& h, Rng& rng);

SliceConfig slice_positions(const Tiling& t, int h);

struct SvgStyle {
  double unit = 18.0;
  std::string fill_top = "#d95f4e";     // vertical lozenges
  std::string fill_left = "#4e79d9";
  std::string fill_right = "#e8c547";
  std::string stroke = "#333333";
};

std::string render_svg(const Tiling& t, const SvgStyle& style = {});

std::string tiling_to_json(const Tiling& t);   // array of rows of integers
Tiling tiling_from_json(const HexagonSpec& spec, const std::string& json);

// exact uniform integer in [0, n), n > 0
BigInt uniform_below(const BigInt& n, Rng& rng);

}  // namespace iprob::tilings
