#include "iprob/tilings.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "iprob/symfun.hpp"
#include <json.hpp>

namespace iprob::tilings {

namespace {

std::size_t depth_of(const HexagonSpec& h) { return static_cast<std::size_t>(h.a + h.c); }

}  // namespace

BigInt count_tilings(const HexagonSpec& h) {
  return symfun::count_gt_patterns(symfun::hexagon_top_row(h));
}

void for_each_tiling(const HexagonSpec& h, std::int64_t limit,
                     const std::function<void(const Tiling&)>& visit) {
  if (count_tilings(h) > limit) throw std::runtime_error("for_each_tiling: count exceeds limit");
  symfun::for_each_gt_pattern(symfun::hexagon_top_row(h), [&](const std::vector<Signature>& rows) {
    visit(Tiling{h, GTPattern(rows)});
    return true;
  });
}

BigInt uniform_below(const BigInt& n, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("uniform_below: n must be positive");
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  while (true) {
    BigInt x = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t word = rng.next_u64();
      x <<= 64;
      x += static_cast<unsigned long>(word);
    }
    x >>= (words * 64 - bits);
    if (x < n) return x;
  }
}

namespace {

// shifted interval for coordinate i (0-based) of the row below `la`:
// mu_i in [la_{i+1}, la_i], y_i = mu_i + h - 1 - i with h = |la| - 1
struct Box {
  std::int64_t lo, hi;
};

std::vector<Box> shifted_boxes(const Signature& la) {
  const std::int64_t h = static_cast<std::int64_t>(la.size()) - 1;
  std::vector<Box> boxes(h);
  for (std::int64_t i = 0; i < h; ++i) {
    boxes[i] = {la[i + 1] + h - 1 - i, la[i] + h - 1 - i};
  }
  return boxes;
}

BigInt power_sum(std::int64_t lo, std::int64_t hi, unsigned e) {
  BigInt s = 0;
  BigInt t;
  for (std::int64_t v = lo; v <= hi; ++v) {
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(std::llabs(v)), e);
    if (v < 0 && (e % 2)) s -= t; else s += t;
  }
  return s;
}

BigInt ipow(std::int64_t v, unsigned e) {
  BigInt t;
  mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(std::llabs(v)), e);
  if (v < 0 && (e % 2)) t = -t;
  return t;
}

// integer kernel vector of a full-rank (n-1) x n matrix (fraction-free
// elimination + rational back substitution). The kernel is spanned by the
// cofactor vector of any completed determinant, which is what the sampler
// needs: candidate weights are |sum_j k_j v^{j-1}| up to one global constant.
std::vector<BigInt> kernel_vector(std::vector<std::vector<BigInt>> m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows + 1;
  std::vector<std::size_t> pivot_col(rows);
  std::vector<bool> used(cols, false);
  BigInt prev_pivot = 1;
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t pc = cols;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!used[c] && m[r][c] != 0) { pc = c; break; }
    }
    if (pc == cols) {
      // row already zero: swap in a later row with a nonzero entry
      bool swapped = false;
      for (std::size_t r2 = r + 1; r2 < rows && !swapped; ++r2) {
        for (std::size_t c = 0; c < cols; ++c)
          if (!used[c] && m[r2][c] != 0) { std::swap(m[r], m[r2]); swapped = true; break; }
      }
      if (!swapped) throw std::runtime_error("kernel_vector: rank deficient matrix");
      --r;
      continue;
    }
    pivot_col[r] = pc;
    used[pc] = true;
    for (std::size_t r2 = r + 1; r2 < rows; ++r2) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (c == pc) continue;
        m[r2][c] = m[r2][c] * m[r][pc] - m[r2][pc] * m[r][c];
        if (prev_pivot != 1) mpz_divexact(m[r2][c].get_mpz_t(), m[r2][c].get_mpz_t(), prev_pivot.get_mpz_t());
      }
      m[r2][pc] = 0;
    }
    prev_pivot = m[r][pc];
  }
  std::size_t free_col = cols;
  for (std::size_t c = 0; c < cols; ++c)
    if (!used[c]) free_col = c;
  // rational back substitution with x[free_col] = 1
  std::vector<mpq_class> x(cols, mpq_class(0));
  x[free_col] = 1;
  for (std::size_t rr = rows; rr-- > 0;) {
    mpq_class acc = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == pivot_col[rr]) continue;
      if (x[c] != 0) acc += mpq_class(m[rr][c]) * x[c];
    }
    x[pivot_col[rr]] = -acc / mpq_class(m[rr][pivot_col[rr]]);
  }
  BigInt lcm = 1;
  for (auto& q : x) {
    q.canonicalize();
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den().get_mpz_t());
  }
  std::vector<BigInt> k(cols);
  for (std::size_t c = 0; c < cols; ++c) k[c] = BigInt(x[c] * mpq_class(lcm));
  return k;
}

// draw the row below `la` from the schur link Lambda (exact uniform-tiling
// conditional); weights are Vandermonde products on disjoint shifted boxes
std::vector<std::int64_t> sample_link_row(const Signature& la, Rng& rng) {
  const std::size_t h = la.size() - 1;
  const auto boxes = shifted_boxes(la);
  std::vector<std::int64_t> y(h);

  // small rows: enumerate all interlacing configurations directly
  double prod_widths = 1.0;
  for (auto& b : boxes) prod_widths *= static_cast<double>(b.hi - b.lo + 1);
  if (prod_widths <= 4096.0) {
    std::vector<std::vector<std::int64_t>> cands;
    std::vector<BigInt> weights;
    std::vector<std::int64_t> cur(h);
    for (std::size_t i = 0; i < h; ++i) cur[i] = boxes[i].lo;
    BigInt total = 0;
    while (true) {
      BigInt w = 1;
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = i + 1; j < h; ++j) w *= (cur[i] - cur[j]);
      total += w;
      cands.push_back(cur);
      weights.push_back(w);
      std::size_t i = h;
      bool done = true;
      while (i-- > 0) {
        if (cur[i] < boxes[i].hi) {
          ++cur[i];
          for (std::size_t k2 = i + 1; k2 < h; ++k2) cur[k2] = boxes[k2].lo;
          done = false;
          break;
        }
      }
      if (done || h == 0) break;
    }
    BigInt r = uniform_below(total, rng);
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (r < weights[c]) { y = cands[c]; break; }
      r -= weights[c];
    }
  } else {
    // coordinate-wise exact conditionals via kernel (cofactor) vectors
    for (std::size_t i = 0; i < h; ++i) {
      if (boxes[i].lo == boxes[i].hi) { y[i] = boxes[i].lo; continue; }
      std::vector<std::vector<BigInt>> others;
      others.reserve(h - 1);
      for (std::size_t r = 0; r < h; ++r) {
        if (r == i) continue;
        std::vector<BigInt> row(h);
        for (unsigned e = 0; e < h; ++e)
          row[e] = r < i ? ipow(y[r], e) : power_sum(boxes[r].lo, boxes[r].hi, e);
        others.push_back(std::move(row));
      }
      const auto k = kernel_vector(std::move(others));
      const std::int64_t width = boxes[i].hi - boxes[i].lo + 1;
      std::vector<BigInt> w(width);
      BigInt total = 0;
      for (std::int64_t v = boxes[i].lo; v <= boxes[i].hi; ++v) {
        BigInt s = 0;
        for (unsigned e = 0; e < h; ++e) s += k[e] * ipow(v, e);
        w[v - boxes[i].lo] = abs(s);
        total += abs(s);
      }
      if (total == 0) throw std::logic_error("sample_link_row: degenerate weights");
      BigInt r = uniform_below(total, rng);
      for (std::int64_t v = boxes[i].lo; v <= boxes[i].hi; ++v) {
        if (r < w[v - boxes[i].lo]) { y[i] = v; break; }
        r -= w[v - boxes[i].lo];
      }
    }
  }

  // shift back to signature coordinates
  std::vector<std::int64_t> mu(h);
  for (std::size_t i = 0; i < h; ++i) mu[i] = y[i] - (static_cast<std::int64_t>(h) - 1 - static_cast<std::int64_t>(i));
  return mu;
}

}  // namespace

Tiling sample_tiling(const HexagonSpec& h, Rng& rng) {
  const std::size_t n = depth_of(h);
  std::vector<Signature> rows(n);
  rows[n - 1] = symfun::hexagon_top_row(h);
  for (std::size_t level = n - 1; level >= 1; --level) {
    rows[level - 1] = Signature(sample_link_row(rows[level], rng));
  }
  return Tiling{h, GTPattern(rows)};
}

SliceConfig slice_positions(const Tiling& t, int h) {
  if (h < 1 || h > static_cast<int>(t.pattern.depth()))
    throw std::invalid_argument("slice_positions: h out of range");
  const Signature& row = t.pattern.row(h);
  SliceConfig s;
  s.h = h;
  s.x.resize(h);
  for (int i = 0; i < h; ++i) s.x[i] = row[i] + h - (i + 1);
  return s;
}

namespace {

struct P3 {
  double x, y;
};

P3 project(double i, double j, double k) {
  // iso projection: u_i = (-s3/2, -1/2), u_j = (s3/2, -1/2), u_k = (0, 1)
  const double s3 = std::sqrt(3.0) / 2.0;
  return {(-i + j) * s3, -0.5 * i - 0.5 * j + k};
}

}  // namespace

std::string render_svg(const Tiling& t, const SvgStyle& style) {
  const std::int64_t a = t.spec.a, b = t.spec.b, c = t.spec.c;
  // plane partition heights pi[i][j], 1-based box (i,j) in [1,a] x [1,c]
  auto pi = [&](std::int64_t i, std::int64_t j) -> std::int64_t {
    if (i <= 0 || j > c) return b;
    if (i > a || j <= 0) return 0;
    const std::int64_t h = c + i - j;
    if (h < 1) return b;
    if (h > static_cast<std::int64_t>(t.pattern.depth())) return 0;
    return t.pattern.row(h)[i - 1];
  };

  struct Quad {
    P3 p[4];
    int cls;  // 0 top, 1 left face, 2 right face
  };
  std::vector<Quad> quads;
  for (std::int64_t i = 1; i <= a; ++i)
    for (std::int64_t j = 1; j <= c; ++j) {
      const double k = static_cast<double>(pi(i, j));
      quads.push_back({{project(i - 1, j - 1, k), project(i, j - 1, k), project(i, j, k), project(i - 1, j, k)}, 0});
    }
  for (std::int64_t i = 0; i <= a; ++i)
    for (std::int64_t j = 1; j <= c; ++j)
      for (std::int64_t k = pi(i + 1, j) + 1; k <= pi(i, j); ++k)
        quads.push_back({{project(i, j - 1, k - 1), project(i, j, k - 1), project(i, j, k), project(i, j - 1, k)}, 1});
  for (std::int64_t j = 0; j <= c; ++j)
    for (std::int64_t i = 1; i <= a; ++i)
      for (std::int64_t k = pi(i, j + 1) + 1; k <= pi(i, j); ++k)
        quads.push_back({{project(i - 1, j, k - 1), project(i, j, k - 1), project(i, j, k), project(i - 1, j, k)}, 2});

  double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
  for (auto& q : quads)
    for (auto& p : q.p) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
  const double u = style.unit, margin = u;
  const double w = (maxx - minx) * u + 2 * margin;
  const double hh = (maxy - miny) * u + 2 * margin;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hh
      << "\" viewBox=\"0 0 " << w << " " << hh << "\">\n";
  const char* fills[3] = {style.fill_top.c_str(), style.fill_left.c_str(), style.fill_right.c_str()};
  for (auto& q : quads) {
    out << "  <polygon points=\"";
    for (int v = 0; v < 4; ++v) {
      const double px = (q.p[v].x - minx) * u + margin;
      const double py = (maxy - q.p[v].y) * u + margin;
      out << px << "," << py << (v + 1 < 4 ? " " : "");
    }
    out << "\" fill=\"" << fills[q.cls] << "\" stroke=\"" << style.stroke << "\" stroke-width=\"0.8\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string tiling_to_json(const Tiling& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (auto& r : t.pattern.rows()) rows.push_back(r.parts());
  return rows.dump();
}

Tiling tiling_from_json(const HexagonSpec& spec, const std::string& json) {
  auto rows = nlohmann::json::parse(json);
  std::vector<Signature> sig_rows;
  for (auto& r : rows) sig_rows.emplace_back(r.get<std::vector<std::int64_t>>());
  return Tiling{spec, GTPattern(std::move(sig_rows))};
}

}  // namespace iprob::tilings
