#include "mzeta/volume.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <thread>

namespace mzeta {

namespace {

using RationalMatrix = std::vector<RationalVector>;

// Row echelon form in place; returns the rank.
int echelon(RationalMatrix& a) {
  if (a.empty()) return 0;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[rank][col];
      for (std::size_t k = col; k < cols; ++k) a[r][k] -= f * a[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

int rank_of(RationalMatrix a) { return echelon(a); }

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  return det;
}

// Solves a x = b for square nonsingular a; returns false when singular.
bool solve(RationalMatrix a, RationalVector b, RationalVector& x) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[r][k] -= f * a[col][k];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

Rational factorial(int k) {
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Rational(f);
}

// Calls visit(indices) for every k-subset of {0, ..., n-1} in lexicographic order.
template <class Visit>
void for_each_subset(int n, int k, Visit&& visit) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

void validate_generators(std::span<const Generator> generators, std::span<const Rational> c) {
  if (generators.empty()) throw std::invalid_argument("generator set is empty");
  const std::size_t n = c.size();
  if (n == 0) throw std::invalid_argument("exponent vector c is empty");
  for (const auto& g : generators) {
    if (g.nu.size() != n) throw std::invalid_argument("generator length differs from c");
    if (g.nu.is_zero()) throw std::invalid_argument("zero generator");
    if (g.multiplicity < 1) throw std::invalid_argument("generator multiplicity must be positive");
  }
  for (const auto& ci : c) {
    if (ci < 0) throw std::invalid_argument("exponent vector c must be nonnegative");
  }
}

}  // namespace

PolytopeH PolytopeH::from_rows(std::vector<std::vector<int>> rows) {
  PolytopeH p;
  p.n = static_cast<int>(rows.size());
  p.q = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != p.q) throw std::invalid_argument("ragged constraint matrix");
    for (int v : r) {
      if (v < 0) throw std::invalid_argument("constraint entries must be nonnegative");
    }
  }
  for (int l = 0; l < p.q; ++l) {
    bool positive = false;
    for (const auto& r : rows) positive = positive || r[l] > 0;
    if (!positive) throw std::invalid_argument("unbounded region: zero column");
  }
  p.rows = std::move(rows);
  return p;
}

Rational Simplex::volume() const {
  const std::size_t q = vertices.size() - 1;
  RationalMatrix m(q, RationalVector(q));
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) m[i][j] = vertices[i + 1][j] - vertices[0][j];
  }
  return abs(determinant(std::move(m))) / factorial(static_cast<int>(q));
}

PolytopeData build_polytope(std::span<const Generator> generators, std::span<const Rational> c) {
  validate_generators(generators, c);
  const int n = static_cast<int>(c.size());
  std::vector<std::vector<int>> rows(n);
  PolytopeData out;
  int total_u = 0;
  RationalMatrix span_rows;
  for (const auto& g : generators) {
    Rational w = 0;
    for (int j = 0; j < n; ++j) w += c[j] * g.nu[j];
    for (int k = 0; k < g.multiplicity; ++k) {
      for (int j = 0; j < n; ++j) rows[j].push_back(g.nu[j]);
      out.weights.w.push_back(w);
    }
    total_u += g.multiplicity;
    RationalVector r(n);
    for (int j = 0; j < n; ++j) r[j] = g.nu[j];
    span_rows.push_back(std::move(r));
  }
  int zero_c = 0;
  for (int j = 0; j < n; ++j) {
    if (c[j] != 0) continue;
    ++zero_c;
    RationalVector e(n, Rational(0));
    e[j] = 1;
    span_rows.push_back(std::move(e));
  }
  out.polytope = PolytopeH::from_rows(std::move(rows));
  out.rho = total_u + zero_c - rank_of(std::move(span_rows));
  return out;
}

PolytopeData build_polytope(const FamilySpec& family) { return build_polytope(family.generators, family.c); }

std::vector<RationalVector> enumerate_vertices(const PolytopeH& polytope) {
  const int q = polytope.q, n = polytope.n;
  std::set<RationalVector> found;
  // A basic feasible solution has free support F and tight rows R with
  // |F| = |R| and M[R, F] nonsingular; every other coordinate is zero.
  for (int r = 0; r <= std::min(n, q); ++r) {
    for_each_subset(n, r, [&](const std::vector<int>& rows) {
      for_each_subset(q, r, [&](const std::vector<int>& cols) {
        RationalMatrix a(r, RationalVector(r));
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < r; ++j) a[i][j] = polytope.rows[rows[i]][cols[j]];
        }
        RationalVector sol;
        if (r > 0 && !solve(std::move(a), RationalVector(r, Rational(1)), sol)) return;
        RationalVector z(q, Rational(0));
        for (int j = 0; j < r; ++j) {
          if (sol[j] < 0) return;
          z[cols[j]] = sol[j];
        }
        for (int i = 0; i < n; ++i) {
          Rational lhs = 0;
          for (int l = 0; l < q; ++l) {
            if (z[l] != 0) lhs += z[l] * polytope.rows[i][l];
          }
          if (lhs > 1) return;
        }
        found.insert(std::move(z));
      });
    });
  }
  return {found.begin(), found.end()};
}

namespace {

class Triangulator {
 public:
  Triangulator(const PolytopeH& p, const std::vector<RationalVector>& v, std::span<const std::size_t> priority)
      : poly_(p), verts_(v), priority_(priority.begin(), priority.end()) {
    const int constraints = p.q + p.n;
    if (constraints > 64) throw UnsupportedError("triangulation supports at most 64 constraints");
    if (priority_.empty()) {
      priority_.resize(v.size());
      std::iota(priority_.begin(), priority_.end(), std::size_t{0});
    }
    if (priority_.size() != v.size()) throw std::invalid_argument("apex priority length differs from vertex count");
    tight_.resize(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::uint64_t mask = 0;
      for (int l = 0; l < p.q; ++l) {
        if (v[i][l] == 0) mask |= std::uint64_t{1} << l;
      }
      for (int j = 0; j < p.n; ++j) {
        Rational lhs = 0;
        for (int l = 0; l < p.q; ++l) lhs += v[i][l] * p.rows[j][l];
        if (lhs == 1) mask |= std::uint64_t{1} << (p.q + j);
      }
      tight_[i] = mask;
    }
  }

  std::vector<std::vector<int>> run() {
    std::vector<int> all(verts_.size());
    std::iota(all.begin(), all.end(), 0);
    if (verts_.empty() || affine_dim(all) != poly_.q) throw DegeneracyError("polytope is not full-dimensional");
    return triangulate_face(all, poly_.q);
  }

 private:
  int affine_dim(const std::vector<int>& face) {
    if (face.size() <= 1) return 0;
    RationalMatrix m;
    m.reserve(face.size() - 1);
    const auto& base = verts_[face[0]];
    for (std::size_t i = 1; i < face.size(); ++i) {
      RationalVector r(poly_.q);
      for (int l = 0; l < poly_.q; ++l) r[l] = verts_[face[i]][l] - base[l];
      m.push_back(std::move(r));
    }
    return rank_of(std::move(m));
  }

  const std::vector<std::vector<int>>& triangulate_face(const std::vector<int>& face, int dim) {
    auto it = memo_.find(face);
    if (it != memo_.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (dim == 0) {
      out.push_back({face[0]});
    } else {
      int apex = *std::min_element(face.begin(), face.end(),
                                   [&](int a, int b) { return priority_[a] < priority_[b]; });
      std::set<std::vector<int>> facets;
      const int constraints = poly_.q + poly_.n;
      for (int h = 0; h < constraints; ++h) {
        const std::uint64_t bit = std::uint64_t{1} << h;
        if (tight_[apex] & bit) continue;
        std::vector<int> sub;
        for (int v : face) {
          if (tight_[v] & bit) sub.push_back(v);
        }
        if (sub.empty() || !facets.insert(sub).second) continue;
        if (affine_dim(sub) != dim - 1) continue;
        for (const auto& s : triangulate_face(sub, dim - 1)) {
          std::vector<int> cone = s;
          cone.push_back(apex);
          out.push_back(std::move(cone));
        }
      }
    }
    return memo_.emplace(face, std::move(out)).first->second;
  }

  const PolytopeH& poly_;
  const std::vector<RationalVector>& verts_;
  std::vector<std::size_t> priority_;
  std::vector<std::uint64_t> tight_;
  std::map<std::vector<int>, std::vector<std::vector<int>>> memo_;
};

}  // namespace

std::vector<Simplex> triangulate(const PolytopeH& polytope, const std::vector<RationalVector>& vertices,
                                 std::span<const std::size_t> apex_priority) {
  Triangulator t(polytope, vertices, apex_priority);
  std::vector<Simplex> out;
  for (const auto& idx : t.run()) {
    Simplex s;
    for (int i : idx) s.vertices.push_back(vertices[i]);
    if (s.volume() == 0) throw DegeneracyError("degenerate simplex in triangulation");
    out.push_back(std::move(s));
  }
  return out;
}

LogPowerExpr exp_divided_difference(std::vector<Rational> nodes) {
  std::sort(nodes.begin(), nodes.end());
  const std::size_t m = nodes.size();
  std::vector<LogPowerExpr> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = LogPowerExpr::monomial(Rational(1), nodes[i], 0);
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = m - 1; i >= k; --i) {
      if (nodes[i] == nodes[i - k]) {
        f[i] = LogPowerExpr::monomial(Rational(1) / factorial(static_cast<int>(k)), nodes[i], static_cast<int>(k));
      } else {
        f[i] -= f[i - 1];
        f[i] *= Rational(1) / (nodes[i] - nodes[i - k]);
      }
    }
  }
  return f.empty() ? LogPowerExpr{} : f[m - 1];
}

LogPowerExpr simplex_exp_integral(const Simplex& simplex, const WeightVector& weights) {
  const int q = static_cast<int>(simplex.vertices.size()) - 1;
  std::vector<Rational> nodes;
  for (const auto& v : simplex.vertices) {
    Rational u = 0;
    for (int l = 0; l < q; ++l) u += weights.w[l] * v[l];
    nodes.push_back(u);
  }
  // int_simplex e^{t<w,z>} dz = q! vol f[u_0..u_q] / t^q with f(s) = e^{ts}.
  LogPowerExpr dd = exp_divided_difference(std::move(nodes));
  dd *= factorial(q) * simplex.volume();
  return dd.shifted_log(-q);
}

LogPowerExpr integral_In_symbolic(std::span<const Generator> generators, std::span<const Rational> c,
                                  std::span<const std::size_t> apex_priority) {
  PolytopeData data = build_polytope(generators, c);
  const auto& poly = data.polytope;
  auto vertices = enumerate_vertices(poly);
  auto simplices = triangulate(poly, vertices, apex_priority);
  // (ln x)^q cancels the 1/t^q of each simplex; simplices with the same
  // multiset of nodes share their divided difference.
  std::map<std::vector<Rational>, Rational> grouped;
  const Rational qfact = factorial(poly.q);
  for (const auto& s : simplices) {
    std::vector<Rational> nodes;
    for (const auto& v : s.vertices) {
      Rational u = 0;
      for (int l = 0; l < poly.q; ++l) u += data.weights.w[l] * v[l];
      nodes.push_back(u);
    }
    std::sort(nodes.begin(), nodes.end());
    grouped[nodes] += qfact * s.volume();
  }
  LogPowerExpr total;
  for (const auto& [nodes, weight] : grouped) total += exp_divided_difference(nodes) * weight;
  return total;
}

LogPowerExpr integral_In_symbolic(const FamilySpec& family) {
  return integral_In_symbolic(family.generators, family.c);
}

LeadingConstant leading_constant_of(const LogPowerExpr& integral, const Rational& c_norm) {
  for (const auto& t : integral.terms()) {
    // terms() is ordered by decreasing log-power within an x-power.
    if (t.x_power == c_norm) return {t.log_power, t.coeff};
  }
  throw std::logic_error("integral has no term of x-power |c|_1");
}

LeadingConstant leading_constant(std::span<const Generator> generators, std::span<const Rational> c) {
  Rational norm = 0;
  for (const auto& ci : c) norm += ci;
  return leading_constant_of(integral_In_symbolic(generators, c), norm);
}

LeadingConstant leading_constant(const FamilySpec& family) { return leading_constant(family.generators, family.c); }

Rational polytope_volume(const PolytopeH& polytope) {
  const int q = polytope.q, n = polytope.n;
  if (q == 0) return 1;
  // D makes every vertex of D P integral, so k -> #(kDP cap Z^q) is a
  // polynomial of degree q with leading coefficient D^q vol(P).
  BigInt dilation = 1;
  for (int r = 1; r <= std::min(n, q); ++r) {
    for_each_subset(n, r, [&](const std::vector<int>& rows) {
      for_each_subset(q, r, [&](const std::vector<int>& cols) {
        RationalMatrix a(r, RationalVector(r));
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < r; ++j) a[i][j] = polytope.rows[rows[i]][cols[j]];
        }
        Rational det = abs(determinant(std::move(a)));
        if (det != 0) dilation = lcm(dilation, det.get_num());
      });
    });
  }
  if (!dilation.fits_slong_p()) throw UnsupportedError("dilation factor too large");
  const long d = dilation.get_si();

  std::vector<BigInt> counts;
  for (int k = 0; k <= q; ++k) {
    const long cap = d * k;
    const long radix = cap + 1;
    // States are the remaining row budgets b in [0, cap]^n, mixed radix.
    std::size_t states = 1;
    std::vector<std::size_t> stride(n);
    for (int j = n - 1; j >= 0; --j) {
      stride[j] = states;
      states *= static_cast<std::size_t>(radix);
      if (states > (std::size_t{1} << 26)) throw UnsupportedError("lattice count state space too large");
    }
    std::vector<BigInt> cnt(states, BigInt(0));
    cnt[states - 1] = 1;  // all budgets at cap
    std::vector<long> digits(n);
    for (int l = 0; l < q; ++l) {
      std::size_t offset = 0;
      for (int j = 0; j < n; ++j) offset += stride[j] * static_cast<std::size_t>(polytope.rows[j][l]);
      // new[b] = sum_{z >= 0} old[b + z col], an unbounded-knapsack sweep.
      for (std::size_t idx = states; idx-- > 0;) {
        std::size_t rest = idx;
        bool fits = true;
        for (int j = 0; j < n; ++j) {
          long digit = static_cast<long>(rest / stride[j]);
          rest %= stride[j];
          if (digit + polytope.rows[j][l] > cap) {
            fits = false;
            break;
          }
        }
        if (fits) cnt[idx] += cnt[idx + offset];
      }
    }
    BigInt total = 0;
    for (const auto& v : cnt) total += v;
    counts.push_back(total);
  }
  // q-th forward difference at 0 equals q! times the leading coefficient.
  BigInt diff = 0;
  BigInt binom = 1;
  for (int i = 0; i <= q; ++i) {
    if (i > 0) binom = binom * (q - i + 1) / i;
    BigInt term = binom * counts[i];
    if ((q - i) % 2 == 0) {
      diff += term;
    } else {
      diff -= term;
    }
  }
  Rational vol(diff, BigInt(1));
  vol /= factorial(q);
  vol /= Rational(pow_int(dilation, static_cast<unsigned long>(q)));
  return vol;
}

std::uint64_t counter_random(std::uint64_t seed, std::uint64_t block, std::uint64_t counter) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  const std::uint64_t key = mix(mix(seed) + block * 0x9e3779b97f4a7c15ULL);
  return mix(key + (counter + 1) * 0x9e3779b97f4a7c15ULL);
}

namespace {

constexpr std::uint64_t kBlockSize = 1u << 16;

double unit_open(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

// Inverse CDF of the exponential law of rate lambda truncated to [0, 1].
double truncated_exponential(double uniform, double lambda) {
  if (lambda < 1e-12) return uniform;
  return -std::log1p(uniform * std::expm1(-lambda)) / lambda;
}

}  // namespace

McEstimate mc_estimate_K(std::span<const Generator> generators, std::span<const Rational> c, double log_x,
                         std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  if (!(log_x >= 10)) throw std::invalid_argument("Monte Carlo requires x >= e^10");
  if (samples < 1000) throw std::invalid_argument("Monte Carlo requires at least 1000 samples");
  PolytopeData data = build_polytope(generators, c);
  const auto& poly = data.polytope;
  const int q = poly.q, n = poly.n;

  // Substitute s = 1 - M z (row slacks).  With a basis B of n columns,
  // z_B = M_B^{-1}(1 - s - M_N z_N); the integral becomes
  //   |det M_B|^{-1} int_{[0,1]^n x [0,1]^{q-n}} x^{<c, 1 - s>} [z_B >= 0] ds dz_N,
  // since <w, z> = <c, M z> = <c, 1 - s>.  The slacks are drawn from the
  // normalized density of x^{-<c, s>} and z_N uniformly.
  std::vector<int> basis;
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l < q; ++l) {
      bool unit = true;
      for (int i = 0; i < n; ++i) unit = unit && poly.rows[i][l] == (i == j ? 1 : 0);
      if (unit && std::find(basis.begin(), basis.end(), l) == basis.end()) {
        basis.push_back(l);
        break;
      }
    }
  }
  auto basis_det = [&](const std::vector<int>& cols) {
    RationalMatrix a(n, RationalVector(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = poly.rows[i][cols[j]];
    }
    return determinant(std::move(a));
  };
  if (static_cast<int>(basis.size()) != n) {
    basis.clear();
    if (q < n) throw DegeneracyError("polytope is not full-dimensional");
    for_each_subset(q, n, [&](const std::vector<int>& cols) {
      if (basis.empty() && basis_det(cols) != 0) basis = cols;
    });
    if (basis.empty()) throw DegeneracyError("constraint matrix has rank below n");
  }
  const Rational det = basis_det(basis);
  std::vector<int> nonbasic;
  for (int l = 0; l < q; ++l) {
    if (std::find(basis.begin(), basis.end(), l) == basis.end()) nonbasic.push_back(l);
  }
  // inv = M_B^{-1} by solving against unit vectors.
  std::vector<std::vector<double>> inv(n, std::vector<double>(n));
  {
    RationalMatrix a(n, RationalVector(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = poly.rows[i][basis[j]];
    }
    for (int col = 0; col < n; ++col) {
      RationalVector e(n, Rational(0)), x;
      e[col] = 1;
      solve(a, e, x);
      for (int i = 0; i < n; ++i) inv[i][col] = x[i].get_d();
    }
  }
  const int free_dims = q - n;
  std::vector<std::vector<double>> g(n, std::vector<double>(free_dims, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < free_dims; ++k) {
      for (int j = 0; j < n; ++j) g[i][k] += inv[i][j] * poly.rows[j][nonbasic[k]];
    }
  }
  std::vector<double> h(n, 0.0), lambda(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) h[i] += inv[i][j];
    lambda[i] = c[i].get_d() * log_x;
  }

  // log of |det|^{-1} (ln x)^{q - rho} prod_j (1 - x^{-c_j}) / (c_j ln x)
  double log_scale = (q - data.rho) * std::log(log_x) - std::log(std::fabs(det.get_d()));
  for (int j = 0; j < n; ++j) {
    if (lambda[j] > 1e-12) log_scale += std::log(-std::expm1(-lambda[j]) / lambda[j]);
  }
  const double scale = std::exp(log_scale);

  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::uint64_t> block_hits(blocks, 0);
  auto run_block = [&](std::uint64_t b) {
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(samples, begin + kBlockSize);
    std::vector<double> s(n), zn(free_dims);
    std::uint64_t hits = 0;
    std::uint64_t counter = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (int j = 0; j < n; ++j) s[j] = truncated_exponential(unit_open(counter_random(seed, b, counter++)), lambda[j]);
      for (int k = 0; k < free_dims; ++k) zn[k] = unit_open(counter_random(seed, b, counter++));
      bool inside = true;
      for (int r = 0; r < n && inside; ++r) {
        double zb = h[r];
        for (int j = 0; j < n; ++j) zb -= inv[r][j] * s[j];
        for (int k = 0; k < free_dims; ++k) zb -= g[r][k] * zn[k];
        inside = zb >= 0;
      }
      hits += inside;
    }
    block_hits[b] = hits;
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));
  if (workers <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t b = w; b < blocks; b += workers) run_block(b);
      });
    }
    for (auto& t : pool) t.join();
  }
  McEstimate out;
  out.samples = samples;
  for (auto v : block_hits) out.hits += v;
  const double phat = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.estimate = scale * phat;
  out.std_error = scale * std::sqrt(phat * (1 - phat) / static_cast<double>(samples));
  return out;
}

McEstimate mc_estimate_K(const FamilySpec& family, double log_x, std::uint64_t samples, std::uint64_t seed,
                         unsigned threads) {
  return mc_estimate_K(family.generators, family.c, log_x, samples, seed, threads);
}

Real holder_constant_closed(const FamilySpec& family, const Real& d) {
  const mpfr_prec_t prec = d.precision();
  if (d < Real(1, prec)) throw std::domain_error("Holder exponent must be at least 1");
  const bool cyclic = family.kind == FamilyKind::cyclic;
  const bool prod = family.kind == FamilyKind::prod_over_lcm;
  if ((!cyclic && !prod) || (family.n != 2 && family.n != 3)) {
    throw UnsupportedError("closed Holder constant only for cyclic and prod-over-lcm with n in {2, 3}");
  }
  const Real one(1, prec);
  const Real g1 = gamma(one / d);
  const Real gn = gamma(Real(family.n, prec) / d);
  if (family.n == 2) {
    Real num = g1 * g1;
    return num / (d * (cyclic ? 6 : 2) * gn);
  }
  Real num = g1 * g1 * g1;
  if (cyclic) return num * 31 / (d * d * 30240 * gn);
  return num / (d * d * 2 * gn);
}

}  // namespace mzeta
