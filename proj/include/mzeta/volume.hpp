#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "mzeta/family.hpp"
#include "mzeta/logpower.hpp"
#include "mzeta/rational.hpp"
#include "mzeta/real.hpp"

namespace mzeta {

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RationalVector = std::vector<Rational>;

// {z in R^q : z >= 0, M z <= 1}.  Column l belongs to generator k(l); row j
// holds the j-th coordinate of that generator.
struct PolytopeH {
  int q = 0;
  int n = 0;
  std::vector<std::vector<int>> rows;  // n rows of q nonnegative integers

  static PolytopeH from_rows(std::vector<std::vector<int>> rows);
};

// w_l = <nu^k(l), c>; the integrand of the log-substituted integral is x^<w, z>.
struct WeightVector {
  RationalVector w;
};

struct PolytopeData {
  PolytopeH polytope;
  WeightVector weights;
  int rho = 0;  // sum u + #J - Rank(I u J)
};

struct Simplex {
  std::vector<RationalVector> vertices;  // q + 1 points in R^q
  Rational volume() const;
};

// Throws std::invalid_argument for an empty generator set or a zero generator.
PolytopeData build_polytope(std::span<const Generator> generators, std::span<const Rational> c);
PolytopeData build_polytope(const FamilySpec& family);

// Vertices in lexicographic order, exact and without duplicates.
std::vector<RationalVector> enumerate_vertices(const PolytopeH& polytope);

// Pulling triangulation: cone from the apex vertex over triangulations of the
// facets not containing it, recursively.  The apex of a face is its vertex
// with the smallest priority (default: lexicographically smallest).
// Throws DegeneracyError when the vertices do not span R^q.
std::vector<Simplex> triangulate(const PolytopeH& polytope, const std::vector<RationalVector>& vertices,
                                 std::span<const std::size_t> apex_priority = {});

// Exact  int_simplex x^<w, z> dz  as a log-power expression.
LogPowerExpr simplex_exp_integral(const Simplex& simplex, const WeightVector& weights);

// Divided difference of s -> x^s = e^{s ln x} on the given nodes (any order),
// confluent nodes included.
LogPowerExpr exp_divided_difference(std::vector<Rational> nodes);

// The integral I_n(I, u, c; x), exact for x > 1.
LogPowerExpr integral_In_symbolic(std::span<const Generator> generators, std::span<const Rational> c,
                                  std::span<const std::size_t> apex_priority = {});
LogPowerExpr integral_In_symbolic(const FamilySpec& family);

struct LeadingConstant {
  int rho_observed = 0;
  Rational K;
};

// Coefficient of x^{|c|_1} (ln x)^rho in I_n.  Throws std::logic_error when no
// term has x-power |c|_1.
LeadingConstant leading_constant(std::span<const Generator> generators, std::span<const Rational> c);
LeadingConstant leading_constant(const FamilySpec& family);
LeadingConstant leading_constant_of(const LogPowerExpr& integral, const Rational& c_norm);

// Exact volume by lattice-point counting: the points of the dilates D k P are
// counted by eliminating one coordinate at a time, and the volume is the
// leading coefficient of the resulting Ehrhart polynomial.  Independent of
// vertex enumeration and triangulation.
Rational polytope_volume(const PolytopeH& polytope);

struct McEstimate {
  double estimate = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
};

// Monte Carlo estimate of I_n x^{-|c|_1} (ln x)^{-rho} at x = e^log_x.
// Requires log_x >= 10 and samples >= 1000.  Deterministic for a fixed seed,
// independent of the thread count.
McEstimate mc_estimate_K(std::span<const Generator> generators, std::span<const Rational> c, double log_x,
                         std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);
McEstimate mc_estimate_K(const FamilySpec& family, double log_x, std::uint64_t samples, std::uint64_t seed,
                         unsigned threads = 0);

// Closed forms of K_n(f, ||.||_d) for cyclic and prod-over-lcm, n in {2, 3}.
// Throws UnsupportedError otherwise and std::domain_error for d < 1.
Real holder_constant_closed(const FamilySpec& family, const Real& d);

// Counter-based generator used by the Monte Carlo engine: a SplitMix64
// finalizer applied to seed-derived block keys plus a Weyl counter.
std::uint64_t counter_random(std::uint64_t seed, std::uint64_t block, std::uint64_t counter);

}  // namespace mzeta
