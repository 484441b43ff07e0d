#include <gtest/gtest.h>

#include "support.hpp"

using namespace dwb;
using namespace dwb::testing;

using QS = Series<RationalField>;
using QM = SeriesMatrix<RationalField>;

namespace {

struct Radii {
  DifferentialModule<RationalField> m;
  IterateMatrices<RationalField> it;
  explicit Radii(DifferentialModule<RationalField> mod, std::int64_t depth = 200)
      : m(std::move(mod)), it(iterate_matrices(m, depth, radius_keep_set(m, depth))) {}
  RadiusSample at(const mpq_class& r) const { return radius_multiset(m, it, r); }
  BoundaryRadii boundary() const { return boundary_radii(m, it, RadiusConfig{}); }
};

std::vector<mpq_class> all(const std::vector<BoundaryRadius>& b) {
  std::vector<mpq_class> out;
  for (const auto& x : b) out.push_back(x.log_radius);
  return out;
}

}  // namespace

TEST(Radii, IterateExamples) {
  auto it = iterate_matrices(ex44(5), 2);
  const auto& n2 = it.kept.at(2);
  EXPECT_EQ(n2(0, 0), QS::constant(mpq_class(-1)));
  EXPECT_EQ(n2(0, 1), QS::monomial(mpq_class(1), 1));
  EXPECT_EQ(n2(1, 0), QS::monomial(mpq_class(-1), 1));
  EXPECT_EQ(n2(1, 1), QS({mpq_class(-2), mpq_class(0), mpq_class(1)}));
  auto c = iterate_matrices(scalar_module(5, mpq_class(3)), 6);
  EXPECT_EQ(c.kept.at(6)(0, 0), QS::constant(mpq_class(729)));
  auto z = iterate_matrices(trivial_module(RationalField{5}, 2), 3);
  EXPECT_TRUE(z.kept.at(3)(0, 0).is_exact_zero());
}

TEST(Radii, R1Examples) {
  for (std::uint64_t p : {3, 5, 7}) {
    const std::vector<mpq_class> rs = {mpq_class(0), mpq_class(1, 4)};
    auto z = r1_estimate(trivial_module(RationalField{p}, 2), rs, 200);
    EXPECT_EQ(z[0].log_radius, 0);
    EXPECT_EQ(z[1].log_radius, mpq_class(-1, 4));
    auto e = r1_estimate(scalar_module(p, mpq_class(1)), rs, 200);
    EXPECT_EQ(e[0].log_radius, omega_log(p));
    auto x = r1_estimate(ex44(p), rs, 200);
    EXPECT_EQ(x[0].log_radius, omega_log(p));
  }
}

TEST(Radii, MultisetExamples) {
  for (std::uint64_t p : {3, 5, 7}) {
    const mpq_class w = omega_log(p);
    Radii triv(trivial_module(RationalField{p}, 3));
    for (const auto& r : {mpq_class(0), mpq_class(1, 4), mpq_class(1, 32), mpq_class(1)}) {
      auto s = triv.at(r);
      for (const auto& x : s.log_radii) EXPECT_EQ(x, -r);
    }
    Radii x(ex44(p));
    EXPECT_EQ(x.at(mpq_class(0)).log_radii, (std::vector<mpq_class>{w, mpq_class(0)}));
    QM a(2, 2);
    a(0, 0) = QS::constant(mpq_class(1));
    a(1, 1) = QS::constant(mpq_class(-1));
    Radii pair(DifferentialModule<RationalField>(RationalField{p}, a));
    EXPECT_EQ(pair.at(mpq_class(0)).log_radii, (std::vector<mpq_class>{w, w}));
    // The wedge square of the pair has connection 0: radius 1, so wedges cannot replace per-factor radii.
    EXPECT_TRUE(wedge_power(pair.m, 2).connection()(0, 0).is_exact_zero());
  }
}

TEST(Radii, BoundaryExamples) {
  for (std::uint64_t p : {3, 5, 7}) {
    const mpq_class w = omega_log(p);
    EXPECT_EQ(all(Radii(trivial_module(RationalField{p}, 2)).boundary().radii), (std::vector<mpq_class>{0, 0}));
    auto e = Radii(scalar_module(p, mpq_class(1))).boundary();
    EXPECT_NEAR(mpq_class(e.radii[0].log_radius - w).get_d(), 0, 1e-3);
    auto x = Radii(ex44(p)).boundary();
    EXPECT_NEAR(mpq_class(x.radii[0].log_radius - w).get_d(), 0, 1e-3);
    EXPECT_NEAR(x.radii[1].log_radius.get_d(), 0, 1e-3);
    auto ep = Radii(scalar_module(p, mpq_class(static_cast<long>(p)))).boundary();
    EXPECT_EQ(ep.radii[0].log_radius, 0);
  }
}

TEST(Radii, CyclicNewtonExamples) {
  for (std::uint64_t p : {3, 5, 7}) {
    auto c = cyclic_newton_r1(ex44(p), mpq_class(0));
    EXPECT_EQ(c.log_radius, omega_log(p));
    auto s = cyclic_newton_r1(scalar_module(p, mpq_class(2)), mpq_class(0));
    EXPECT_EQ(s.log_radius, omega_log(p));
    auto z = cyclic_newton_r1(trivial_module(RationalField{p}, 2), mpq_class(1, 3));
    EXPECT_EQ(z.log_radius, mpq_class(-1, 3));
  }
}

// R_1 <= ... <= R_m <= rho at every sample, and direct sums take the union of multisets.
TEST(Radii, OrderingAndDirectSumUnion) {
  const std::vector<mpq_class> rs = {mpq_class(0), mpq_class(1, 32), mpq_class(1, 8), mpq_class(1, 4), mpq_class(1, 2), mpq_class(2)};
  for (int k = 0; k < kCases; ++k) {
    std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7}[static_cast<std::size_t>(uniform(0, 2))];
    auto pick = [&] {
      long c = uniform(-6, 6);
      if (uniform(0, 2) == 0) c *= static_cast<long>(p);
      return scalar_module(p, mpq_class(c));
    };
    auto a = pick(), b = pick();
    const auto& r = rs[static_cast<std::size_t>(uniform(0, static_cast<long>(rs.size()) - 1))];
    auto ra = Radii(a, 60).at(r), rb = Radii(b, 60).at(r);
    auto rsum = Radii(direct_sum(a, b), 60).at(r);
    std::vector<mpq_class> u = ra.log_radii;
    u.insert(u.end(), rb.log_radii.begin(), rb.log_radii.end());
    std::sort(u.begin(), u.end());
    ASSERT_EQ(rsum.log_radii, u) << a.label() << " + " << b.label() << " at r = " << r;
    for (std::size_t i = 0; i < rsum.log_radii.size(); ++i) {
      ASSERT_LE(rsum.log_radii[i], -r);
      if (i) ASSERT_LE(rsum.log_radii[i - 1], rsum.log_radii[i]);
    }
  }
}

TEST(Radii, FProfileTrivialLaw) {
  for (int k = 0; k < kCases; ++k) {
    std::uint64_t p = std::vector<std::uint64_t>{3, 5, 7}[static_cast<std::size_t>(uniform(0, 2))];
    std::size_t m = static_cast<std::size_t>(uniform(1, 4));
    auto mod = trivial_module(RationalField{p}, m);
    std::vector<mpq_class> grid;
    for (long g = uniform(3, 8); g > 0; --g) {
      mpq_class r(uniform(0, 64), static_cast<unsigned long>(uniform(1, 32)));
      r.canonicalize();
      grid.push_back(r);
    }
    auto it = iterate_matrices(mod, 16, radius_keep_set(mod, 16));
    auto f = f_profile(mod, it, grid);
    ASSERT_TRUE(f.trivial_law);
    for (bool c : f.convex) ASSERT_TRUE(c);
    for (std::size_t j = 0; j < f.rs.size(); ++j) ASSERT_EQ(f.f[j][m - 1], mpq_class(static_cast<long>(m)) * f.rs[j]);
  }
}

TEST(Radii, FProfileConvexOnCorpusShapes) {
  const std::vector<mpq_class> grid = {mpq_class(0), mpq_class(1, 32), mpq_class(1, 16), mpq_class(1, 8), mpq_class(1, 4), mpq_class(1, 2), mpq_class(1)};
  for (std::uint64_t p : {3, 5, 7}) {
    for (auto m : {ex44(p), dual(ex44(p)), scalar_module(p, mpq_class(1)), direct_sum(ex44(p), trivial_module(RationalField{p}, 1))}) {
      Radii r(m);
      auto f = f_profile(m, r.it, grid);
      for (bool c : f.convex) EXPECT_TRUE(c) << m.label() << " p = " << p;
    }
    // Rank 1 with |c| = 1: F_1 = -log_p omega near r = 0.
    Radii e(scalar_module(p, mpq_class(1)));
    auto f = f_profile(e.m, e.it, {mpq_class(0), mpq_class(1, 32), mpq_class(1, 16)});
    for (const auto& row : f.f) EXPECT_EQ(row[0], -omega_log(p));
  }
}

TEST(Radii, CauchyLowerBound) {
  // |A|_rho <= 1 implies R_i >= omega * rho.
  for (std::uint64_t p : {3, 5, 7}) {
    for (auto m : {ex44(p), dual(ex44(p)), scalar_module(p, mpq_class(1)), scalar_module(p, mpq_class(-3))}) {
      Radii r(m);
      for (const auto& rr : {mpq_class(0), mpq_class(1, 8), mpq_class(1, 2)}) {
        for (const auto& x : r.at(rr).log_radii) EXPECT_GE(x, omega_log(p) - rr) << m.label();
      }
    }
  }
}
