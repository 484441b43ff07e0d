// Walks the rank-2 module D(e1) = e2, D(e2) = -e1 - t e2 through the pipeline.
#include <iostream>

#include "dworkbench/dworkbench.hpp"

using namespace dwb;

int main(int argc, char** argv) {
  std::uint64_t p = argc > 1 ? std::stoul(argv[1]) : 5;
  RationalField q{p};
  using S = Series<RationalField>;
  SeriesMatrix<RationalField> a(2, 2);
  a(0, 1) = S::constant(-1);
  a(1, 0) = S::constant(1);
  a(1, 1) = S::monomial(-1, 1);
  DifferentialModule<RationalField> m(q, a, "ex44");

  PipelineConfig cfg;
  cfg.growth_order = 2000;
  auto rep = verify_conjecture(m, cfg);

  std::cout << "p = " << p << ", n = " << rep.n << "\n";
  const auto& w = rep.condition_d;
  std::cout << "phi(1) = (";
  for (std::size_t i = 0; i < w.phi.rows(); ++i) {
    const auto& s = w.phi(i, 0);
    std::cout << (i ? ", " : "");
    for (std::int64_t k = 0; k < s.size(); ++k)
      if (!s[k].is_zero()) std::cout << s[k].lift().get_str() << (k ? "*t^" + std::to_string(k) : "");
  }
  std::cout << ")\n";
  std::cout << "boundary log_p radii:";
  for (const auto& b : rep.radii->radii) std::cout << " " << b.log_radius.get_str();
  std::cout << "\nverdict: " << to_string(rep.overall) << "\n";
  return rep.overall == Verdict::kPass ? 0 : 1;
}
