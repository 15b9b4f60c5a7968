#include "valkit/generate.hpp"

namespace valkit {

HahnSeries random_series(const Universe& u, Rng& rng, const SeriesGenOptions& opts) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::pair<GammaElement, ResElement>> terms;
    int count = static_cast<int>(rng.below(opts.max_terms)) + 1;
    for (int t = 0; t < count; ++t) {
      std::vector<Rat> main;
      for (int a = 0; a < u.main_rank(); ++a) {
        Rat q = rng.small_rat(opts.exp_bound, opts.exp_den_bound);
        if (opts.nonneg_exponents && q < 0) q = -q;
        main.push_back(q);
      }
      GammaElement exponent(std::move(main), std::vector<Rat>(u.inf_rank, Rat(0)));
      ResElement coeff =
          ResElement::constant(u.var_count(), rng.small_rat_nonzero(opts.coeff_bound, 2));
      if (opts.allow_vars && u.var_count() > 0 && rng.chance(40)) {
        int var = static_cast<int>(rng.below(u.var_count()));
        coeff = coeff * ResElement::variable(u.var_count(), var);
        if (rng.chance(25))
          coeff = coeff + ResElement::constant(u.var_count(), rng.small_rat(2, 1));
      }
      terms.emplace_back(std::move(exponent), std::move(coeff));
    }
    HahnSeries s = HahnSeries::from_terms(u.main_rank(), u.inf_rank, u.var_count(),
                                          std::move(terms), Precision::make_exact());
    if (!opts.ensure_nonzero || s.has_terms()) return s;
  }
  return series_one(u);
}

}  // namespace valkit
