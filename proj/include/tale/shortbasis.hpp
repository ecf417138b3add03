#ifndef TALE_SHORTBASIS_HPP
#define TALE_SHORTBASIS_HPP

#include <functional>
#include <map>
#include <optional>

#include "tale/exactq.hpp"
#include "tale/metric.hpp"
#include "tale/pseudogroup.hpp"

namespace tale {

// theta-translational subset backed by integer tuples over a fixed generator
// set. The group product is tuple addition (the abelian regime); the embedding
// carries the translation vectors, exactly for lattices, with controlled
// defects for perturbed or pseudo-group-derived subsets.
template <class S>
struct SubsetSpec {
  int ambient = 0;
  int rank = 0;
  std::vector<VecS<S>> generators;  // embeddings of the unit tuples
  std::function<VecS<S>(const Word&)> embed_fn;  // empty = exact linear combination
  S rho1{0};
  S theta{0};
  // per-coordinate coefficient bound covering {k : |embed(k)| <= R}
  std::function<int(double)> coeff_bound_fn;

  VecS<S> embed(const Word& k) const {
    if (embed_fn) return embed_fn(k);
    VecS<S> v(ambient, S(0));
    for (int g = 0; g < rank; ++g)
      if (k[g] != 0) v = addS(v, scaleS(S(k[g]), generators[g]));
    return v;
  }
  int coeff_bound(double R) const {
    if (!coeff_bound_fn) throw Error("subset: enumeration bound not configured");
    return coeff_bound_fn(R);
  }
};

// lexicographically-largest total order used for deterministic tie-breaks
template <class S>
int cmp_lex(const VecS<S>& u, const VecS<S>& v) {
  for (size_t i = 0; i < u.size(); ++i) {
    const int s = sgn(u[i] - v[i]);
    if (s != 0) return s;
  }
  return 0;
}

template <class S>
S scalar_from_radius(double r) {
  const Rat rr(static_cast<long long>(std::ceil(r * r * 1e9)), 1000000000LL);
  return S(rr);
}
template <>
inline double scalar_from_radius<double>(double r) {
  return r * r * (1 + 1e-12);
}

// All tuples with |embed|^2 <= R2, deterministic order. Throws when the
// coefficient box would be unreasonably large.
template <class S>
std::vector<Word> enumerate_ball(const SubsetSpec<S>& spec, const S& R2,
                                 bool include_zero = false) {
  std::vector<Word> out;
  const double R = std::sqrt(std::max(0.0, to_double(R2)));
  const int bound = spec.coeff_bound(R);
  if (std::pow(2.0 * bound + 1, spec.rank) > 4e6)
    throw Error("subset: enumeration ball too large");
  Word k = Word::Zero(spec.rank);
  std::function<void(int)> rec = [&](int g) {
    if (g == spec.rank) {
      if (!include_zero && k.isZero()) return;
      if (sgn(norm2S(spec.embed(k)) - R2) <= 0) out.push_back(k);
      return;
    }
    for (int i = -bound; i <= bound; ++i) {
      k[g] = i;
      rec(g + 1);
    }
    k[g] = 0;
  };
  rec(0);
  return out;
}

template <class S>
struct ShortBasisT {
  SubsetSpec<S> spec;
  std::vector<Word> tuples;              // c_i as tuples
  std::vector<VecS<S>> vectors;          // embed(c_i)
  std::vector<VecS<S>> gram_schmidt;     // gs[i] = projection of c_i orthogonal to gs[<i]
  std::vector<S> sigma2;                 // shortest projected lengths^2 per stage
  S lambda2{1};
  double rho0 = 0;
  double theta1 = 0;
  std::vector<double> rho_schedule;      // rho_1 .. rho_n
  double rho_bar = 0;
  std::vector<std::vector<std::vector<long long>>> structure_constants;

  int m() const { return static_cast<int>(tuples.size()); }
};

namespace detail {

template <class S>
VecS<S> project_through(const std::vector<VecS<S>>& gs, int upto, VecS<S> v) {
  for (int j = 0; j < upto; ++j) {
    const S c = dotS(v, gs[j]) / norm2S(gs[j]);
    v = subS(v, scaleS(c, gs[j]));
  }
  return v;
}

template <class S>
struct QStepResult {
  long long k = 0;
  Word tuple;
  VecS<S> vec;
  VecS<S> proj;
};

// Strip normalization of w against basis element `stage`: the representative
// c~ = c_stage^{-k} * w with <c^{(s)}, c~^{(s)}> >= 0 and the next reduction
// step nonpositive; ties resolved toward the shorter representative.
template <class S>
QStepResult<S> qstep(const SubsetSpec<S>& spec, const std::vector<Word>& ctuples,
                     const std::vector<VecS<S>>& gs, int stage, const Word& w) {
  const VecS<S>& ci = gs[stage];
  const S ci2 = norm2S(ci);
  const VecS<S> u = project_through(gs, stage, spec.embed(w));
  const double t_est = to_double(dotS(u, ci)) / to_double(ci2);
  const long long k0 = std::llround(t_est);

  auto proj_of = [&](long long k) {
    Word tup = w - static_cast<int>(k) * ctuples[stage];
    return std::pair<Word, VecS<S>>(tup, project_through(gs, stage, spec.embed(tup)));
  };

  std::optional<QStepResult<S>> best;
  for (long long k = k0 - 2; k <= k0 + 2; ++k) {
    auto [tup, p] = proj_of(k);
    if (sgn(dotS(ci, p)) < 0) continue;
    auto next = proj_of(k + 1);
    if (sgn(dotS(ci, next.second)) > 0) continue;
    QStepResult<S> cand{k, tup, spec.embed(tup), p};
    if (!best) {
      best = std::move(cand);
      continue;
    }
    const int c = sgn(norm2S(cand.proj) - norm2S(best->proj));
    if (c < 0 || (c == 0 && cand.k > best->k)) best = std::move(cand);
  }
  if (!best) throw OutOfRange("qstep: no strip representative in the search window");
  return *best;
}

// Reduce w into the simultaneous strip of stages 0..upto-1. Subtracting
// c_j multiples leaves every projection past stage j unchanged, so running
// from the deepest stage down normalizes all stages in one pass.
template <class S>
QStepResult<S> reduce_chain(const SubsetSpec<S>& spec, const std::vector<Word>& ctuples,
                            const std::vector<VecS<S>>& gs, int upto, const Word& w) {
  Word tup = w;
  for (int j = upto - 1; j >= 0; --j) tup = qstep(spec, ctuples, gs, j, tup).tuple;
  QStepResult<S> cur;
  cur.tuple = tup;
  cur.vec = spec.embed(tup);
  cur.proj = project_through(gs, upto, cur.vec);
  return cur;
}

}  // namespace detail

// Spec'd radius schedule rho_i = (1/3) 12^{1-i} rho_0 and the representation
// radius rho_bar.
inline std::vector<double> rho_schedule_for(double rho0, int n) {
  std::vector<double> rho(n);
  for (int i = 1; i <= n; ++i) rho[i - 1] = (1.0 / 3.0) * std::pow(12.0, 1 - i) * rho0;
  return rho;
}

inline double rho_bar_for(double rho0, int n, double theta) {
  return (1.0 / 3.0) * std::pow(1.0 + theta, -n - 1) * std::pow(12.0, -n) *
         std::pow(2.0, -0.5 * n * n) * rho0;
}

// One projection step: exponent k, strip representative c~ and its projection
// c' against the (already built) basis prefix.
template <class S>
std::tuple<long long, Word, VecS<S>> project_step(const ShortBasisT<S>& basis, int stage,
                                                  const Word& c) {
  auto r = detail::qstep(basis.spec, basis.tuples, basis.gram_schmidt, stage, c);
  return {r.k, r.tuple, detail::project_through(basis.gram_schmidt, stage + 1, r.vec)};
}

// Standard short basis by iterated shortest-vector choice and projection;
// deterministic under the (length, lexicographically-largest) tie-break.
// first_override runs the generalized construction with a prescribed first
// element.
template <class S>
ShortBasisT<S> standard_short_basis(const SubsetSpec<S>& spec, double theta1,
                                    double rho0,
                                    const std::optional<Word>& first_override = std::nullopt) {
  ShortBasisT<S> basis;
  basis.spec = spec;
  basis.rho0 = rho0;
  basis.theta1 = theta1;
  basis.rho_schedule = rho_schedule_for(rho0, spec.ambient);
  basis.rho_bar = rho_bar_for(rho0, spec.ambient, to_double(spec.theta));

  const double rho1_d = to_double(spec.rho1);
  const double lambda_slack = 2.0;  // > (1/2 - 2 theta)^{-1/2}

  for (int stage = 0; stage < spec.rank && stage < spec.ambient; ++stage) {
    const double rho_i =
        basis.rho_schedule[std::min<size_t>(stage, basis.rho_schedule.size() - 1)];

    std::optional<detail::QStepResult<S>> best;
    auto consider = [&](const Word& w) {
      auto r = detail::reduce_chain(spec, basis.tuples, basis.gram_schmidt, stage, w);
      if (is_zeroS(r.proj)) return;
      if (std::sqrt(to_double(norm2S(r.vec))) > rho1_d * (1 + 1e-9)) return;
      if (!best) {
        best = std::move(r);
        return;
      }
      const int c = sgn(norm2S(r.proj) - norm2S(best->proj));
      if (c < 0 ||
          (c == 0 && (cmp_lex(r.proj, best->proj) > 0 ||
                      (cmp_lex(r.proj, best->proj) == 0 && cmp_lex(r.vec, best->vec) > 0))))
        best = std::move(r);
    };

    if (stage == 0 && first_override) {
      auto r = detail::reduce_chain(spec, basis.tuples, basis.gram_schmidt, 0,
                                    *first_override);
      if (is_zeroS(r.proj))
        throw EmptySubset("short basis: first-element override is trivial");
      best = std::move(r);
    } else {
      // geometric growth until a candidate appears, then certify via the
      // preimage bound |c~| <= lambda |c'|
      double R = std::min(1.0, rho1_d);
      while (!best && R <= rho1_d * (1 + 1e-9)) {
        for (const Word& w : enumerate_ball(spec, scalar_from_radius<S>(R))) consider(w);
        R *= 2;
      }
      while (best) {
        const S prev = norm2S(best->proj);
        const double Rcert =
            std::min(rho1_d, lambda_slack * std::sqrt(to_double(prev)) * 1.05);
        for (const Word& w : enumerate_ball(spec, scalar_from_radius<S>(Rcert)))
          consider(w);
        if (sgn(norm2S(best->proj) - prev) == 0) break;
      }
    }

    if (!best) break;  // projected span exhausted
    if (std::sqrt(to_double(norm2S(best->proj))) > rho_i) break;  // T_{i+1} empty

    basis.tuples.push_back(best->tuple);
    basis.vectors.push_back(best->vec);
    basis.gram_schmidt.push_back(best->proj);
    basis.sigma2.push_back(norm2S(best->proj));
  }

  if (basis.tuples.empty())
    throw EmptySubset("short basis: subset contains only the identity");

  // lambda-normality certificate from the final basis
  basis.lambda2 = S(1);
  for (int j = 0; j + 1 < basis.m(); ++j)
    for (int i = j + 1; i < basis.m(); ++i) {
      const VecS<S> atj = detail::project_through(basis.gram_schmidt, j, basis.vectors[i]);
      const VecS<S> atj1 =
          detail::project_through(basis.gram_schmidt, j + 1, basis.vectors[i]);
      const S ratio = norm2S(atj) / norm2S(atj1);
      if (sgn(ratio - basis.lambda2) > 0) basis.lambda2 = ratio;
    }

  // structure constants of [c_i, c_j]: identically zero in the abelian tuple
  // backend, kept explicit for the property suite.
  basis.structure_constants.assign(basis.m(),
                                   std::vector<std::vector<long long>>(basis.m()));
  for (int i = 0; i < basis.m(); ++i)
    for (int j = 0; j < basis.m(); ++j)
      basis.structure_constants[i][j].assign(basis.m(), 0);

  return basis;
}

template <class S>
struct Representation {
  std::vector<long long> exponents;
  double residual = 0;
};

// Right-peel representation c = c_1^{l_1} * ... * c_m^{l_m}: the top exponent
// comes from the deepest-stage projection ratio, then the element is reduced.
// Exact scalars must produce integer ratios.
template <class S>
Representation<S> represent(const ShortBasisT<S>& basis, const Word& w,
                            double tol = 1e-8) {
  const int m = basis.m();
  Representation<S> rep;
  rep.exponents.assign(m, 0);
  Word cur = w;
  for (int i = m - 1; i >= 0; --i) {
    const VecS<S> u =
        detail::project_through(basis.gram_schmidt, i, basis.spec.embed(cur));
    const S num = dotS(u, basis.gram_schmidt[i]);
    const S den = norm2S(basis.gram_schmidt[i]);
    const double ratio = to_double(num) / to_double(den);
    const long long l = std::llround(ratio);
    if (std::abs(ratio - static_cast<double>(l)) > 0.25)
      throw NotRepresentable("represent: stage ratio is far from an integer");
    if constexpr (!std::is_same_v<S, double>) {
      if (S(static_cast<int>(l)) * den != num)
        throw NotRepresentable("represent: stage ratio is not an exact integer");
    }
    rep.exponents[i] = l;
    cur = cur - static_cast<int>(l) * basis.tuples[i];
  }
  double rn = 0;
  for (const double x : to_doubleS(basis.spec.embed(cur))) rn += x * x;
  rep.residual = std::sqrt(rn);
  if (!cur.isZero())
    throw NotRepresentable("represent: nonzero remainder after peeling");
  return rep;
}

struct PropertyCheck {
  std::string name;
  bool pass = true;
  std::string witness;
};

struct PropertyReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Property suite: lambda-normality (both caps), unique representation inside
// check_radius (exhaustive), the theta-defect bound, and integer (zero)
// structure constants.
template <class S>
PropertyReport verify_basis_properties(const ShortBasisT<S>& basis, double check_radius,
                                       bool exhaustive) {
  PropertyReport rep;
  const auto& spec = basis.spec;
  const double theta = to_double(spec.theta);

  {
    PropertyCheck c{"lambda_normal_le_2", true, ""};
    if (to_double(basis.lambda2) > 4.0 + 1e-12) {
      c.pass = false;
      c.witness = "lambda^2 = " + std::to_string(to_double(basis.lambda2));
    }
    rep.checks.push_back(c);
  }
  {
    PropertyCheck c{"lambda_le_constructed_cap", true, ""};
    if (theta < 0.24) {
      const double cap2 = 1.0 / (0.5 - 2.0 * theta);
      if (to_double(basis.lambda2) > cap2 + 1e-12) {
        c.pass = false;
        c.witness = "lambda^2 = " + std::to_string(to_double(basis.lambda2)) + " > " +
                    std::to_string(cap2);
      }
    }
    rep.checks.push_back(c);
  }

  PropertyCheck unique{"unique_representation", true, ""};
  PropertyCheck defect{"representation_defect", true, ""};
  PropertyCheck wordnorm{"word_norm_lower_bound", true, ""};
  PropertyCheck strconst{"structure_constants_zero", true, ""};

  if (exhaustive) {
    const double m2pow = std::pow(2.0, -0.5 * basis.m() * basis.m());
    const double rho1 = to_double(spec.rho1);
    std::map<std::vector<long long>, std::vector<int>> seen;
    for (const Word& w : enumerate_ball(spec, scalar_from_radius<S>(check_radius), true)) {
      Representation<S> rp;
      try {
        rp = represent(basis, w);
      } catch (const NotRepresentable& e) {
        unique.pass = false;
        unique.witness = e.what();
        continue;
      }
      auto it = seen.find(rp.exponents);
      if (it != seen.end()) {
        const auto& o = it->second;
        bool same = o.size() == static_cast<size_t>(w.size());
        for (size_t i = 0; same && i < o.size(); ++i) same = o[i] == w[i];
        if (!same) {
          unique.pass = false;
          unique.witness = "two elements share an exponent tuple";
        }
      } else {
        seen[rp.exponents] = std::vector<int>(w.data(), w.data() + w.size());
      }
      VecS<S> sum(spec.ambient, S(0));
      double exp_norm_sum = 0;
      for (int i = 0; i < basis.m(); ++i) {
        sum = addS(sum, scaleS(S(static_cast<int>(rp.exponents[i])), basis.vectors[i]));
        exp_norm_sum += std::abs(static_cast<double>(rp.exponents[i])) *
                        std::sqrt(to_double(norm2S(basis.vectors[i])));
      }
      const VecS<S> cvec = spec.embed(w);
      const double sum_norm = std::sqrt(to_double(norm2S(sum)));
      const double lhs = std::sqrt(to_double(norm2S(subS(cvec, sum))));
      const double rhs = theta * sum_norm;
      if (lhs > rhs + 1e-12) {
        defect.pass = false;
        defect.witness =
            "defect " + std::to_string(lhs) + " > theta*|sum| = " + std::to_string(rhs);
      }
      // |sum l_i c_i| >= 2^{-m^2/2} sum |l_i c_i| in the lemma's range
      if (exp_norm_sum <= m2pow * rho1 && sum_norm < m2pow * exp_norm_sum - 1e-12) {
        wordnorm.pass = false;
        wordnorm.witness = "|sum| = " + std::to_string(sum_norm) + " < 2^{-m^2/2} * " +
                           std::to_string(exp_norm_sum);
      }
    }
  }

  for (int i = 0; i < basis.m() && strconst.pass; ++i)
    for (int j = 0; j < basis.m() && strconst.pass; ++j)
      for (long long k : basis.structure_constants[i][j])
        if (k != 0) {
          strconst.pass = false;
          strconst.witness = "nonzero structure constant";
        }

  rep.checks.push_back(unique);
  rep.checks.push_back(defect);
  rep.checks.push_back(wordnorm);
  rep.checks.push_back(strconst);
  return rep;
}

// --- translational-subset axiom verification --------------------------------

// Def-style axioms over the materialized list |embed| <= materialize_radius:
// identity, radius, closure with the eq-tr1 defect bounds, inverses,
// associativity through the product map.
template <class S>
std::vector<std::string> verify_subset_axioms(const SubsetSpec<S>& spec,
                                              double materialize_radius) {
  std::vector<std::string> bad;
  const double rho = to_double(spec.rho1);
  const double theta = to_double(spec.theta);
  std::vector<Word> elems =
      enumerate_ball(spec, scalar_from_radius<S>(materialize_radius), true);
  std::vector<VecS<S>> vecs;
  vecs.reserve(elems.size());
  for (const Word& w : elems) vecs.push_back(spec.embed(w));

  auto norm_d = [&](const VecS<S>& v) { return std::sqrt(to_double(norm2S(v))); };

  if (!is_zeroS(spec.embed(Word::Zero(spec.rank))))
    bad.push_back("identity embeds to a nonzero vector");

  bool has_zero = false;
  for (size_t i = 0; i < elems.size(); ++i) {
    if (elems[i].isZero()) has_zero = true;
    if (norm_d(vecs[i]) > rho * (1 + 1e-9)) bad.push_back("element exceeds subset radius");
  }
  if (!has_zero) bad.push_back("identity element missing from enumeration");

  const size_t N = elems.size();
  for (size_t i = 0; i < N; ++i) {
    if (norm_d(vecs[i]) <= rho * (1 - theta)) {
      // inverse cancels: (-a) * a = 0 in the tuple product
      const Word cancel = elems[i] + Word(-elems[i]);
      if (!cancel.isZero()) bad.push_back("inverse does not cancel");
    }
    for (size_t j = 0; j < N; ++j) {
      const VecS<S> sum_vec = addS(vecs[i], vecs[j]);
      if (norm_d(sum_vec) > rho * (1 - theta)) continue;
      const VecS<S> prod = spec.embed(elems[i] + elems[j]);
      const double lhs = norm_d(subS(prod, sum_vec));
      const double rhs = 2.0 * theta / rho * norm_d(vecs[i]) * norm_d(vecs[j]);
      if (lhs > rhs + 1e-12)
        bad.push_back("product defect bound violated: " + std::to_string(lhs) + " > " +
                      std::to_string(rhs));
    }
  }

  // associativity through the product map
  const size_t cap = std::min<size_t>(N, 12);
  for (size_t i = 0; i < cap; ++i)
    for (size_t j = 0; j < cap; ++j)
      for (size_t k = 0; k < cap; ++k) {
        const Word l = (elems[i] + elems[j]) + elems[k];
        const Word r = elems[i] + (elems[j] + elems[k]);
        if ((l - r).any()) bad.push_back("associativity violated");
      }
  return bad;
}

template <class S>
SubsetSpec<S> make_translational_subset(SubsetSpec<S> spec, double materialize_radius) {
  auto bad = verify_subset_axioms(spec, materialize_radius);
  if (!bad.empty()) throw AxiomViolation(bad);
  return spec;
}

// |a^{-1}*b - (b-a)| <= theta(1+theta)/rho1 |a||b-a| over admissible pairs.
template <class S>
bool check_difference_estimate(const SubsetSpec<S>& spec, double materialize_radius,
                               std::string* witness = nullptr) {
  const double rho = to_double(spec.rho1);
  const double theta = to_double(spec.theta);
  std::vector<Word> elems =
      enumerate_ball(spec, scalar_from_radius<S>(materialize_radius), true);
  for (const Word& a : elems)
    for (const Word& b : elems) {
      const VecS<S> va = spec.embed(a);
      const VecS<S> vb = spec.embed(b);
      const VecS<S> diff = subS(vb, va);
      const double na = std::sqrt(to_double(norm2S(va)));
      const double nb = std::sqrt(to_double(norm2S(vb)));
      const double nd = std::sqrt(to_double(norm2S(diff)));
      const double cap = (1 - 3 * theta) * rho;
      if (na > cap || nb > cap || nd > cap) continue;
      const VecS<S> ainvb = spec.embed(b - a);
      const double lhs = std::sqrt(to_double(norm2S(subS(ainvb, diff))));
      const double rhs = theta * (1 + theta) / rho * na * nd;
      if (lhs > rhs + 1e-12) {
        if (witness)
          *witness = "lhs " + std::to_string(lhs) + " > rhs " + std::to_string(rhs);
        return false;
      }
    }
  return true;
}

// Distinct generalized standard theta_1-bases over admissible first elements
// (|c_1| <= (1 + theta_1) sigma_1); finite by the pigeonhole argument.
template <class S>
int count_generalized_bases(const SubsetSpec<S>& spec, double theta1, double rho0) {
  ShortBasisT<S> ref = standard_short_basis(spec, theta1, rho0);
  const double sigma1 = std::sqrt(to_double(ref.sigma2[0]));
  const double cap = (1 + theta1) * sigma1;
  std::vector<std::vector<std::vector<long long>>> seen;
  for (const Word& w : enumerate_ball(spec, scalar_from_radius<S>(cap))) {
    ShortBasisT<S> basis = standard_short_basis(spec, theta1, rho0, w);
    std::vector<std::vector<long long>> key;
    for (const Word& t : basis.tuples)
      key.push_back(std::vector<long long>(t.data(), t.data() + t.size()));
    bool fresh = true;
    for (const auto& s : seen)
      if (s == key) fresh = false;
    if (fresh) seen.push_back(key);
  }
  return static_cast<int>(seen.size());
}

// --- model-facing builders (src/shortbasis.cpp) ----------------------------

SubsetSpec<Rat> rational_lattice_subset(const std::vector<std::vector<Rat>>& basis_columns,
                                        double rho1);
SubsetSpec<Quad<3>> hexagonal_lattice_subset(double rho1);

// Seeded theta-perturbed lattice: tuple products stay exact, the embedding
// carries a deterministic defect within the translational axioms.
SubsetSpec<double> perturbed_lattice_subset(const Mat& basis_columns, double theta,
                                            double rho1, uint64_t seed);

// Translation vectors of a pseudo-group as a subset (cached deck-word
// embeddings in the frame at the base point).
SubsetSpec<double> pseudogroup_subset(const PseudoGroup& G, double theta, double rho1);

// Prop-P:norm-style checks on a pseudo-group: ||r|| <= (theta/rho0)|t|, the
// product translation bound and the commutator translation bound.
std::vector<std::string> check_pseudogroup_norm_axioms(const PseudoGroup& G, double theta,
                                                       double rho0);

}  // namespace tale

#endif
