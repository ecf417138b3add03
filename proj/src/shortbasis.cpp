#include "tale/shortbasis.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace tale {

namespace {

uint64_t fnv1a(const void* data, size_t len, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = 1469598103934665603ull ^ seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::function<int(double)> linear_coeff_bound(const Mat& B, double slack) {
  Eigen::JacobiSVD<Mat> svd(B);
  const double smin = svd.singularValues().minCoeff();
  if (smin <= 0) throw ConfigError("lattice basis is singular");
  return [smin, slack](double R) {
    return static_cast<int>(std::ceil((R + slack) / smin * 1.02)) + 1;
  };
}

}  // namespace

SubsetSpec<Rat> rational_lattice_subset(const std::vector<std::vector<Rat>>& basis_columns,
                                        double rho1) {
  SubsetSpec<Rat> spec;
  spec.rank = static_cast<int>(basis_columns.size());
  if (spec.rank == 0) throw ConfigError("lattice: no basis vectors");
  spec.ambient = static_cast<int>(basis_columns[0].size());
  for (const auto& col : basis_columns) {
    if (static_cast<int>(col.size()) != spec.ambient)
      throw ConfigError("lattice: ragged basis");
    spec.generators.push_back(col);
  }
  spec.rho1 = Rat(static_cast<long long>(std::llround(rho1 * 1e9)), 1000000000LL);
  spec.theta = Rat(0);
  Mat B(spec.ambient, spec.rank);
  for (int g = 0; g < spec.rank; ++g)
    for (int i = 0; i < spec.ambient; ++i) B(i, g) = to_double(basis_columns[g][i]);
  spec.coeff_bound_fn = linear_coeff_bound(B, 0.0);
  return spec;
}

SubsetSpec<Quad<3>> hexagonal_lattice_subset(double rho1) {
  using S = Quad<3>;
  SubsetSpec<S> spec;
  spec.ambient = 2;
  spec.rank = 2;
  spec.generators = {
      {S(Rat(1)), S(Rat(0))},
      {S(Rat(1, 2)), S(Rat(0), Rat(1, 2))},  // (1/2, sqrt(3)/2)
  };
  spec.rho1 = S(Rat(static_cast<long long>(std::llround(rho1 * 1e9)), 1000000000LL));
  spec.theta = S(Rat(0));
  Mat B(2, 2);
  B << 1.0, 0.5, 0.0, std::sqrt(3.0) / 2.0;
  spec.coeff_bound_fn = linear_coeff_bound(B, 0.0);
  return spec;
}

SubsetSpec<double> perturbed_lattice_subset(const Mat& basis_columns, double theta,
                                            double rho1, uint64_t seed) {
  SubsetSpec<double> spec;
  spec.ambient = static_cast<int>(basis_columns.rows());
  spec.rank = static_cast<int>(basis_columns.cols());
  Eigen::JacobiSVD<Mat> svd(basis_columns);
  const double sigma1 = svd.singularValues().minCoeff();  // <= shortest vector
  const Mat B = basis_columns;
  for (int g = 0; g < spec.rank; ++g) {
    Vec col = B.col(g);
    spec.generators.push_back(VecS<double>(col.data(), col.data() + col.size()));
  }
  spec.rho1 = rho1;
  spec.theta = theta;

  const int ambient = spec.ambient;
  // deterministic unit direction per tuple
  auto unit_for = [seed, ambient](const Word& k) {
    std::vector<int> raw(k.data(), k.data() + k.size());
    uint64_t h = fnv1a(raw.data(), raw.size() * sizeof(int), seed);
    std::mt19937_64 rng(h);
    std::normal_distribution<double> gauss;
    Vec u(ambient);
    for (int i = 0; i < ambient; ++i) u[i] = gauss(rng);
    const double n = u.norm();
    return n > 0 ? Vec(u / n) : Vec(Vec::Unit(ambient, 0));
  };
  // |delta(k)| <= (theta / (4 rho1)) sigma1 |B k| keeps the eq-tr1 defect
  // within (theta/rho1)|a||b| for all admissible pairs
  spec.embed_fn = [B, theta, rho1, sigma1, unit_for](const Word& k) {
    Vec v = B * k.cast<double>();
    if (!k.isZero()) v += (theta / (4.0 * rho1)) * sigma1 * v.norm() * unit_for(k);
    return VecS<double>(v.data(), v.data() + v.size());
  };
  spec.coeff_bound_fn = linear_coeff_bound(B, 1.0);
  return spec;
}

SubsetSpec<double> pseudogroup_subset(const PseudoGroup& G, double theta, double rho1) {
  const auto* deck = G.model().deck();
  if (!deck) throw NoDeckGroup("pseudogroup_subset: model has no deck group");
  const int rank = deck->rank();
  const int ambient = G.model().dim();

  SubsetSpec<double> spec;
  spec.ambient = ambient;
  spec.rank = rank;
  spec.rho1 = rho1;
  spec.theta = theta;

  const MetricModel* model = &G.model();
  const Vec base = G.base();
  auto cache = std::make_shared<std::map<std::vector<int>, VecS<double>>>();
  spec.embed_fn = [model, base, cache](const Word& k) {
    std::vector<int> key(k.data(), k.data() + k.size());
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    GeodesicLoop loop = loop_from_deck(*model, base, k);
    VecS<double> v(loop.translation.data(),
                   loop.translation.data() + loop.translation.size());
    (*cache)[key] = v;
    return v;
  };
  for (int g = 0; g < rank; ++g) {
    Word w = Word::Zero(rank);
    w[g] = 1;
    spec.generators.push_back(spec.embed_fn(w));
  }
  // per-word displacement lower bound: the deck translation along the
  // rotation-invariant axis grows linearly in each exponent
  std::vector<double> axis_step(rank, 0.0);
  for (int g = 0; g < rank; ++g) {
    const auto& gen = deck->generators()[g];
    Eigen::JacobiSVD<Mat> svd(gen.rot - Mat::Identity(ambient, ambient),
                              Eigen::ComputeFullV);
    Vec fixed = Vec::Zero(ambient);
    for (int i = 0; i < ambient; ++i)
      if (svd.singularValues()(i) < 1e-12) {
        Vec dir = svd.matrixV().col(i);
        fixed += dir.dot(gen.trans) * dir;
      }
    axis_step[g] = fixed.norm();
  }
  const double min_step = *std::min_element(axis_step.begin(), axis_step.end());
  if (min_step <= 1e-12)
    throw ConfigError("pseudogroup_subset: deck generator has no translation component");
  spec.coeff_bound_fn = [min_step](double R) {
    return static_cast<int>(std::ceil(R / min_step)) + 1;
  };
  return spec;
}

std::vector<std::string> check_pseudogroup_norm_axioms(const PseudoGroup& G, double theta,
                                                       double rho0) {
  std::vector<std::string> bad;
  const size_t N = G.size();  // products may append lazily; copy element data
  for (size_t i = 0; i < N; ++i) {
    const GeodesicLoop e = G.element(i);
    if (e.is_identity()) continue;
    const double rot = rotation_angle_norm(e.rotation);
    const double tn = e.translation.norm();
    if (rot > theta / rho0 * tn + 1e-12)
      bad.push_back("P:norm(i): ||r|| = " + std::to_string(rot) +
                    " > (theta/rho0)|t| = " + std::to_string(theta / rho0 * tn));
  }
  const double third = rho0 / 3.0;
  for (size_t a = 0; a < N; ++a)
    for (size_t b = 0; b < N; ++b) {
      const Vec ta = G.element(a).translation;
      const Vec tb = G.element(b).translation;
      if (ta.norm() > third || tb.norm() > third) continue;
      auto ab = G.product(a, b);
      if (!ab) continue;
      const Vec tab = G.element(*ab).translation;
      const double lhs = (tab - ta - tb).norm();
      const double rhs = 2.0 * theta / rho0 * ta.norm() * tb.norm();
      if (lhs > rhs + 1e-12)
        bad.push_back("P:norm(ii): product translation defect " + std::to_string(lhs) +
                      " > " + std::to_string(rhs));
      std::optional<size_t> comm;
      try {
        comm = G.commutator(a, b);
      } catch (const OutOfRadius&) {
        continue;
      }
      if (comm) {
        const double cn = G.element(*comm).translation.norm();
        const double crhs = 3.0 * theta / rho0 * ta.norm() * tb.norm();
        if (cn > crhs + 1e-12)
          bad.push_back("P:norm(iii): commutator translation " + std::to_string(cn) +
                        " > " + std::to_string(crhs));
      }
    }
  return bad;
}

}  // namespace tale
