#include "tale/topology.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <functional>
#include <cmath>

namespace tale {

std::string end_type_name(EndType t) {
  switch (t) {
    case EndType::ALE: return "ale";
    case EndType::ALF_Cyclic: return "alf-cyclic";
    case EndType::ALF_Dihedral: return "alf-dihedral";
    case EndType::ALG: return "alg";
    case EndType::ALH: return "alh";
  }
  return "?";
}

EndType end_type_from_name(const std::string& s) {
  if (s == "ale") return EndType::ALE;
  if (s == "alf-cyclic") return EndType::ALF_Cyclic;
  if (s == "alf-dihedral") return EndType::ALF_Dihedral;
  if (s == "alg") return EndType::ALG;
  if (s == "alh") return EndType::ALH;
  throw ConfigError("unknown end type: " + s);
}

void EndDescriptor::validate() const {
  switch (end_type) {
    case EndType::ALE:
      if (gamma_order < 1) throw ConfigError("ALE descriptor: |Gamma| >= 1 required");
      break;
    case EndType::ALG: {
      const bool ok = monodromy_order == 1 || monodromy_order == 2 ||
                      monodromy_order == 3 || monodromy_order == 4 ||
                      monodromy_order == 6;
      if (!ok) throw ConfigError("ALG descriptor: monodromy order must be 1,2,3,4,6");
      break;
    }
    default:
      break;
  }
}

std::pair<double, double> eta_lambda(const EndDescriptor& d) {
  d.validate();
  switch (d.end_type) {
    case EndType::ALE: {
      if (!d.eta_ale)
        throw MissingEta("ALE eta must be supplied or derived (ale_eta_from_equality)");
      return {*d.eta_ale, 1.0 / d.gamma_order};
    }
    case EndType::ALF_Cyclic: {
      const int e = d.euler_number;
      const double sgn_e = e > 0 ? 1.0 : (e < 0 ? -1.0 : 0.0);
      return {-e / 3.0 + sgn_e, 0.0};
    }
    case EndType::ALF_Dihedral:
      return {-d.euler_number / 3.0, 0.0};
    case EndType::ALG:
      switch (d.monodromy_order) {
        case 1: return {0.0, 0.0};
        case 2: return {0.0, 0.0};
        case 3: return {-2.0 / 3.0, 0.0};
        case 4: return {-1.0, 0.0};
        case 6: return {-4.0 / 3.0, 0.0};
      }
      break;
    case EndType::ALH:
      return {0.0, 0.0};
  }
  throw ConfigError("eta_lambda: unreachable descriptor");
}

HTReport hitchin_thorpe(const EndDescriptor& d) {
  HTReport rep;
  rep.descriptor = d;
  auto [eta, lambda] = eta_lambda(d);
  rep.eta = eta;
  rep.lambda = lambda;
  rep.slack = 2.0 * (d.chi - lambda) - 3.0 * std::abs(d.tau + eta);
  rep.equality = std::abs(rep.slack) <= 1e-12;
  return rep;
}

double ale_eta_from_equality(int chi, int tau, int gamma_order) {
  return -tau - (2.0 / 3.0) * (chi - 1.0 / gamma_order);
}

std::string classify_boundary(const EndDescriptor& d) {
  d.validate();
  switch (d.end_type) {
    case EndType::ALE:
      return "S^3/Gamma (spherical space form, |Gamma| = " +
             std::to_string(d.gamma_order) + ")";
    case EndType::ALF_Cyclic: {
      const int e = std::abs(d.euler_number);
      if (e == 0) return "S^2 x S^1";
      if (e == 1) return "S^3";
      return "S^3/Z_" + std::to_string(e);
    }
    case EndType::ALF_Dihedral: {
      const int e = std::abs(d.euler_number);
      if (e == 0) return "S^2 x S^1/±";
      return "S^3/D_" + std::to_string(4 * e);
    }
    case EndType::ALG:
      return "mapping torus of L_" +
             std::to_string(d.monodromy_order == 1   ? 1
                            : d.monodromy_order == 2 ? 2
                            : d.monodromy_order == 3 ? 3
                            : d.monodromy_order == 4 ? 4
                                                     : 5) +
             " (T^2 monodromy order " + std::to_string(d.monodromy_order) + ")";
    case EndType::ALH:
      return "T^3";
  }
  return "?";
}

MonodromyClass monodromy_class(const Eigen::Matrix2i& L) {
  const int det = L(0, 0) * L(1, 1) - L(0, 1) * L(1, 0);
  if (det != 1) throw ConfigError("monodromy_class: determinant must be 1");
  static const std::array<Eigen::Matrix2i, 5> reps = [] {
    std::array<Eigen::Matrix2i, 5> r;
    r[0] << 1, 0, 0, 1;
    r[1] << -1, 0, 0, -1;
    r[2] << 0, -1, 1, -1;
    r[3] << 0, -1, 1, 0;
    r[4] << 1, -1, 1, 0;
    return r;
  }();
  static const std::array<int, 5> orders = {1, 2, 3, 4, 6};

  // finite order in SL(2,Z) <=> |trace| <= 1, or L = ±I
  Eigen::Matrix2i P = Eigen::Matrix2i::Identity();
  int order = 0;
  for (int k = 1; k <= 6; ++k) {
    P = P * L;
    if (P == Eigen::Matrix2i::Identity()) {
      order = k;
      break;
    }
  }
  if (order == 0) throw InfiniteOrder("monodromy_class: L^k never returns to I, k <= 6");
  for (int i = 0; i < 5; ++i)
    if (orders[i] == order) {
      MonodromyClass mc;
      mc.order = order;
      mc.representative = reps[i];
      mc.representative_index = i + 1;
      return mc;
    }
  throw InfiniteOrder("monodromy_class: unexpected order");
}

std::vector<Eigen::MatrixXi> enumerate_G(const Mat& A, int entry_bound) {
  const int m = static_cast<int>(A.rows());
  if (m > 3) throw ConfigError("enumerate_G: m <= 3 supported");
  Eigen::JacobiSVD<Mat> svd(A);
  const double cond =
      svd.singularValues().maxCoeff() / svd.singularValues().minCoeff();
  if (entry_bound < static_cast<int>(std::ceil(cond)))
    throw BoundTooSmall("enumerate_G: entry bound below cond(A)");

  // W preserves the Gram form: W^T G W = G with G = A^T A
  const Mat G = A.transpose() * A;
  const double tol = 1e-10 * G.norm();

  // column candidates: integer vectors with c^T G c = G_ii
  std::vector<std::vector<Eigen::VectorXi>> cands(m);
  Eigen::VectorXi c(m);
  std::function<void(int, int)> gen = [&](int pos, int col) {
    if (pos == m) {
      const Vec cd = c.cast<double>();
      if (std::abs(cd.dot(G * cd) - G(col, col)) <= tol) cands[col].push_back(c);
      return;
    }
    for (int v = -entry_bound; v <= entry_bound; ++v) {
      c[pos] = v;
      gen(pos + 1, col);
    }
  };
  for (int col = 0; col < m; ++col) gen(0, col);

  std::vector<Eigen::MatrixXi> out;
  Eigen::MatrixXi W(m, m);
  std::function<void(int)> build = [&](int col) {
    if (col == m) {
      const Mat Wd = W.cast<double>();
      const double det = Wd.determinant();
      if (std::abs(std::abs(det) - 1.0) > 1e-9) return;
      if ((Wd.transpose() * G * Wd - G).cwiseAbs().maxCoeff() > tol) return;
      out.push_back(W);
      return;
    }
    for (const auto& cc : cands[col]) {
      bool ok = true;
      const Vec ccd = cc.cast<double>();
      for (int prev = 0; prev < col && ok; ++prev) {
        const Vec pd = W.col(prev).cast<double>();
        if (std::abs(pd.dot(G * ccd) - G(prev, col)) > tol) ok = false;
      }
      if (!ok) continue;
      W.col(col) = cc;
      build(col + 1);
    }
  };
  build(0);

  // group closure, inverses and ±I membership
  auto contains = [&](const Eigen::MatrixXi& X) {
    for (const auto& Y : out)
      if (Y == X) return true;
    return false;
  };
  if (!contains(Eigen::MatrixXi::Identity(m, m)) ||
      !contains(Eigen::MatrixXi(-Eigen::MatrixXi::Identity(m, m))))
    throw BoundTooSmall("enumerate_G: ±I missing, enlarge the entry bound");
  for (const auto& X : out)
    for (const auto& Y : out)
      if (!contains(X * Y))
        throw BoundTooSmall("enumerate_G: closure fails, enlarge the entry bound");

  std::sort(out.begin(), out.end(), [](const Eigen::MatrixXi& a, const Eigen::MatrixXi& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                        b.data() + b.size());
  });
  return out;
}

const std::string& classification_tables_json() {
  static const std::string tables = R"json({
  "schema_version": 1,
  "eta_lambda": {
    "ale": {"eta": "input or equality-derived", "lambda": "1/|Gamma|"},
    "alf-cyclic": {"eta": "-e/3 + sgn(e)", "lambda": 0, "sgn0": 0},
    "alf-dihedral": {"eta": "-e/3", "lambda": 0},
    "alg": {"eta_by_monodromy": {"1": 0, "2": 0, "3": -0.6666666666666666, "4": -1.0, "6": -1.3333333333333333}, "lambda": 0},
    "alh": {"eta": 0, "lambda": 0}
  },
  "monodromy_representatives": {
    "L1": [[1, 0], [0, 1]],
    "L2": [[-1, 0], [0, -1]],
    "L3": [[0, -1], [1, -1]],
    "L4": [[0, -1], [1, 0]],
    "L5": [[1, -1], [1, 0]],
    "orders": [1, 2, 3, 4, 6]
  },
  "boundaries": {
    "ale": "S^3/Gamma",
    "alf-cyclic": "S^3/Z_|e| (S^2 x S^1 at e = 0)",
    "alf-dihedral": "S^3/D_{4|e|} (S^2 x S^1/± at e = 0)",
    "alg": "mapping torus of L_1..L_5",
    "alh": "T^3"
  }
})json";
  return tables;
}

FlatTorusAtInfinity torus_at_infinity(const std::vector<SlidingTrace>& traces,
                                      const TorusLimitOptions& opt) {
  const int m = static_cast<int>(traces.size());
  if (m == 0) throw ConfigError("torus_at_infinity: no traces supplied");
  FlatTorusAtInfinity torus;
  torus.m = m;
  torus.angles = Mat::Zero(m, m);
  torus.gram = Mat::Zero(m, m);

  for (int i = 0; i < m; ++i) {
    auto [L, resid] = traces[i].fitted_length_limit(0.5);
    auto [L_short, resid_short] = traces[i].fitted_length_limit(0.25);
    (void)resid_short;
    // Cauchy criterion on the fitted limit: two tail windows must agree
    if (std::abs(L - L_short) > opt.convergence_tol || resid > opt.convergence_tol)
      throw NotConverged("torus_at_infinity: length trace " + std::to_string(i) +
                         " has not converged");
    torus.lengths.push_back(L);
    torus.fit_residual = std::max(torus.fit_residual, resid);
  }

  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      auto angles = pairwise_angles(traces[i], traces[j]);
      // tail fit of the angle samples: constant + c/t
      const size_t n = angles.size();
      double s11 = 0, s1x = 0, sxx = 0, s1y = 0, sxy = 0;
      for (size_t k = n / 2; k < n; ++k) {
        const double x = 1.0 / std::max(1e-12, angles[k].first);
        const double y = angles[k].second;
        s11 += 1;
        s1x += x;
        sxx += x * x;
        s1y += y;
        sxy += x * y;
      }
      const double det = s11 * sxx - s1x * s1x;
      const double Theta =
          std::abs(det) < 1e-300 ? s1y / s11 : (sxx * s1y - s1x * sxy) / det;
      torus.angles(i, j) = torus.angles(j, i) = Theta;
    }

  for (int i = 0; i < m; ++i) {
    torus.gram(i, i) = torus.lengths[i] * torus.lengths[i];
    for (int j = i + 1; j < m; ++j) {
      torus.gram(i, j) = torus.gram(j, i) =
          torus.lengths[i] * torus.lengths[j] * std::cos(torus.angles(i, j));
    }
  }

  Eigen::LLT<Mat> llt(torus.gram);
  if (llt.info() != Eigen::Success)
    throw NotConverged("torus_at_infinity: Gram matrix not positive definite");
  torus.A_matrix = Mat(llt.matrixL()).transpose();

  Eigen::JacobiSVD<Mat> svd(torus.A_matrix);
  const int bound = static_cast<int>(std::ceil(svd.singularValues().maxCoeff() /
                                               svd.singularValues().minCoeff())) +
                    opt.entry_bound_slack;
  torus.G_infinity = enumerate_G(torus.A_matrix, bound);
  return torus;
}

}  // namespace tale
