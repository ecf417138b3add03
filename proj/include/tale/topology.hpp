#ifndef TALE_TOPOLOGY_HPP
#define TALE_TOPOLOGY_HPP

#include "tale/pseudogroup.hpp"

namespace tale {

enum class EndType { ALE, ALF_Cyclic, ALF_Dihedral, ALG, ALH };

std::string end_type_name(EndType t);
EndType end_type_from_name(const std::string& s);

// Descriptor of the asymptotic end of an oriented 4-manifold. Exactly the
// fields required by the end type must be set.
struct EndDescriptor {
  EndType end_type = EndType::ALE;
  int chi = 0;
  int tau = 0;
  int gamma_order = 1;                 // ALE
  std::optional<double> eta_ale;       // ALE (supplied or derived)
  int euler_number = 0;                // ALF
  int monodromy_order = 1;             // ALG: 1, 2, 3, 4, 6

  void validate() const;
};

// (eta, lambda) by end type: ALE eta from the descriptor, lambda = 1/|Gamma|;
// ALF cyclic eta = -e/3 + sgn e (sgn 0 = 0); ALF dihedral -e/3; ALG from the
// monodromy table; ALH 0.
std::pair<double, double> eta_lambda(const EndDescriptor& d);

struct HTReport {
  EndDescriptor descriptor;
  double lambda = 0;
  double eta = 0;
  double slack = 0;  // 2(chi - lambda) - 3 |tau + eta|
  bool equality = false;
};

HTReport hitchin_thorpe(const EndDescriptor& d);

// eta solving the hyperkaehler equality 2(chi - 1/|Gamma|) + 3(tau + eta) = 0;
// orientation-convention dependent.
double ale_eta_from_equality(int chi, int tau, int gamma_order);

// Boundary 3-manifold of the end.
std::string classify_boundary(const EndDescriptor& d);

struct MonodromyClass {
  int order = 1;                   // 1, 2, 3, 4, 6
  Eigen::Matrix2i representative;  // conjugacy representative L_1..L_5
  int representative_index = 1;
};

// Finite-order classification of L in SL(2,Z) by trace; throws InfiniteOrder.
MonodromyClass monodromy_class(const Eigen::Matrix2i& L);

// G(A) = {W in GL(m,Z) : A W A^{-1} orthogonal}, enumerated completely for
// entry_bound >= cond(A). Verifies group closure.
std::vector<Eigen::MatrixXi> enumerate_G(const Mat& A, int entry_bound);

struct FlatTorusAtInfinity {
  int m = 0;
  std::vector<double> lengths;     // L_i
  Mat angles;                      // Theta_ij
  Mat gram;
  Mat A_matrix;                    // columns c_i; defined up to left O(m) factor
  std::vector<Eigen::MatrixXi> G_infinity;
  double fit_residual = 0;
};

struct TorusLimitOptions {
  double convergence_tol = 1e-3;
  int entry_bound_slack = 1;
};

// Limit torus from sliding traces of a basis: tail-fitted lengths L_i and
// angles Theta_ij, Gram matrix, A via Cholesky, G(A) enumeration. Throws
// NotConverged when the tail has not settled.
FlatTorusAtInfinity torus_at_infinity(const std::vector<SlidingTrace>& traces,
                                      const TorusLimitOptions& opt = {});

// Static classification tables (eta/lambda case formulas, the five finite
// monodromies, boundary labels) as a JSON string embedded in the build.
const std::string& classification_tables_json();

}  // namespace tale

#endif
