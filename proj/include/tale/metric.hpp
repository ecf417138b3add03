#ifndef TALE_METRIC_HPP
#define TALE_METRIC_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tale/errors.hpp"

namespace tale {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Word = Eigen::VectorXi;  // generator exponents (all deck groups here are abelian)

// Flat 4-index array with R(i,j,k,l) accessors.
class Tensor4 {
 public:
  Tensor4() : n_(0) {}
  explicit Tensor4(int n) : n_(n), data_(static_cast<size_t>(n) * n * n * n, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return data_[static_cast<size_t>(((i * n_ + j) * n_ + k)) * n_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return data_[static_cast<size_t>(((i * n_ + j) * n_ + k)) * n_ + l];
  }
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<double> data_;
};

// One deck generator p -> rot*p + trans acting on the covering chart.
struct DeckGenerator {
  Mat rot;
  Vec trans;
};

// Presentation of the (abelian) deck group of a quotient model. Words are
// integer exponent vectors over the generators.
class DeckPresentation {
 public:
  enum class Kind {
    FlatCyclic,   // single generator with a rotation block (screw motions)
    FlatLattice,  // pure translations on a flat chart
    FiberPeriod,  // single pure translation on a curved chart (periodic coordinate)
  };

  DeckPresentation(Kind kind, std::vector<DeckGenerator> gens)
      : kind_(kind), gens_(std::move(gens)) {}

  Kind kind() const { return kind_; }
  int rank() const { return static_cast<int>(gens_.size()); }
  const std::vector<DeckGenerator>& generators() const { return gens_; }

  // Composed affine motion of a word.
  std::pair<Mat, Vec> motion(const Word& word) const;
  Vec apply(const Word& word, const Vec& p) const;

  // All nonzero words whose chart displacement at q is < radius. Complete for
  // flat kinds (displacement admits a per-word lower bound); FiberPeriod uses
  // the chart displacement of the translation, callers on curved charts must
  // re-check true geodesic lengths.
  std::vector<Word> words_within(const Vec& q, double radius) const;

 private:
  Kind kind_;
  std::vector<DeckGenerator> gens_;
};

struct CurvatureData {
  Tensor4 riemann;         // R_{ijkl}, chart components, all indices down
  Mat ricci;               // R_{ij}
  double ricci_norm;       // Frobenius norm in an orthonormal frame
  double norm_frobenius;   // sqrt(sum R_{abcd}^2) in an orthonormal frame
  double norm_operator;    // largest |eigenvalue| of the curvature operator on 2-forms
  double symmetry_residual;  // worst relative violation of the Riemann symmetries
};

enum class ChristoffelMode { Analytic, FiniteDifference };

// Chart-based Riemannian metric. Models are immutable after construction and
// all evaluations are pure.
class MetricModel {
 public:
  virtual ~MetricModel() = default;

  const std::string& name() const { return name_; }
  int dim() const { return n_; }

  virtual Mat metric(const Vec& p) const = 0;
  virtual bool in_domain(const Vec& p) const = 0;

  // Chart radius used by the asymptotic machinery (distance-to-basepoint proxy).
  virtual double radial_coordinate(const Vec& p) const { return p.norm(); }

  // True when the chart metric is identically the identity matrix.
  virtual bool flat_chart() const { return false; }

  virtual bool has_analytic_derivatives() const { return false; }
  // dg[k](i,j) = d g_ij / d x^k
  virtual void metric_derivatives(const Vec& p, std::vector<Mat>& dg) const;
  // d2g[k][l](i,j) = d^2 g_ij / dx^k dx^l
  virtual void metric_second_derivatives(const Vec& p, std::vector<std::vector<Mat>>& d2g) const;

  // Random point of the valid domain, for sampling-based checks.
  virtual Vec sample_domain(std::mt19937_64& rng) const = 0;

  const DeckPresentation* deck() const { return deck_ ? &*deck_ : nullptr; }

  ChristoffelMode christoffel_mode() const { return mode_; }

  // Gamma[k](i,j) = Gamma^k_ij
  std::vector<Mat> christoffel(const Vec& p) const;
  std::vector<Mat> christoffel(const Vec& p, ChristoffelMode mode) const;

  CurvatureData riemann(const Vec& p) const;
  CurvatureData riemann(const Vec& p, ChristoffelMode mode) const;

  // Orthonormal frame at p: columns are the Gram-Schmidt frame of the chart
  // axes under g(p). frame_inverse maps chart components to frame components.
  Mat frame(const Vec& p) const;
  Mat frame_inverse(const Vec& p) const;

  double norm(const Vec& p, const Vec& v) const;
  double inner(const Vec& p, const Vec& v, const Vec& w) const;

  void require_domain(const Vec& p) const {
    if (!in_domain(p)) throw OutOfDomain(name_ + ": point outside valid domain");
  }

 protected:
  MetricModel(std::string name, int n) : name_(std::move(name)), n_(n) {}
  void set_deck(DeckPresentation deck) { deck_ = std::move(deck); }
  void set_mode(ChristoffelMode m) { mode_ = m; }

  std::string name_;
  int n_;
  std::optional<DeckPresentation> deck_;
  ChristoffelMode mode_ = ChristoffelMode::FiniteDifference;
};

// FD step used by the fallback paths: h = max(1e-4, 1e-4 |p|).
double fd_step(const Vec& p);

}  // namespace tale

#endif
