#ifndef TALE_ERRORS_HPP
#define TALE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace tale {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& what) : Error(what) {}
};

struct NoDeckGroup : Error {
  explicit NoDeckGroup(const std::string& what) : Error(what) {}
};

// Geodesic left the chart's valid domain at parameter t_exit.
struct LeftDomain : Error {
  double t_exit;
  explicit LeftDomain(double t) : Error("geodesic left valid domain at t=" + std::to_string(t)), t_exit(t) {}
};

struct StepUnderflow : Error {
  explicit StepUnderflow(const std::string& what) : Error(what) {}
};

struct FDUnstable : Error {
  explicit FDUnstable(const std::string& what) : Error(what) {}
};

struct NoConvergence : Error {
  int iterations;
  double residual;
  NoConvergence(int it, double res)
      : Error("shooting did not converge after " + std::to_string(it) +
              " iterations, residual " + std::to_string(res)),
        iterations(it), residual(res) {}
};

struct AmbiguousSolution : Error {
  explicit AmbiguousSolution(const std::string& what) : Error(what) {}
};

struct NotOrthogonal : Error {
  explicit NotOrthogonal(const std::string& what) : Error(what) {}
};

struct OutOfRadius : Error {
  explicit OutOfRadius(const std::string& what) : Error(what) {}
};

struct LoopEscapedRadius : Error {
  double t;
  explicit LoopEscapedRadius(double t_) : Error("slid loop escaped the radius guard at t=" + std::to_string(t_)), t(t_) {}
};

struct AxiomViolation : Error {
  std::vector<std::string> violations;
  explicit AxiomViolation(std::vector<std::string> v)
      : Error("translational-subset axioms violated (" + std::to_string(v.size()) + ")"),
        violations(std::move(v)) {}
};

struct OutOfRange : Error {
  explicit OutOfRange(const std::string& what) : Error(what) {}
};

struct EmptySubset : Error {
  explicit EmptySubset(const std::string& what) : Error(what) {}
};

struct NotRepresentable : Error {
  explicit NotRepresentable(const std::string& what) : Error(what) {}
};

struct IntegralDiverges : Error {
  explicit IntegralDiverges(const std::string& what) : Error(what) {}
};

struct HypothesisViolated : Error {
  std::string which;
  explicit HypothesisViolated(const std::string& w) : Error("hypothesis violated: " + w), which(w) {}
};

struct CurvatureUnderflow : Error {
  explicit CurvatureUnderflow(const std::string& what) : Error(what) {}
};

struct SupportViolation : Error {
  explicit SupportViolation(const std::string& what) : Error(what) {}
};

struct MissingEta : Error {
  explicit MissingEta(const std::string& what) : Error(what) {}
};

struct InfiniteOrder : Error {
  explicit InfiniteOrder(const std::string& what) : Error(what) {}
};

struct BoundTooSmall : Error {
  explicit BoundTooSmall(const std::string& what) : Error(what) {}
};

struct NotConverged : Error {
  explicit NotConverged(const std::string& what) : Error(what) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace tale

#endif
