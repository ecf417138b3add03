#ifndef TALE_EXACTQ_HPP
#define TALE_EXACTQ_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <string>
#include <vector>

namespace tale {

using Rat = boost::multiprecision::cpp_rational;

inline int sgn(const Rat& x) { return x.sign(); }
inline double to_double(const Rat& x) { return static_cast<double>(x); }
inline int sgn(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
inline double to_double(double x) { return x; }

// Element of the real quadratic field Q[sqrt(D)], D squarefree, D > 1.
template <int D>
struct Quad {
  Rat a, b;  // a + b sqrt(D)

  Quad() : a(0), b(0) {}
  Quad(int v) : a(v), b(0) {}  // NOLINT: implicit by design
  Quad(Rat v) : a(std::move(v)), b(0) {}
  Quad(Rat x, Rat y) : a(std::move(x)), b(std::move(y)) {}

  Quad operator+(const Quad& o) const { return {a + o.a, b + o.b}; }
  Quad operator-(const Quad& o) const { return {a - o.a, b - o.b}; }
  Quad operator-() const { return {-a, -b}; }
  Quad operator*(const Quad& o) const {
    return {a * o.a + Rat(D) * b * o.b, a * o.b + b * o.a};
  }
  Quad operator/(const Quad& o) const {
    Rat den = o.a * o.a - Rat(D) * o.b * o.b;
    if (den == 0) throw std::domain_error("Quad: division by zero");
    return {(a * o.a - Rat(D) * b * o.b) / den, (b * o.a - a * o.b) / den};
  }
  Quad& operator+=(const Quad& o) { return *this = *this + o; }
  Quad& operator-=(const Quad& o) { return *this = *this - o; }
  bool operator==(const Quad& o) const { return a == o.a && b == o.b; }
  bool operator!=(const Quad& o) const { return !(*this == o); }
};

template <int D>
int sgn(const Quad<D>& x) {
  const int sa = sgn(x.a), sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  const Rat lhs = x.a * x.a, rhs = Rat(D) * x.b * x.b;
  const int c = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
  if (c == 0) return 0;
  return sa > 0 ? c : -c;  // |a| dominates <=> sign of a wins
}

template <int D>
double to_double(const Quad<D>& x) {
  return to_double(x.a) + to_double(x.b) * std::sqrt(static_cast<double>(D));
}

template <int D>
bool operator<(const Quad<D>& x, const Quad<D>& y) {
  return sgn(x - y) < 0;
}
template <int D>
bool operator<=(const Quad<D>& x, const Quad<D>& y) {
  return sgn(x - y) <= 0;
}
template <int D>
bool operator>(const Quad<D>& x, const Quad<D>& y) {
  return sgn(x - y) > 0;
}
template <int D>
bool operator>=(const Quad<D>& x, const Quad<D>& y) {
  return sgn(x - y) >= 0;
}

// floor of an exact scalar (double estimate corrected by exact comparisons)
template <class S>
long long exact_floor(const S& x) {
  long long f = static_cast<long long>(std::floor(to_double(x)));
  while (S(static_cast<int>(f + 1)) <= x) ++f;
  while (S(static_cast<int>(f)) > x) --f;
  return f;
}
inline long long exact_floor(double x) { return static_cast<long long>(std::floor(x)); }

// small exact-vector helpers
template <class S>
using VecS = std::vector<S>;

template <class S>
S dotS(const VecS<S>& u, const VecS<S>& v) {
  S s(0);
  for (size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}
template <class S>
S norm2S(const VecS<S>& u) {
  return dotS(u, u);
}
template <class S>
VecS<S> subS(const VecS<S>& u, const VecS<S>& v) {
  VecS<S> w(u.size());
  for (size_t i = 0; i < u.size(); ++i) w[i] = u[i] - v[i];
  return w;
}
template <class S>
VecS<S> addS(const VecS<S>& u, const VecS<S>& v) {
  VecS<S> w(u.size());
  for (size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i];
  return w;
}
template <class S>
VecS<S> scaleS(const S& c, const VecS<S>& u) {
  VecS<S> w(u.size());
  for (size_t i = 0; i < u.size(); ++i) w[i] = c * u[i];
  return w;
}
template <class S>
bool is_zeroS(const VecS<S>& u) {
  for (const S& x : u)
    if (sgn(x) != 0) return false;
  return true;
}
template <class S>
std::vector<double> to_doubleS(const VecS<S>& u) {
  std::vector<double> w(u.size());
  for (size_t i = 0; i < u.size(); ++i) w[i] = to_double(u[i]);
  return w;
}

}  // namespace tale

#endif
