#include "core/poly.hpp"

#include <algorithm>

namespace ndelab::poly {

double eval(const Coeffs& c, double x) {
  double r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

Coeffs derivative(const Coeffs& c) {
  if (c.size() <= 1) return {0.0};
  Coeffs d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

Coeffs multiply(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {0.0};
  Coeffs r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Coeffs add(const Coeffs& a, const Coeffs& b) {
  Coeffs r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Coeffs scale(const Coeffs& a, double s) {
  Coeffs r(a);
  for (auto& v : r) v *= s;
  return r;
}

Coeffs trim(Coeffs c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
  return c;
}

}  // namespace ndelab::poly
