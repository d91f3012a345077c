#pragma once

#include <vector>

namespace ndelab::poly {

// ascending coefficients: c[0] + c[1] x + ...
using Coeffs = std::vector<double>;

double eval(const Coeffs& c, double x);
Coeffs derivative(const Coeffs& c);
Coeffs multiply(const Coeffs& a, const Coeffs& b);
Coeffs add(const Coeffs& a, const Coeffs& b);
Coeffs scale(const Coeffs& a, double s);
// drops trailing zero coefficients (keeps at least one)
Coeffs trim(Coeffs c);

}  // namespace ndelab::poly
