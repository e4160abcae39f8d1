#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jostkit/field.hpp"
#include "jostkit/matrix.hpp"
#include "jostkit/model.hpp"

namespace jostkit {

// Exact rational with int64 storage; arithmetic reduces through 128-bit
// intermediates and throws on overflow.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n) : num(n) {}  // NOLINT(google-explicit-constructor)
  Fraction(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }

  // Parses "p", "p/q" or a decimal (converted to the nearest fraction with
  // denominator <= 10^6).
  static Fraction parse(const std::string& text);
  static Fraction approximate(double x, std::int64_t max_den = 1000000);
};

Fraction operator+(const Fraction& a, const Fraction& b);
Fraction operator-(const Fraction& a, const Fraction& b);
Fraction operator*(const Fraction& a, const Fraction& b);
Fraction operator/(const Fraction& a, const Fraction& b);
Fraction operator-(const Fraction& a);
std::string to_string(const Fraction& f);

// p + q sqrt(26273), the only surd in the example.
struct Surd {
  Fraction rational;
  Fraction radical;
  double value() const;
};

struct RefEntry {
  Surd re;
  Surd im;
  Complex value() const { return {re.value(), im.value()}; }
};

struct RefMatrix {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  std::vector<RefEntry> entries;  // row-major
  ComplexMatrix value() const;
};

// Three-lead star graph: a reflectionless bump on lead 1, a point interaction
// coupling leads 2 and 3 at x = 1, Kirchhoff conditions at the vertex.
class KirchhoffExample {
 public:
  explicit KirchhoffExample(Fraction gamma);
  explicit KirchhoffExample(double gamma) : KirchhoffExample(Fraction::approximate(gamma)) {}

  static Fraction exceptional_gamma() { return Fraction(-31, 77); }

  const Fraction& gamma() const { return gamma_; }
  double gamma_value() const { return gamma_.value(); }
  bool is_exceptional() const { return gamma_ == exceptional_gamma(); }

  ComplexMatrix A() const;
  ComplexMatrix B() const;
  ComplexMatrix Gamma() const;
  BoundaryCondition boundary() const;
  PotentialModel potential(double x_max = 13.0) const;
  // Potential document including the boundary pair.
  std::string to_document(double x_max = 13.0) const;

  // f(k,x), f'(k,x); k != 0.  At x = 1 the derivative is right-sided.
  FieldValue exact_jost(Complex k, double x) const;
  // f(0,x), f'(0,x) and d/dk of both at k = 0.
  FieldValue exact_jost_zero(double x) const;
  FieldValue exact_jost_zero_dot(double x) const;

  bool has(const std::string& label) const { return refs_.count(label) > 0; }
  const RefMatrix& exact(const std::string& label) const;
  ComplexMatrix reference(const std::string& label) const { return exact(label).value(); }
  std::vector<std::string> labels() const;

  // Eigenvalues of J(0) at the exceptional value, in the order 0, lambda_2,
  // lambda_3.
  static std::vector<double> exceptional_eigenvalues();

 private:
  Fraction gamma_;
  std::map<std::string, RefMatrix> refs_;
};

// Exact 3x3 rational determinant.
Fraction det3(const std::vector<Fraction>& row_major);

}  // namespace jostkit
