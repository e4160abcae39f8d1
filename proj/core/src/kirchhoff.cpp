#include "jostkit/kirchhoff.hpp"

#include <cmath>
#include <stdexcept>

namespace jostkit {

namespace {

__extension__ typedef __int128 i128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Fraction reduce(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr i128 lim = static_cast<i128>(INT64_MAX);
  if (num > lim || num < -lim || den > lim) throw std::overflow_error("fraction overflow");
  Fraction f;
  f.num = static_cast<std::int64_t>(num);
  f.den = static_cast<std::int64_t>(den);
  return f;
}

const double kRoot = std::sqrt(26273.0);

RefEntry re(Fraction f) { return {{f, 0}, {0, 0}}; }
RefEntry im(Fraction f) { return {{0, 0}, {f, 0}}; }
RefEntry re_surd(Fraction r, Fraction s) { return {{r, s}, {0, 0}}; }
RefEntry im_surd(Fraction r, Fraction s) { return {{0, 0}, {r, s}}; }

RefMatrix mat(Eigen::Index rows, Eigen::Index cols, std::vector<RefEntry> e) {
  if (static_cast<Eigen::Index>(e.size()) != rows * cols) throw std::logic_error("reference matrix size");
  return {rows, cols, std::move(e)};
}

RefMatrix real3(const std::vector<Fraction>& v) {
  std::vector<RefEntry> e;
  for (const auto& f : v) e.push_back(re(f));
  return mat(3, 3, std::move(e));
}

RefMatrix imag3(const std::vector<Fraction>& v) {
  std::vector<RefEntry> e;
  for (const auto& f : v) e.push_back(im(f));
  return mat(3, 3, std::move(e));
}

Fraction F(std::int64_t n, std::int64_t d) { return Fraction(n, d); }

}  // namespace

Fraction::Fraction(std::int64_t n, std::int64_t d) { *this = reduce(n, d); }

Fraction operator+(const Fraction& a, const Fraction& b) {
  return reduce(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den, static_cast<i128>(a.den) * b.den);
}
Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }
Fraction operator*(const Fraction& a, const Fraction& b) {
  return reduce(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}
Fraction operator/(const Fraction& a, const Fraction& b) {
  return reduce(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}
Fraction operator-(const Fraction& a) {
  Fraction f;
  f.num = -a.num;
  f.den = a.den;
  return f;
}

std::string to_string(const Fraction& f) {
  if (f.den == 1) return std::to_string(f.num);
  return std::to_string(f.num) + "/" + std::to_string(f.den);
}

Fraction Fraction::approximate(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite value");
  // Continued-fraction convergents.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 9e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    const std::int64_t h2 = ai * h1 + h0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) break;
    const double frac = r - a;
    if (frac < 1e-18) break;
    r = 1.0 / frac;
  }
  return Fraction(h1, k1);
}

Fraction Fraction::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t used = 0;
      const std::int64_t p = std::stoll(text.substr(0, slash), &used);
      if (used != slash) throw std::invalid_argument(text);
      const std::string rest = text.substr(slash + 1);
      const std::int64_t q = std::stoll(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(text);
      return Fraction(p, q);
    }
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return approximate(v);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::ParseError, "not a number or fraction: '" + text + "'");
  }
}

double Surd::value() const { return rational.value() + radical.value() * kRoot; }

ComplexMatrix RefMatrix::value() const {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entries[static_cast<std::size_t>(r * cols + c)].value();
  }
  return m;
}

Fraction det3(const std::vector<Fraction>& m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6]);
}

KirchhoffExample::KirchhoffExample(Fraction gamma) : gamma_(gamma) {
  const Fraction g = gamma;
  const Fraction one = 1;

  refs_["A"] = real3({0, 0, 1, 0, 0, 1, 0, 0, 1});
  refs_["B"] = real3({-1, 0, 0, 1, -1, 0, 0, 1, 0});
  refs_["phi00"] = refs_["A"];
  refs_["omega1_0"] = real3({0, 0, 0, 0, 0, 0, 0, 0, 0});
  refs_["omega1p_0"] = refs_["omega1_0"];

  refs_["f00"] = real3({F(5, 3), 0, 0, 0, 2, 1, 0, 1, g + one});
  refs_["fp00"] = real3({F(-16, 9), 0, 0, 0, -1, -1, 0, -1, -g});
  refs_["fd00"] = imag3({F(2, 3), 0, 0, 0, 1, 1, 0, 1, g});
  refs_["fdp00"] = imag3({F(-1, 9), 0, 0, 0, 0, -1, 0, -1, one - g});

  refs_["J0"] = real3({F(-5, 3), 0, F(16, 9), 2, -1, 2, 1, g, one + g});
  refs_["J0dot"] = imag3({F(-2, 3), 0, F(1, 9), 1, 0, 1, 1, g - one, g});

  if (!is_exceptional()) {
    const Fraction den = F(77, 1) * g + F(31, 1);
    refs_["S0"] = real3({-1, 0, 0, 0, -1, 0, 0, 0, -1});
    refs_["S0dot"] = imag3({F(2, 1) * (F(20, 1) * g + F(7, 1)) / den, F(-18, 1) * g / den, F(-18, 1) / den,
                            F(-18, 1) * g / den, F(62, 1) * g / den, F(62, 1) / den,
                            F(-18, 1) / den, F(62, 1) / den, F(2, 1) * (F(77, 1) * g - F(46, 1)) / den});
    return;
  }

  const std::int64_t d7 = 6971;
  const std::vector<std::int64_t> m1{144, -496, 1232, 558, -1922, 4774, 135, -465, 1155};
  std::vector<Fraction> m1f;
  for (auto v : m1) m1f.push_back(F(v, d7));
  refs_["M1"] = real3(m1f);
  refs_["Jinv_pole"] = imag3(m1f);

  const std::int64_t q1 = 48594841, q3 = 145784523;
  refs_["M2"] = real3({F(-16095714, q1), F(22880111, q3), F(32930051, q3),
                       F(-10281837, q1), F(-30462632, q3), F(61380319, q3),
                       F(11927250, q1), F(8244046, q1), F(7573258, q1)});
  refs_["E1"] = refs_["M2"];

  refs_["S0"] = real3({F(-6809, d7), F(-558, d7), F(1386, d7),
                       F(-558, d7), F(-5049, d7), F(-4774, d7),
                       F(1386, d7), F(-4774, d7), F(4887, d7)});
  refs_["S0dot"] = imag3({F(24111452, q1), F(-8336928, q1), F(-12952632, q1),
                          F(-8336928, q1), F(95224498, q3), F(111299650, q3),
                          F(-12952632, q1), F(111299650, q3), F(-124617494, q3)});

  refs_["q1_0"] = real3({F(16, 15), 0, 0, 0, F(-2, 5), F(2438, 385), 0, F(2438, 385), F(-275162, 29645)});
  refs_["R"] = real3({0, 0, F(3, 5), 0, 0, F(-31, 15), 0, 0, F(77, 15)});
  refs_["F2"] = real3({0, 0, F(-16, 25), 0, 0, F(-100, 3), 0, 0, F(70148, 1155)});

  refs_["calS"] = mat(3, 3,
                      {re(F(16, 15)), re_surd(F(-73, 102), F(1, 102)), re_surd(F(-73, 102), F(-1, 102)),
                       re(F(62, 15)), re_surd(F(2399, 1054), F(3, 1054)), re_surd(F(2399, 1054), F(-3, 1054)),
                       re(1), re(1), re(1)});
  const RefEntry l2 = re_surd(F(-239, 231), F(2, 231));
  const RefEntry l3 = re_surd(F(-239, 231), F(-2, 231));
  refs_["D0"] = mat(2, 2, {l2, re(0), re(0), l3});
  refs_["eigenvalues"] = mat(3, 1, {re(0), l2, l3});

  const Fraction a1 = F(6971, 623);
  refs_["A1"] = mat(1, 1, {im(a1)});
  refs_["B1"] = mat(1, 2, {im(a1), im(a1)});
  const std::int64_t root = 26273;
  const RefEntry c1p = im_surd(F(-76268, 9345), F(-11541857, 9345 * root));
  const RefEntry c1m = im_surd(F(-76268, 9345), F(11541857, 9345 * root));
  refs_["C1"] = mat(2, 1, {c1p, c1m});
  refs_["D1"] = mat(2, 2, {c1p, c1p, c1m, c1m});

  const Fraction a2 = F(-427808, 3115);
  refs_["A2"] = mat(1, 1, {re(a2)});
  refs_["B2"] = mat(1, 2, {re(a2), re(a2)});
  const RefEntry c2p = re_surd(F(10180418, 102795), F(7539081034, 513975 * root));
  const RefEntry c2m = re_surd(F(10180418, 102795), F(-7539081034, 513975 * root));
  refs_["C2"] = mat(2, 1, {c2p, c2m});
  refs_["D2"] = mat(2, 2, {c2p, c2p, c2m, c2m});

  const std::int64_t big = 95754919319475;
  const RefEntry e2p = im_surd(F(855616 * 2003789164LL, big), F(855616LL * 11541857LL, big));
  const RefEntry e2m = im_surd(F(855616 * 2003789164LL, big), F(-855616LL * 11541857LL, big));
  refs_["E2"] = mat(3, 3, {im(F(-855616, 34855)), re(0), re(0), e2p, re(0), re(0), e2m, re(0), re(0)});
  const RefEntry e3p = im_surd(F(427808 * 2003789164LL, big), F(427808LL * 11541857LL, big));
  const RefEntry e3m = im_surd(F(427808 * 2003789164LL, big), F(-427808LL * 11541857LL, big));
  refs_["E3"] = mat(2, 1, {e3p, e3m});
}

const RefMatrix& KirchhoffExample::exact(const std::string& label) const {
  auto it = refs_.find(label);
  if (it == refs_.end()) throw std::out_of_range("no reference '" + label + "' for gamma=" + to_string(gamma_));
  return it->second;
}

std::vector<std::string> KirchhoffExample::labels() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : refs_) out.push_back(k);
  return out;
}

std::vector<double> KirchhoffExample::exceptional_eigenvalues() {
  return {0.0, (-239.0 + 2.0 * kRoot) / 231.0, (-239.0 - 2.0 * kRoot) / 231.0};
}

ComplexMatrix KirchhoffExample::A() const { return reference("A"); }
ComplexMatrix KirchhoffExample::B() const { return reference("B"); }

ComplexMatrix KirchhoffExample::Gamma() const {
  ComplexMatrix g = ComplexMatrix::Zero(3, 3);
  g(1, 1) = 1.0;
  g(1, 2) = 1.0;
  g(2, 1) = 1.0;
  g(2, 2) = gamma_.value();
  return g;
}

BoundaryCondition KirchhoffExample::boundary() const { return validate_boundary(A(), B()); }

PotentialModel KirchhoffExample::potential(double x_max) const {
  BuiltinProfile bump;
  bump.name = "sech_star";
  return PotentialModel(3, x_max, {Piece{0.0, x_max, bump}}, {PointInteraction{1.0, Gamma()}});
}

std::string KirchhoffExample::to_document(double x_max) const {
  return serialize_problem(potential(x_max), boundary());
}

FieldValue KirchhoffExample::exact_jost(Complex k, double x) const {
  const double g = gamma_.value();
  const Complex e = std::exp(kI * k * x);
  const double E = std::exp(2.0 * x);
  const double D = 4.0 * E - 1.0;
  ComplexMatrix f = ComplexMatrix::Zero(3, 3);
  ComplexMatrix fp = ComplexMatrix::Zero(3, 3);

  const Complex c = 2.0 * kI / (k + kI);
  f(0, 0) = e * (1.0 + c / D);
  fp(0, 0) = kI * k * f(0, 0) - e * c * 8.0 * E / (D * D);

  if (x < 1.0) {
    const Complex r = std::exp(kI * k * (2.0 - x));
    const Complex h = kI / (2.0 * k);
    f(1, 1) = e * (1.0 + h) - h * r;
    fp(1, 1) = kI * k * e * (1.0 + h) - 0.5 * r;
    f(1, 2) = f(2, 1) = h * (e - r);
    fp(1, 2) = fp(2, 1) = -0.5 * (e + r);
    f(2, 2) = e * (1.0 + g * h) - g * h * r;
    fp(2, 2) = kI * k * e * (1.0 + g * h) - 0.5 * g * r;
  } else {
    f(1, 1) = f(2, 2) = e;
    fp(1, 1) = fp(2, 2) = kI * k * e;
  }
  return {f, fp};
}

FieldValue KirchhoffExample::exact_jost_zero(double x) const {
  const double g = gamma_.value();
  const double E = std::exp(2.0 * x);
  const double D = 4.0 * E - 1.0;
  ComplexMatrix f = ComplexMatrix::Zero(3, 3);
  ComplexMatrix fp = ComplexMatrix::Zero(3, 3);
  f(0, 0) = 1.0 + 2.0 / D;
  fp(0, 0) = -16.0 * E / (D * D);
  if (x < 1.0) {
    f(1, 1) = 2.0 - x;
    fp(1, 1) = -1.0;
    f(1, 2) = f(2, 1) = 1.0 - x;
    fp(1, 2) = fp(2, 1) = -1.0;
    f(2, 2) = 1.0 + g * (1.0 - x);
    fp(2, 2) = -g;
  } else {
    f(1, 1) = f(2, 2) = 1.0;
  }
  return {f, fp};
}

FieldValue KirchhoffExample::exact_jost_zero_dot(double x) const {
  const double g = gamma_.value();
  const double E = std::exp(2.0 * x);
  const double D = 4.0 * E - 1.0;
  ComplexMatrix f = ComplexMatrix::Zero(3, 3);
  ComplexMatrix fp = ComplexMatrix::Zero(3, 3);
  f(0, 0) = kI * (x * (1.0 + 2.0 / D) + 2.0 / D);
  fp(0, 0) = kI * (1.0 + 2.0 / D - 16.0 * x * E / (D * D) - 16.0 * E / (D * D));
  if (x < 1.0) {
    f(1, 1) = kI;
    fp(1, 1) = 0.0;
    f(1, 2) = f(2, 1) = kI * (1.0 - x);
    fp(1, 2) = fp(2, 1) = -kI;
    f(2, 2) = kI * (x + g * (1.0 - x));
    fp(2, 2) = kI * (1.0 - g);
  } else {
    f(1, 1) = f(2, 2) = kI * x;
    fp(1, 1) = fp(2, 2) = kI;
  }
  return {f, fp};
}

}  // namespace jostkit
