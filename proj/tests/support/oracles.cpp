#include "oracles.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oracle {

double min_eig_hermitian(const RealMatrix& re, const RealMatrix& im) {
  Eigen::MatrixXcd h(re.rows(), re.cols());
  h.real() = re;
  h.imag() = im;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RealVector singular_values_gram(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m.transpose() * m, Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues();
  std::vector<double> s(ev.data(), ev.data() + ev.size());
  for (double& v : s) v = std::sqrt(std::max(0.0, v));
  std::sort(s.begin(), s.end(), std::greater<>());
  const auto k = std::min(m.rows(), m.cols());
  RealVector out(k);
  for (Eigen::Index i = 0; i < k; ++i) out(i) = s[static_cast<std::size_t>(i)];
  return out;
}

std::complex<double> ei_series(std::complex<double> z) {
  using boost::multiprecision::cpp_complex_100;
  using boost::multiprecision::cpp_bin_float_100;
  const cpp_complex_100 w(z.real(), z.imag());
  const cpp_bin_float_100 euler =
      cpp_bin_float_100("0.57721566490153286060651209008240243104215933593992359880576723488486772677766467");
  cpp_complex_100 term = w;
  cpp_complex_100 sum = w;
  for (int k = 2; k < 2000; ++k) {
    term *= w / cpp_bin_float_100(k);
    const cpp_complex_100 add = term / cpp_bin_float_100(k);
    sum += add;
    if (abs(add) < abs(sum) * cpp_bin_float_100("1e-40")) break;
  }
  const cpp_complex_100 r = sum + euler + log(w);
  return {static_cast<double>(r.real()), static_cast<double>(r.imag())};
}

std::string fixture_path(const std::string& name) { return std::string(GIMAG_FIXTURES) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<SpecfunPoint> specfun_reference() {
  std::istringstream in(read_file(fixture_path("specfun_mpmath.txt")));
  std::vector<SpecfunPoint> out;
  SpecfunPoint p;
  double zr, zi, vr, vi;
  while (in >> p.fn >> zr >> zi >> vr >> vi) {
    p.z = {zr, zi};
    p.value = {vr, vi};
    out.push_back(p);
  }
  return out;
}

RealMatrix gaussian_matrix(std::mt19937_64& rng, int rows, int cols, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  RealMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

RealVector gaussian_vector(std::mt19937_64& rng, int size, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  RealVector v(size);
  for (int i = 0; i < size; ++i) v(i) = g(rng);
  return v;
}

RealMatrix orthogonal(std::mt19937_64& rng, int size) {
  RealMatrix m = gaussian_matrix(rng, size, size);
  for (int j = 0; j < size; ++j) {
    for (int k = 0; k < j; ++k) m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
    m.col(j).normalize();
  }
  return m;
}

}  // namespace oracle
