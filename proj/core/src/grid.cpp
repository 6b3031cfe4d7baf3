#include "hawkes/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace hawkes {
namespace {

constexpr std::size_t kFftThreshold = 1u << 21;  // direct-sum op count cutoff

// Plain full discrete convolution c[k] = sum_j a[j] b[k-j].
std::vector<double> conv_plain_direct(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> c(na + nb - 1, 0.0);
  for (std::size_t j = 0; j < na; ++j) {
    const double aj = a[j];
    if (aj == 0.0) continue;
    for (std::size_t i = 0; i < nb; ++i) c[j + i] += aj * b[i];
  }
  return c;
}

std::vector<double> conv_plain_fft(const std::vector<double>& a,
                                   const std::vector<double>& b) {
  const std::size_t n = a.size() + b.size() - 1;
  std::size_t m = 1;
  while (m < n) m <<= 1;
  const std::size_t mc = m / 2 + 1;

  double* ra = fftw_alloc_real(m);
  double* rb = fftw_alloc_real(m);
  fftw_complex* ca = fftw_alloc_complex(mc);
  fftw_complex* cb = fftw_alloc_complex(mc);

  std::memset(ra, 0, m * sizeof(double));
  std::memset(rb, 0, m * sizeof(double));
  std::copy(a.begin(), a.end(), ra);
  std::copy(b.begin(), b.end(), rb);

  fftw_plan pa = fftw_plan_dft_r2c_1d(static_cast<int>(m), ra, ca,
                                      FFTW_ESTIMATE);
  fftw_plan pb = fftw_plan_dft_r2c_1d(static_cast<int>(m), rb, cb,
                                      FFTW_ESTIMATE);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t i = 0; i < mc; ++i) {
    const double re = ca[i][0] * cb[i][0] - ca[i][1] * cb[i][1];
    const double im = ca[i][0] * cb[i][1] + ca[i][1] * cb[i][0];
    ca[i][0] = re;
    ca[i][1] = im;
  }
  fftw_plan pc = fftw_plan_dft_c2r_1d(static_cast<int>(m), ca, ra,
                                      FFTW_ESTIMATE);
  fftw_execute(pc);

  std::vector<double> c(n);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) c[i] = ra[i] * scale;

  fftw_destroy_plan(pa);
  fftw_destroy_plan(pb);
  fftw_destroy_plan(pc);
  fftw_free(ra);
  fftw_free(rb);
  fftw_free(ca);
  fftw_free(cb);
  return c;
}

// Full convolution scaled to the trapezoid rule: for each output k the
// plain sum runs over the index window j in [max(0,k-nb+1), min(k,na-1)];
// subtracting half the two window-edge products turns the Riemann sum into
// the exact trapezoid rule for int f(u) g(t-u) du on the active interval.
std::vector<double> conv_trapezoid(const std::vector<double>& a,
                                   const std::vector<double>& b, double dt) {
  if (a.empty() || b.empty()) return {};
  const std::size_t na = a.size(), nb = b.size();
  std::vector<double> c = (na * nb > kFftThreshold) ? conv_plain_fft(a, b)
                                                    : conv_plain_direct(a, b);
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::size_t jlo = (k >= nb) ? k - (nb - 1) : 0;
    const std::size_t jhi = std::min(k, na - 1);
    c[k] -= 0.5 * (a[jlo] * b[k - jlo] + a[jhi] * b[k - jhi]);
    c[k] *= dt;
  }
  return c;
}

}  // namespace

double GridFunction::l1() const {
  if (values.size() < 2) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  s -= 0.5 * (values.front() + values.back());
  return s * dt;
}

double GridFunction::operator()(double t) const {
  if (values.empty() || t < 0.0) return 0.0;
  const double x = t / dt;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= values.size())
    return (x <= static_cast<double>(values.size() - 1)) ? values.back() : 0.0;
  const double f = x - static_cast<double>(i);
  return values[i] * (1.0 - f) + values[i + 1] * f;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  if (f.dt != g.dt)
    throw std::invalid_argument("convolve: mismatched grid steps");
  return GridFunction{f.dt, conv_trapezoid(f.values, g.values, f.dt)};
}

double TwoSidedGrid::at_lag(double w) const {
  if (values.empty()) return 0.0;
  const double x = w / dt - static_cast<double>(lo);
  if (x < 0.0 || x > static_cast<double>(values.size() - 1)) return 0.0;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= values.size()) return values.back();
  const double f = x - static_cast<double>(i);
  return values[i] * (1.0 - f) + values[i + 1] * f;
}

double TwoSidedGrid::l1() const {
  if (values.size() < 2) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  s -= 0.5 * (values.front() + values.back());
  return s * dt;
}

TwoSidedGrid to_two_sided(const GridFunction& f) {
  return TwoSidedGrid{f.dt, 0, f.values};
}

TwoSidedGrid mirror(const GridFunction& f) {
  TwoSidedGrid out;
  out.dt = f.dt;
  out.lo = -static_cast<std::ptrdiff_t>(f.values.size()) + 1;
  out.values.assign(f.values.rbegin(), f.values.rend());
  return out;
}

TwoSidedGrid convolve(const GridFunction& f, const TwoSidedGrid& g) {
  if (f.dt != g.dt)
    throw std::invalid_argument("convolve: mismatched grid steps");
  TwoSidedGrid out;
  out.dt = f.dt;
  out.lo = g.lo;
  out.values = conv_trapezoid(f.values, g.values, f.dt);
  return out;
}

TwoSidedGrid correlate(const GridFunction& f, const TwoSidedGrid& g) {
  if (f.dt != g.dt)
    throw std::invalid_argument("correlate: mismatched grid steps");
  // corr(f,g)(w) = int f(c) g(w + c) dc = conv(rev f, g)(w + (nf-1) dt).
  std::vector<double> fr(f.values.rbegin(), f.values.rend());
  TwoSidedGrid out;
  out.dt = f.dt;
  out.lo = g.lo - static_cast<std::ptrdiff_t>(f.values.size()) + 1;
  out.values = conv_trapezoid(fr, g.values, f.dt);
  return out;
}

TwoSidedGrid correlate(const GridFunction& f, const GridFunction& g) {
  return correlate(f, to_two_sided(g));
}

void trim(TwoSidedGrid& g, double tol) {
  std::size_t b = 0, e = g.values.size();
  while (b < e && std::abs(g.values[b]) < tol) ++b;
  while (e > b && std::abs(g.values[e - 1]) < tol) --e;
  if (b == 0 && e == g.values.size()) return;
  g.values = std::vector<double>(g.values.begin() + static_cast<long>(b),
                                 g.values.begin() + static_cast<long>(e));
  g.lo += static_cast<std::ptrdiff_t>(b);
}

}  // namespace hawkes
