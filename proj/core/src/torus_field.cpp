#include "longwave/torus_field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <tuple>

namespace longwave {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

std::size_t grid_size(int dim, int n) {
  return dim == 1 ? static_cast<std::size_t>(n)
                  : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
}

// Plans are created once per (dim, n, sign) with FFTW_UNALIGNED so they can be
// executed on any buffer; plan creation is the only non-thread-safe FFTW call.
fftw_plan get_plan(int dim, int n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  std::vector<cplx> scratch(grid_size(dim, n));
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = (dim == 1) ? fftw_plan_dft_1d(n, p, p, sign, flags)
                              : fftw_plan_dft_2d(n, n, p, p, sign, flags);
  g_plans.emplace(key, plan);
  return plan;
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw BadInput("field dimension must be 1 or 2");
}

}  // namespace

int fft_freq(int slot, int n) { return slot <= n / 2 ? slot : slot - n; }

int fft_slot(int f, int n) { return ((f % n) + n) % n; }

void fft_forward(int dim, int n, cplx* data) {
  fftw_plan plan = get_plan(dim, n, FFTW_FORWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

void fft_inverse(int dim, int n, cplx* data) {
  fftw_plan plan = get_plan(dim, n, FFTW_BACKWARD);
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, p, p);
}

PeriodicField::PeriodicField(int dim, int n) : dim_(dim), n_(n) {
  check_dim(dim);
  if (n < 2 || n % 2 != 0) throw BadInput("grid size must be even and >= 2");
  c_.assign(grid_size(dim, n), cplx(0.0, 0.0));
}

PeriodicField PeriodicField::constant(int dim, int n, double value) {
  PeriodicField f(dim, n);
  f.c_[0] = value;
  return f;
}

PeriodicField PeriodicField::from_samples(int dim, int n, const std::vector<double>& values) {
  PeriodicField f(dim, n);
  if (values.size() != f.c_.size()) throw BadInput("sample count does not match grid");
  for (std::size_t i = 0; i < values.size(); ++i) f.c_[i] = values[i];
  fft_forward(dim, n, f.c_.data());
  double scale = 1.0 / static_cast<double>(f.c_.size());
  for (auto& v : f.c_) v *= scale;
  f.enforce_real();
  return f;
}

PeriodicField PeriodicField::from_function(int dim, int n,
                                           const std::function<double(double, double)>& fn) {
  std::vector<double> v(grid_size(dim, n));
  if (dim == 1) {
    for (int i = 0; i < n; ++i) v[i] = fn(static_cast<double>(i) / n, 0.0);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        v[static_cast<std::size_t>(i) * n + j] =
            fn(static_cast<double>(i) / n, static_cast<double>(j) / n);
  }
  return from_samples(dim, n, v);
}

PeriodicField PeriodicField::random_band_limited(int dim, int n, int max_mode,
                                                 double amplitude, unsigned seed,
                                                 double decay) {
  if (max_mode < 1 || max_mode > n / 2 - 1) throw BadInput("max_mode out of range");
  PeriodicField f(dim, n);
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto put = [&](int f1, int f2) {
    double mag = amplitude / std::pow(1.0 + std::hypot(f1, f2), decay);
    cplx v(gauss(rng), gauss(rng));
    v *= mag / std::sqrt(2.0);
    f.set_coeff(f1, f2, v);
    f.set_coeff(-f1, -f2, std::conj(v));
  };
  if (dim == 1) {
    for (int f1 = 1; f1 <= max_mode; ++f1) put(f1, 0);
  } else {
    for (int f1 = 0; f1 <= max_mode; ++f1)
      for (int f2 = -max_mode; f2 <= max_mode; ++f2) {
        if (f1 == 0 && f2 <= 0) continue;
        put(f1, f2);
      }
  }
  return f;
}

cplx PeriodicField::coeff(int f1, int f2) const {
  if (dim_ == 1) return c_[fft_slot(f1, n_)];
  return c_[static_cast<std::size_t>(fft_slot(f1, n_)) * n_ + fft_slot(f2, n_)];
}

void PeriodicField::set_coeff(int f1, int f2, cplx v) {
  if (dim_ == 1)
    c_[fft_slot(f1, n_)] = v;
  else
    c_[static_cast<std::size_t>(fft_slot(f1, n_)) * n_ + fft_slot(f2, n_)] = v;
}

double PeriodicField::mean() const { return c_.empty() ? 0.0 : c_[0].real(); }

void PeriodicField::subtract_mean() {
  if (!c_.empty()) c_[0] = cplx(0.0, 0.0);
}

PeriodicField PeriodicField::derivative(int axis) const {
  if (axis < 0 || axis >= dim_) throw BadInput("derivative axis out of range");
  PeriodicField out(dim_, n_);
  if (dim_ == 1) {
    for (int s = 0; s < n_; ++s) {
      int f = fft_freq(s, n_);
      if (f == n_ / 2) continue;  // drop Nyquist to stay Hermitian
      out.c_[s] = c_[s] * cplx(0.0, kTwoPi * f);
    }
  } else {
    for (int s1 = 0; s1 < n_; ++s1)
      for (int s2 = 0; s2 < n_; ++s2) {
        int f = fft_freq(axis == 0 ? s1 : s2, n_);
        if (f == n_ / 2) continue;
        out.c_[static_cast<std::size_t>(s1) * n_ + s2] =
            c_[static_cast<std::size_t>(s1) * n_ + s2] * cplx(0.0, kTwoPi * f);
      }
  }
  return out;
}

double PeriodicField::norm_l2() const {
  double s = 0.0;
  for (const auto& v : c_) s += std::norm(v);
  return std::sqrt(s);
}

double PeriodicField::max_abs() const {
  auto v = samples();
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double PeriodicField::min_on_grid(int oversample) const {
  auto v = samples(n_ * std::max(1, oversample));
  return *std::min_element(v.begin(), v.end());
}

std::vector<double> PeriodicField::samples(int m) const {
  if (m == 0) m = n_;
  if (m < n_) throw BadInput("sample grid coarser than the stored band");
  std::vector<cplx> buf(grid_size(dim_, m), cplx(0.0, 0.0));
  if (dim_ == 1) {
    for (int s = 0; s < n_; ++s) buf[fft_slot(fft_freq(s, n_), m)] = c_[s];
  } else {
    for (int s1 = 0; s1 < n_; ++s1)
      for (int s2 = 0; s2 < n_; ++s2)
        buf[static_cast<std::size_t>(fft_slot(fft_freq(s1, n_), m)) * m +
            fft_slot(fft_freq(s2, n_), m)] = c_[static_cast<std::size_t>(s1) * n_ + s2];
  }
  fft_inverse(dim_, m, buf.data());
  std::vector<double> out(buf.size());
  for (std::size_t i = 0; i < buf.size(); ++i) out[i] = buf[i].real();
  return out;
}

double PeriodicField::eval(double y1, double y2) const {
  cplx acc(0.0, 0.0);
  if (dim_ == 1) {
    for (int s = 0; s < n_; ++s) {
      int f = fft_freq(s, n_);
      acc += c_[s] * std::polar(1.0, kTwoPi * f * y1);
    }
  } else {
    for (int s1 = 0; s1 < n_; ++s1) {
      int f1 = fft_freq(s1, n_);
      cplx row(0.0, 0.0);
      for (int s2 = 0; s2 < n_; ++s2) {
        int f2 = fft_freq(s2, n_);
        row += c_[static_cast<std::size_t>(s1) * n_ + s2] * std::polar(1.0, kTwoPi * f2 * y2);
      }
      acc += row * std::polar(1.0, kTwoPi * f1 * y1);
    }
  }
  return acc.real();
}

void PeriodicField::enforce_real() {
  if (dim_ == 1) {
    for (int s = 0; s < n_; ++s) {
      int t = fft_slot(-fft_freq(s, n_), n_);
      if (t < s) continue;
      cplx avg = 0.5 * (c_[s] + std::conj(c_[t]));
      c_[s] = avg;
      c_[t] = std::conj(avg);
    }
  } else {
    for (int s1 = 0; s1 < n_; ++s1)
      for (int s2 = 0; s2 < n_; ++s2) {
        int t1 = fft_slot(-fft_freq(s1, n_), n_);
        int t2 = fft_slot(-fft_freq(s2, n_), n_);
        std::size_t a = static_cast<std::size_t>(s1) * n_ + s2;
        std::size_t b = static_cast<std::size_t>(t1) * n_ + t2;
        if (b < a) continue;
        cplx avg = 0.5 * (c_[a] + std::conj(c_[b]));
        c_[a] = avg;
        c_[b] = std::conj(avg);
      }
  }
}

PeriodicField PeriodicField::truncated(int n_new) const {
  PeriodicField out(dim_, n_new);
  int half = std::min(n_, n_new) / 2;
  if (dim_ == 1) {
    for (int f = -half + 1; f <= half; ++f) out.set_coeff(f, 0, coeff(f, 0));
  } else {
    for (int f1 = -half + 1; f1 <= half; ++f1)
      for (int f2 = -half + 1; f2 <= half; ++f2) out.set_coeff(f1, f2, coeff(f1, f2));
  }
  return out;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& o) {
  if (empty()) {
    *this = o;
    return *this;
  }
  if (dim_ != o.dim_ || n_ != o.n_) throw BadInput("field size mismatch in +=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& o) {
  if (empty()) {
    *this = o;
    *this *= -1.0;
    return *this;
  }
  if (dim_ != o.dim_ || n_ != o.n_) throw BadInput("field size mismatch in -=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

PeriodicField multiply(const PeriodicField& a, const PeriodicField& b) {
  if (a.dim() != b.dim() || a.n() != b.n()) throw BadInput("field size mismatch in multiply");
  int n = a.n();
  int m = (3 * n) / 2;
  if (m % 2 != 0) ++m;
  int dim = a.dim();
  std::vector<cplx> A(grid_size(dim, m), cplx(0.0, 0.0));
  std::vector<cplx> B(grid_size(dim, m), cplx(0.0, 0.0));
  auto pad = [&](const PeriodicField& src, std::vector<cplx>& dst) {
    if (dim == 1) {
      for (int s = 0; s < n; ++s) dst[fft_slot(fft_freq(s, n), m)] = src.data()[s];
    } else {
      for (int s1 = 0; s1 < n; ++s1)
        for (int s2 = 0; s2 < n; ++s2)
          dst[static_cast<std::size_t>(fft_slot(fft_freq(s1, n), m)) * m +
              fft_slot(fft_freq(s2, n), m)] = src.data()[static_cast<std::size_t>(s1) * n + s2];
    }
  };
  pad(a, A);
  pad(b, B);
  fft_inverse(dim, m, A.data());
  fft_inverse(dim, m, B.data());
  for (std::size_t i = 0; i < A.size(); ++i) A[i] *= B[i];
  fft_forward(dim, m, A.data());
  double scale = 1.0 / static_cast<double>(A.size());
  PeriodicField out(dim, n);
  if (dim == 1) {
    for (int s = 0; s < n; ++s) out.data()[s] = A[fft_slot(fft_freq(s, n), m)] * scale;
  } else {
    for (int s1 = 0; s1 < n; ++s1)
      for (int s2 = 0; s2 < n; ++s2)
        out.data()[static_cast<std::size_t>(s1) * n + s2] =
            A[static_cast<std::size_t>(fft_slot(fft_freq(s1, n), m)) * m +
              fft_slot(fft_freq(s2, n), m)] *
            scale;
  }
  return out;
}

PeriodicField reciprocal(const PeriodicField& f, int oversample) {
  if (oversample < 1) throw BadInput("oversample must be >= 1");
  int m = f.n() * oversample;
  std::vector<double> s = f.samples(m);
  for (double& v : s) {
    if (!(v > 0.0)) throw BadInput("reciprocal of a field that is not strictly positive");
    v = 1.0 / v;
  }
  return PeriodicField::from_samples(f.dim(), m, s);
}

double integral_1d(const PeriodicField& f, double alpha, double beta) {
  if (f.dim() != 1) throw BadInput("integral_1d needs a one-dimensional field");
  cplx total = f.coeff(0, 0) * (beta - alpha);
  int n = f.n();
  for (int s = 0; s < n; ++s) {
    int fq = fft_freq(s, n);
    if (fq == 0) continue;
    const double w = kTwoPi * fq;
    total += f.data()[static_cast<std::size_t>(s)] *
             (std::polar(1.0, w * beta) - std::polar(1.0, w * alpha)) / cplx(0.0, w);
  }
  return total.real();
}

double inner(const PeriodicField& a, const PeriodicField& b) {
  if (a.dim() != b.dim() || a.n() != b.n()) throw BadInput("field size mismatch in inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    s += (a.data()[i] * std::conj(b.data()[i])).real();
  return s;
}

}  // namespace longwave
