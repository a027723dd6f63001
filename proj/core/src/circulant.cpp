#include "smaxwell/circulant.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smaxwell {

namespace {

void require_odd(std::size_t n) {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("circulant size " + std::to_string(n) +
                                " must be odd and >= 3 (A is singular for even sizes)");
  }
}

// The FFTW planner is not re-entrant; plan execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

CirculantSpectra circulant_spectra(std::size_t n) {
  require_odd(n);
  CirculantSpectra s{n, std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    s.a_hat[k] = 1.0 + std::cos(theta);
    s.b[k] = 2.0 * std::sin(theta);
  }
  // Exact conjugate symmetry regardless of how cos/sin round near pi.
  for (std::size_t k = 1; k <= n / 2; ++k) {
    s.a_hat[n - k] = s.a_hat[k];
    s.b[n - k] = -s.b[k];
  }
  return s;
}

void apply_stencil(std::span<const double> u, Stencil which, std::span<double> out) {
  const std::size_t n = u.size();
  if (out.size() != n) {
    throw std::invalid_argument("stencil output size " + std::to_string(out.size()) +
                                " does not match input size " + std::to_string(n));
  }
  if (n < 3) throw std::invalid_argument("stencil needs at least 3 points");
  for (std::size_t i = 0; i < n; ++i) {
    const double left = u[(i + n - 1) % n];
    const double right = u[(i + 1) % n];
    out[i] = which == Stencil::A ? 0.5 * (left + 2.0 * u[i] + right) : right - left;
  }
}

std::vector<double> apply_stencil(std::span<const double> u, Stencil which) {
  std::vector<double> out(u.size());
  apply_stencil(u, which, out);
  return out;
}

void validate(const LineSystemParams& p) {
  if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("line system sign must be +1 or -1");
  if (!std::isfinite(p.c) || p.c < 0.0) throw std::invalid_argument("coupling c must be finite and >= 0");
  if (!std::isfinite(p.eps) || p.eps <= 0.0 || !std::isfinite(p.mu) || p.mu <= 0.0) {
    throw std::invalid_argument("eps and mu must be positive and finite");
  }
}

struct PairLineSolver::Transform {
  std::size_t n = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Transform() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }

  static std::shared_ptr<const Transform> get(std::size_t n) {
    // Construct the mutex first so it outlives the cache at shutdown.
    std::mutex& mtx = planner_mutex();
    static std::map<std::size_t, std::shared_ptr<const Transform>> cache;
    std::lock_guard lock(mtx);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    auto t = std::make_shared<Transform>();
    t->n = n;
    const int len = static_cast<int>(n);
    double* real = fftw_alloc_real(n);
    fftw_complex* spec = fftw_alloc_complex(n / 2 + 1);
    // FFTW_ESTIMATE never times candidate plans, so planning is deterministic.
    t->forward = fftw_plan_dft_r2c_1d(len, real, spec, FFTW_ESTIMATE);
    t->backward = fftw_plan_dft_c2r_1d(len, spec, real, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(spec);
    if (!t->forward || !t->backward) throw std::runtime_error("FFTW failed to plan length " + std::to_string(n));
    cache.emplace(n, t);
    return t;
  }
};

struct PairLineSolver::Workspace::Buffers {
  double* real = nullptr;
  fftw_complex* e_hat = nullptr;
  fftw_complex* h_hat = nullptr;

  explicit Buffers(std::size_t n)
      : real(fftw_alloc_real(n)), e_hat(fftw_alloc_complex(n / 2 + 1)), h_hat(fftw_alloc_complex(n / 2 + 1)) {
    if (!real || !e_hat || !h_hat) throw std::bad_alloc();
  }
  ~Buffers() {
    fftw_free(real);
    fftw_free(e_hat);
    fftw_free(h_hat);
  }
  Buffers(const Buffers&) = delete;
  Buffers& operator=(const Buffers&) = delete;
};

PairLineSolver::Workspace::Workspace(std::size_t capacity)
    : capacity_(capacity),
      buffers_(std::make_unique<Buffers>(capacity)),
      e_line_(capacity),
      h_line_(capacity) {}
PairLineSolver::Workspace::Workspace(Workspace&&) noexcept = default;
PairLineSolver::Workspace& PairLineSolver::Workspace::operator=(Workspace&&) noexcept = default;
PairLineSolver::Workspace::~Workspace() = default;

PairLineSolver::PairLineSolver(std::size_t n, const LineSystemParams& params)
    : n_(n), params_(params), spectra_(circulant_spectra(n)), transform_(Transform::get(n)) {
  validate(params);
  const std::size_t modes = n / 2 + 1;
  diag_.resize(modes);
  coupling_e_.resize(modes);
  coupling_h_.resize(modes);
  const double eps = params.eps;
  const double mu = params.mu;
  const double sc = params.sign * params.c;
  for (std::size_t k = 0; k < modes; ++k) {
    const double a = spectra_.a_hat[k];
    const double b = spectra_.b[k];
    const double em_a2 = eps * mu * a * a;
    const double c2b2 = params.c * params.c * b * b;
    const double det = em_a2 + c2b2;
    diag_[k] = (em_a2 - c2b2) / det;
    coupling_e_[k] = 2.0 * mu * a * sc * b / det;
    coupling_h_[k] = 2.0 * eps * a * sc * b / det;
  }
}

PairLineSolver::~PairLineSolver() = default;
PairLineSolver::PairLineSolver(PairLineSolver&&) noexcept = default;
PairLineSolver& PairLineSolver::operator=(PairLineSolver&&) noexcept = default;

void PairLineSolver::solve(std::span<const double> e, std::span<const double> h, std::span<double> e_out,
                           std::span<double> h_out, Workspace& ws) const {
  const std::size_t n = n_;
  if (e.size() != n || h.size() != n || e_out.size() != n || h_out.size() != n) {
    throw std::invalid_argument("line length does not match solver size " + std::to_string(n));
  }
  if (ws.capacity() < n) throw std::invalid_argument("workspace too small for line length");
  if (params_.c == 0.0) {
    std::copy(e.begin(), e.end(), e_out.begin());
    std::copy(h.begin(), h.end(), h_out.begin());
    return;
  }

  auto& buf = *ws.buffers_;
  std::copy(e.begin(), e.end(), buf.real);
  fftw_execute_dft_r2c(transform_->forward, buf.real, buf.e_hat);
  std::copy(h.begin(), h.end(), buf.real);
  fftw_execute_dft_r2c(transform_->forward, buf.real, buf.h_hat);

  const std::size_t modes = n / 2 + 1;
  for (std::size_t k = 0; k < modes; ++k) {
    const double er = buf.e_hat[k][0], ei = buf.e_hat[k][1];
    const double hr = buf.h_hat[k][0], hi = buf.h_hat[k][1];
    const double d = diag_[k], qe = coupling_e_[k], qh = coupling_h_[k];
    buf.e_hat[k][0] = d * er - qe * hi;
    buf.e_hat[k][1] = d * ei + qe * hr;
    buf.h_hat[k][0] = d * hr - qh * ei;
    buf.h_hat[k][1] = d * hi + qh * er;
  }

  const double scale = 1.0 / static_cast<double>(n);
  fftw_execute_dft_c2r(transform_->backward, buf.e_hat, buf.real);
  for (std::size_t i = 0; i < n; ++i) e_out[i] = buf.real[i] * scale;
  fftw_execute_dft_c2r(transform_->backward, buf.h_hat, buf.real);
  for (std::size_t i = 0; i < n; ++i) h_out[i] = buf.real[i] * scale;
}

std::pair<std::vector<double>, std::vector<double>> solve_pair_line(std::span<const double> e,
                                                                     std::span<const double> h,
                                                                     const LineSystemParams& params) {
  if (e.size() != h.size()) throw std::invalid_argument("E and H lines differ in length");
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(e) || !finite(h)) throw std::invalid_argument("nonfinite value in line input");
  const PairLineSolver solver(e.size(), params);
  auto ws = solver.make_workspace();
  std::pair<std::vector<double>, std::vector<double>> out{std::vector<double>(e.size()),
                                                          std::vector<double>(e.size())};
  solver.solve(e, h, out.first, out.second, ws);
  return out;
}

double pair_line_residual(std::span<const double> e, std::span<const double> h,
                          std::span<const double> e_new, std::span<const double> h_new,
                          const LineSystemParams& p) {
  const auto ae = apply_stencil(e, Stencil::A), ah = apply_stencil(h, Stencil::A);
  const auto be = apply_stencil(e, Stencil::B), bh = apply_stencil(h, Stencil::B);
  const auto ax = apply_stencil(e_new, Stencil::A), ay = apply_stencil(h_new, Stencil::A);
  const auto bx = apply_stencil(e_new, Stencil::B), by = apply_stencil(h_new, Stencil::B);
  const double sc = p.sign * p.c;
  double worst = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double r1 = (p.eps * ax[i] - sc * by[i]) - (p.eps * ae[i] + sc * bh[i]);
    const double r2 = (p.mu * ay[i] - sc * bx[i]) - (p.mu * ah[i] + sc * be[i]);
    worst = std::max({worst, std::abs(r1), std::abs(r2)});
  }
  return worst;
}

}  // namespace smaxwell
