#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration on a union of panels.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

namespace nfrad {

/// Tolerances and limits for one integration. `window` overrides the automatic
/// frequency window used by the spectral integrals.
struct IntegrationSpec {
  double relative = 1e-8;
  double absolute = 1e-300;
  std::size_t max_subdivisions = 4000;
  std::optional<std::pair<double, double>> window;
  unsigned threads = 1;

  void validate() const {
    if (!(relative > 0.0) || !std::isfinite(relative))
      throw std::invalid_argument("IntegrationSpec: relative tolerance must be positive");
    if (!(absolute >= 0.0)) throw std::invalid_argument("IntegrationSpec: absolute floor must be >= 0");
    if (max_subdivisions == 0) throw std::invalid_argument("IntegrationSpec: max_subdivisions must be > 0");
    if (window && !(window->first > 0.0 && window->first < window->second))
      throw std::invalid_argument("IntegrationSpec: window requires 0 < lo < hi");
  }

  /// Copy with the relative tolerance scaled, for nested integrals.
  IntegrationSpec tightened(double factor) const {
    IntegrationSpec s = *this;
    s.relative = relative / factor;
    s.window.reset();
    s.threads = 1;
    return s;
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  bool finite = true;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  // Panel holding the largest local error when the loop stopped.
  double worst_lo = 0.0;
  double worst_hi = 0.0;
};

namespace detail {

// Kronrod 15-point abscissae (positive half) and weights, with the embedded
// Gauss 7-point weights at the odd Kronrod nodes.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
};

template <class F>
Panel gauss_kronrod_15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> fl{}, fr{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    fl[j] = f(center - dx);
    fr[j] = f(center + dx);
    const double pair = fl[j] + fr[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(fl[j]) + std::abs(fr[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  // QUADPACK-style scaling of the nested-rule difference.
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(fl[j] - mean) + std::abs(fr[j] - mean));
  asc *= std::abs(half);
  abs_sum *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * abs_sum, err);
  return {lo, hi, kronrod * half, err};
}

template <class F>
void evaluate_panels(F& f, std::vector<Panel>& panels, unsigned threads) {
  if (threads <= 1 || panels.size() < 2) {
    for (auto& p : panels) p = gauss_kronrod_15(f, p.lo, p.hi);
    return;
  }
  const std::size_t n = panels.size();
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) panels[i] = gauss_kronrod_15(f, panels[i].lo, panels[i].hi);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()] starting from the panels
/// delimited by `breaks` (strictly increasing). The worst panel is bisected
/// until the summed error estimate drops below max(relative*|I|, absolute) or
/// the subdivision budget runs out, in which case the partial result comes
/// back with converged = false. Only the initial panels are evaluated in
/// parallel; the summation order never depends on the thread count.
template <class F>
QuadratureResult adaptive_integrate(F&& f, std::span<const double> breaks, const IntegrationSpec& spec) {
  spec.validate();
  if (breaks.size() < 2) throw std::invalid_argument("adaptive_integrate: need at least two breakpoints");
  for (std::size_t i = 1; i < breaks.size(); ++i)
    if (!(breaks[i] > breaks[i - 1])) throw std::invalid_argument("adaptive_integrate: breakpoints must increase");

  std::vector<detail::Panel> panels(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) panels[i] = {breaks[i], breaks[i + 1], 0.0, 0.0};
  detail::evaluate_panels(f, panels, spec.threads);

  QuadratureResult out;
  out.evaluations = 15 * panels.size();
  std::size_t splits = 0;
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      total += panels[i].value;
      err += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    out.value = total;
    out.error = err;
    out.worst_lo = panels[worst].lo;
    out.worst_hi = panels[worst].hi;
    if (!std::isfinite(total) || !std::isfinite(err)) {
      out.finite = false;
      out.converged = false;
      break;
    }
    if (err <= std::max(spec.relative * std::abs(total), spec.absolute)) break;
    if (splits >= spec.max_subdivisions) {
      out.converged = false;
      break;
    }
    const detail::Panel w = panels[worst];
    const double mid = 0.5 * (w.lo + w.hi);
    if (!(mid > w.lo && mid < w.hi)) {
      out.converged = false;
      break;
    }
    // Keep panels ordered by position so the sum order is reproducible.
    panels[worst] = detail::gauss_kronrod_15(f, w.lo, mid);
    panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1, detail::gauss_kronrod_15(f, mid, w.hi));
    out.evaluations += 30;
    ++splits;
  }
  out.panels = panels.size();
  return out;
}

template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b, const IntegrationSpec& spec) {
  if (!(a < b)) throw std::invalid_argument("adaptive_integrate: requires a < b");
  const std::array<double, 2> breaks{a, b};
  return adaptive_integrate(std::forward<F>(f), std::span<const double>(breaks), spec);
}

/// n+1 logarithmically spaced points from lo to hi (both > 0), endpoints exact.
inline std::vector<double> log_breaks(double lo, double hi, std::size_t n) {
  std::vector<double> b(n + 1);
  const double ratio = std::log(hi / lo);
  for (std::size_t i = 0; i <= n; ++i) b[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n));
  b.front() = lo;
  b.back() = hi;
  return b;
}

}  // namespace nfrad
