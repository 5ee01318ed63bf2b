#include "durr/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "durr/compensated.hpp"
#include "durr/error.hpp"

namespace durr {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol >= 0.0)) throw DomainError("quadrature tolerances must be positive");
  if (max_panels < 1) throw DomainError("quadrature panel limit must be >= 1");
}

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  int piece;
  double a;
  double b;
  double value;
  double error;
};

struct PanelOrder {
  bool operator()(const Panel& lhs, const Panel& rhs) const { return lhs.error < rhs.error; }
};

Panel kronrod15(const Integrand& f, int piece, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_centre = f(centre);
  double kronrod = f_centre * kKronrodWeights[7];
  double gauss = f_centre * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> lower{};
  std::array<double, 7> upper{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    lower[j] = f(centre - dx);
    upper[j] = f(centre + dx);
    const double pair = lower[j] + upper[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(lower[j]) + std::abs(upper[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_centre - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(lower[j] - mean) + std::abs(upper[j] - mean));
  }
  const double scale = std::abs(half);
  const double value = kronrod * half;
  double error = std::abs((kronrod - gauss) * half);
  const double resasc = asc * scale;
  const double resabs = abs_sum * scale;
  if (resasc != 0.0 && error != 0.0) {
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * resabs, error);
  }
  return {piece, a, b, value, error};
}

QuadratureResult run_adaptive(const std::vector<Integrand>& pieces,
                              const std::vector<std::pair<double, double>>& bounds,
                              const QuadratureConfig& config) {
  config.validate();
  PanelOrder order;
  std::vector<Panel> heap;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (bounds[i].second <= bounds[i].first) continue;
    heap.push_back(kronrod15(pieces[i], static_cast<int>(i), bounds[i].first, bounds[i].second));
  }
  std::make_heap(heap.begin(), heap.end(), order);
  int panels = static_cast<int>(heap.size());

  // Exact re-sum, in position order so the result is reproducible.
  CompensatedSum value;
  double error = 0.0;
  auto resum = [&] {
    std::vector<Panel> sorted = heap;
    std::sort(sorted.begin(), sorted.end(), [](const Panel& l, const Panel& r) {
      return l.piece != r.piece ? l.piece < r.piece : l.a < r.a;
    });
    value = CompensatedSum();
    error = 0.0;
    for (const auto& p : sorted) {
      value += p.value;
      error += p.error;
    }
  };
  auto target = [&](double total) { return std::max(config.abs_tol, config.rel_tol * std::abs(total)); };

  resum();
  bool splittable = true;
  // The running totals drift, so refinement restarts from an exact re-sum
  // until that re-sum meets the target.
  while (splittable && error > target(value.value()) && panels < config.max_panels) {
    double total = value.value();
    double total_error = error;
    while (!heap.empty() && total_error > target(total) && panels < config.max_panels) {
      std::pop_heap(heap.begin(), heap.end(), order);
      const Panel worst = heap.back();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) {
        // Panel cannot be split further in floating point.
        std::push_heap(heap.begin(), heap.end(), order);
        splittable = false;
        break;
      }
      heap.pop_back();
      const auto& f = pieces[static_cast<std::size_t>(worst.piece)];
      const Panel left = kronrod15(f, worst.piece, worst.a, mid);
      const Panel right = kronrod15(f, worst.piece, mid, worst.b);
      total += left.value + right.value - worst.value;
      total_error += left.error + right.error - worst.error;
      heap.push_back(left);
      std::push_heap(heap.begin(), heap.end(), order);
      heap.push_back(right);
      std::push_heap(heap.begin(), heap.end(), order);
      ++panels;
    }
    resum();
    if (heap.empty()) break;
  }
  QuadratureResult result;
  result.value = value.value();
  result.abs_error = error;
  result.panels = panels;
  result.converged = error <= std::max(config.abs_tol, config.rel_tol * std::abs(result.value));
  return result;
}

Integrand mapped_tail(const Integrand& f, double a) {
  return [&f, a](double u) {
    if (u >= 1.0) return 0.0;
    const double one_minus = 1.0 - u;
    const double value = f(a + u / one_minus);
    if (value == 0.0) return 0.0;
    return value / (one_minus * one_minus);
  };
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureConfig& config) {
  if (!(b >= a)) throw DomainError("integrate: reversed interval");
  return run_adaptive({f}, {{a, b}}, config);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureConfig& config) {
  return run_adaptive({mapped_tail(f, a)}, {{0.0, 1.0}}, config);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, std::span<const double> breakpoints,
                                         const QuadratureConfig& config) {
  std::vector<Integrand> pieces;
  std::vector<std::pair<double, double>> bounds;
  double left = 0.0;
  for (double point : breakpoints) {
    if (!(point > left)) continue;
    pieces.push_back(f);
    bounds.emplace_back(left, point);
    left = point;
  }
  pieces.push_back(mapped_tail(f, left));
  bounds.emplace_back(0.0, 1.0);
  return run_adaptive(pieces, bounds, config);
}

}  // namespace durr
