#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <omp.h>

#include "netmp/errors.hpp"
#include "netmp/half_edge.hpp"
#include "netmp/random.hpp"

namespace netmp {

// Message payload kinds and their admissible domains:
//   probability  scalar in [0,1]
//   pair         two nonnegative entries summing to 1
//   simplex      q nonnegative entries summing to 1
//   complex      any finite complex value
enum class PayloadKind { probability, pair, complex, simplex };

enum class Schedule { synchronous, sequential };

enum class InitKind { zeros, ones, random, uniform_simplex, custom };

struct FixedPointConfig {
  double tol = 1e-10;
  std::size_t max_iter = 100000;
  std::optional<double> damping;  // fraction of the old value kept; unset: algorithm default (0 unless stated)
  std::optional<Schedule> schedule;  // unset: algorithm default (synchronous unless stated)
  std::uint64_t seed = 0;
  std::optional<InitKind> init;  // unset: the algorithm's own default
  int threads = 0;               // 0: OpenMP default, 1: serial reference sweep

  void validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const double d = damping.value_or(0.0);
    if (!(d >= 0.0 && d < 1.0)) throw std::invalid_argument("damping must lie in [0,1)");
  }
};

struct IterationReport {
  bool converged = false;
  std::size_t iterations = 0;
  double residual = std::numeric_limits<double>::infinity();  // L-inf change of the last sweep
};

/// Per-directed-edge payload array; `width` values per edge.
template <class T>
class MessageField {
 public:
  using value_type = T;

  MessageField() = default;
  MessageField(PayloadKind kind, std::size_t edges, std::size_t width = 1)
      : kind_(kind), width_(width), values_(edges * width) {
    if constexpr (std::is_same_v<T, double>) {
      if (kind == PayloadKind::complex) throw std::invalid_argument("complex payloads need a complex field");
    } else {
      if (kind != PayloadKind::complex) throw std::invalid_argument("complex field requires complex payloads");
    }
    if (kind == PayloadKind::pair && width != 2) throw std::invalid_argument("pair payloads have width 2");
    if ((kind == PayloadKind::probability || kind == PayloadKind::complex) && width != 1)
      throw std::invalid_argument("scalar payloads have width 1");
  }

  PayloadKind kind() const noexcept { return kind_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t num_edges() const noexcept { return width_ == 0 ? 0 : values_.size() / width_; }

  std::span<T> operator[](EdgeId e) noexcept { return {values_.data() + e * width_, width_}; }
  std::span<const T> operator[](EdgeId e) const noexcept { return {values_.data() + e * width_, width_}; }

  T& scalar(EdgeId e) noexcept { return values_[e * width_]; }
  const T& scalar(EdgeId e) const noexcept { return values_[e * width_]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  bool operator==(const MessageField&) const = default;

 private:
  PayloadKind kind_ = PayloadKind::probability;
  std::size_t width_ = 1;
  std::vector<T> values_;
};

using ScalarField = MessageField<double>;
using ComplexField = MessageField<std::complex<double>>;

/// Fills a field per `kind`. Random payloads draw from one seeded stream in
/// edge order; pairs/simplices are normalized.
template <class T>
void initialize(MessageField<T>& field, InitKind kind, std::uint64_t seed) {
  auto values = field.values();
  const std::size_t w = field.width();
  switch (kind) {
    case InitKind::custom:
      return;
    case InitKind::zeros:
      std::fill(values.begin(), values.end(), T{0.0});
      return;
    case InitKind::ones:
      std::fill(values.begin(), values.end(), T{1.0});
      return;
    case InitKind::uniform_simplex:
      std::fill(values.begin(), values.end(), T{1.0 / static_cast<double>(w)});
      return;
    case InitKind::random: {
      Rng rng(seed);
      for (EdgeId e = 0; e < field.num_edges(); ++e) {
        auto p = field[e];
        double sum = 0.0;
        for (auto& x : p) {
          // open interval (0,1)
          double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
          x = T{u};
          sum += u;
        }
        if (field.kind() == PayloadKind::pair || field.kind() == PayloadKind::simplex)
          for (auto& x : p) x /= sum;
      }
      return;
    }
  }
}

namespace detail {

inline constexpr double kDomainSlack = 1e-12;
inline constexpr double kSumSlack = 1e-9;

// Checks a freshly computed payload against its kind, clamping rounding dust
// and renormalizing pairs/simplices exactly.
inline void enforce_domain(PayloadKind kind, std::span<double> p, EdgeId e) {
  if (kind == PayloadKind::probability) {
    double& x = p[0];
    if (!(x >= -kDomainSlack && x <= 1.0 + kDomainSlack))
      throw NumericDomainError(e, "probability message outside [0,1]: " + std::to_string(x));
    x = std::clamp(x, 0.0, 1.0);
    return;
  }
  double sum = 0.0;
  for (double& x : p) {
    if (!(x >= -kDomainSlack)) throw NumericDomainError(e, "negative or NaN simplex entry");
    x = std::max(x, 0.0);
    sum += x;
  }
  if (!(std::abs(sum - 1.0) <= kSumSlack)) throw NumericDomainError(e, "simplex payload not normalized");
  for (double& x : p) x /= sum;
}

inline void enforce_domain(PayloadKind, std::span<std::complex<double>> p, EdgeId e) {
  for (auto& x : p)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw NumericDomainError(e, "non-finite complex message");
}

template <class T>
double damp_and_measure(std::span<T> fresh, std::span<const T> old, double damping) {
  double change = 0.0;
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    if (damping > 0.0) fresh[k] = damping * old[k] + (1.0 - damping) * fresh[k];
    change = std::max(change, static_cast<double>(std::abs(fresh[k] - old[k])));
  }
  return change;
}

struct NoHook {
  template <class F>
  void operator()(const F&, std::size_t) const noexcept {}
};

}  // namespace detail

/// Fixed-point iteration of a per-edge update rule.
///
/// `update(e, current, out)` writes the new payload of directed edge e computed
/// from `current`. Synchronous sweeps compute every edge from the previous
/// field (Jacobi) and may run in parallel; the result does not depend on the
/// thread count. Sequential sweeps update in edge order in place
/// (Gauss-Seidel) on one thread. `before_sweep(field, sweep)` runs before each
/// sweep. Stops once the L-inf change of a sweep drops below tol; running out
/// of iterations is reported, not thrown.
template <class T, class Update, class BeforeSweep = detail::NoHook>
IterationReport iterate(Update&& update, MessageField<T>& field, const FixedPointConfig& cfg,
                        BeforeSweep&& before_sweep = {}) {
  cfg.validate();
  IterationReport report;
  const std::size_t edges = field.num_edges();
  const std::size_t w = field.width();
  const PayloadKind kind = field.kind();
  const double damping = cfg.damping.value_or(0.0);

  if (cfg.schedule.value_or(Schedule::synchronous) == Schedule::sequential) {
    std::vector<T> fresh(w);
    for (std::size_t sweep = 0; sweep < cfg.max_iter; ++sweep) {
      before_sweep(static_cast<const MessageField<T>&>(field), sweep);
      double residual = 0.0;
      for (EdgeId e = 0; e < edges; ++e) {
        update(e, static_cast<const MessageField<T>&>(field), std::span<T>(fresh));
        detail::enforce_domain(kind, std::span<T>(fresh), e);
        auto slot = field[e];
        residual = std::max(residual, detail::damp_and_measure<T>(fresh, slot, damping));
        std::copy(fresh.begin(), fresh.end(), slot.begin());
      }
      report.iterations = sweep + 1;
      report.residual = residual;
      if (residual < cfg.tol) {
        report.converged = true;
        break;
      }
    }
    return report;
  }

  MessageField<T> next = field;
  for (std::size_t sweep = 0; sweep < cfg.max_iter; ++sweep) {
    before_sweep(static_cast<const MessageField<T>&>(field), sweep);
    const MessageField<T>& current = field;
    double residual = 0.0;

    if (cfg.threads == 1) {
      for (EdgeId e = 0; e < edges; ++e) {
        auto out = next[e];
        update(e, current, out);
        detail::enforce_domain(kind, out, e);
        residual = std::max(residual, detail::damp_and_measure<T>(out, current[e], damping));
      }
    } else {
      // The lowest failing edge is rethrown so the error is schedule-independent.
      std::size_t bad_edge = edges;
      std::exception_ptr bad_error;
      const auto count = static_cast<std::ptrdiff_t>(edges);
#pragma omp parallel for schedule(static) reduction(max : residual) num_threads(cfg.threads > 0 ? cfg.threads : omp_get_max_threads())
      for (std::ptrdiff_t ei = 0; ei < count; ++ei) {
        const auto e = static_cast<EdgeId>(ei);
        try {
          auto out = next[e];
          update(e, current, out);
          detail::enforce_domain(kind, out, e);
          residual = std::max(residual, detail::damp_and_measure<T>(out, current[e], damping));
        } catch (const NumericDomainError&) {
#pragma omp critical(netmp_engine_error)
          if (e < bad_edge) {
            bad_edge = e;
            bad_error = std::current_exception();
          }
        }
      }
      if (bad_error) std::rethrow_exception(bad_error);
    }

    std::swap(field, next);
    report.iterations = sweep + 1;
    report.residual = residual;
    if (residual < cfg.tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

}  // namespace netmp
