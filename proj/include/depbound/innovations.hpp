#pragma once

// Innovation laws with closed-form L_p moments. The four supported kinds are
// exactly the ones whose norms every downstream inequality consumes; all of
// them are mean zero with analytically known ||eps||_{L_p} and coupled
// difference norms ||eps - eps'||_{L_p}.

#include <cmath>
#include <stdexcept>
#include <string>

#include "depbound/numeric.hpp"
#include "depbound/rng.hpp"

namespace depbound {

enum class InnovationKind {
  standard_gaussian,
  scaled_gaussian,
  uniform_symmetric,
  rademacher,
};

struct InnovationLaw {
  InnovationKind kind = InnovationKind::standard_gaussian;
  double param = 1.0;  // sigma for scaled_gaussian, half width for uniform

  static InnovationLaw standard_gaussian() {
    return {InnovationKind::standard_gaussian, 1.0};
  }
  static InnovationLaw scaled_gaussian(double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("scaled_gaussian: sigma must be positive");
    return {InnovationKind::scaled_gaussian, sigma};
  }
  static InnovationLaw uniform_symmetric(double half_width) {
    if (!(half_width > 0))
      throw std::invalid_argument("uniform_symmetric: half_width must be positive");
    return {InnovationKind::uniform_symmetric, half_width};
  }
  static InnovationLaw rademacher() { return {InnovationKind::rademacher, 1.0}; }

  // ||eps||_{L_p}, closed form per kind.
  [[nodiscard]] double lp_norm(double p) const {
    if (!(p >= 1)) throw std::invalid_argument("lp_norm: p must be >= 1");
    switch (kind) {
      case InnovationKind::standard_gaussian:
        return gaussian_lp_norm(p);
      case InnovationKind::scaled_gaussian:
        return param * gaussian_lp_norm(p);
      case InnovationKind::uniform_symmetric:
        // E|U|^p = h^p / (p+1)
        return param * std::pow(p + 1.0, -1.0 / p);
      case InnovationKind::rademacher:
        return 1.0;
    }
    throw std::logic_error("unreachable");
  }

  [[nodiscard]] double variance() const {
    const double s = lp_norm(2.0);
    return s * s;
  }

  // ||eps - eps'||_{L_p} for an independent copy eps'.
  [[nodiscard]] double coupled_diff_lp(double p) const {
    if (!(p >= 1)) throw std::invalid_argument("coupled_diff_lp: p must be >= 1");
    switch (kind) {
      case InnovationKind::standard_gaussian:
      case InnovationKind::scaled_gaussian: {
        const double sigma = (kind == InnovationKind::standard_gaussian) ? 1.0 : param;
        // eps - eps' ~ N(0, 2 sigma^2)
        return std::numbers::sqrt2 * sigma * gaussian_lp_norm(p);
      }
      case InnovationKind::uniform_symmetric: {
        // triangular density on (-2h, 2h): E|D|^p = 2^{p+1} h^p / ((p+1)(p+2))
        return 2.0 * param *
               std::exp((std::numbers::ln2 - std::log(p + 1.0) - std::log(p + 2.0)) / p);
      }
      case InnovationKind::rademacher:
        // |D| is 2 with probability 1/2, else 0: E|D|^p = 2^{p-1}
        return std::pow(2.0, (p - 1.0) / p);
    }
    throw std::logic_error("unreachable");
  }

  [[nodiscard]] double sample(const rng::Key& key, std::uint64_t index) const {
    switch (kind) {
      case InnovationKind::standard_gaussian:
        return key.normal(index);
      case InnovationKind::scaled_gaussian:
        return param * key.normal(index);
      case InnovationKind::uniform_symmetric:
        return param * (2.0 * key.uniform(index) - 1.0);
      case InnovationKind::rademacher:
        return key.rademacher(index);
    }
    throw std::logic_error("unreachable");
  }

  [[nodiscard]] std::string name() const {
    switch (kind) {
      case InnovationKind::standard_gaussian: return "standard_gaussian";
      case InnovationKind::scaled_gaussian: return "scaled_gaussian";
      case InnovationKind::uniform_symmetric: return "uniform_symmetric";
      case InnovationKind::rademacher: return "rademacher";
    }
    return "?";
  }
};

}  // namespace depbound
