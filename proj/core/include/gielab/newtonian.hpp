#pragma once

#include <span>

#include "gielab/errors.hpp"

namespace gielab {

enum class Dispersion {
    Massless, ///< omega(k) = k; yields the 1/r Coulomb-Newton form
    Massive,  ///< omega(k) = sqrt(k² + m²); yields Yukawa decay
};

/// Radial mode grid for the static effective potential
///   V(r) = -∫ d³k/(2π)³ |lambda(k)|² (2/omega(k)) e^{i k·r},
/// with lambda(k) = g / sqrt(2 omega(k)), reduced to the radial quadrature
///   V(r) = -(g²/(2π²)) ∫₀^{k_max} dk k²/omega(k)² sin(kr)/(kr).
struct ModeGrid {
    double k_max = 500.0;
    int n_k = 8192;          ///< Simpson intervals (even)
    double g = 1.0;          ///< overall coupling strength
    Dispersion dispersion = Dispersion::Massless;
    double field_mass = 0.0; ///< m in omega(k) = sqrt(k² + m²)

    void validate() const;
};

/// Composite-Simpson evaluation of the mode sum at separation r > 0. Throws
/// NumericalGuardError when the grid under-resolves the sin(kr) oscillation.
double effective_potential(double r, const ModeGrid& grid);

struct PowerLawFit {
    double exponent = 0.0;
    double r_squared = 0.0;
};

/// Least-squares slope of log|V| against log r. Requires >= 5 samples of one
/// sign with non-degenerate spread.
PowerLawFit fit_power_law(std::span<const double> rs, std::span<const double> vs);

} // namespace gielab
