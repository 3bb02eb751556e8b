#include "gielab/newtonian.hpp"

#include <cmath>
#include <numbers>

namespace gielab {

void ModeGrid::validate() const {
    if (!(k_max > 0.0)) throw ConfigError("ModeGrid: k_max must be > 0");
    if (n_k < 16) throw ConfigError("ModeGrid: n_k must be >= 16");
    if (n_k % 2 != 0) throw ConfigError("ModeGrid: n_k must be even for Simpson quadrature");
    if (field_mass < 0.0) throw ConfigError("ModeGrid: field mass must be >= 0");
}

double effective_potential(double r, const ModeGrid& grid) {
    grid.validate();
    if (!(r > 0.0)) throw ConfigError("effective_potential: r must be > 0");

    const double dk = grid.k_max / grid.n_k;
    // sin(kr) has period 2pi/r; demand at least 8 samples per oscillation.
    if (dk * r > std::numbers::pi / 4.0)
        throw NumericalGuardError("effective_potential: k-grid under-resolves sin(kr); raise n_k");

    auto integrand = [&](double k) {
        const double kr = k * r;
        const double sinc = (kr < 1e-8) ? 1.0 - kr * kr / 6.0 : std::sin(kr) / kr;
        switch (grid.dispersion) {
            case Dispersion::Massless:
                return sinc; // k²/omega² = 1
            case Dispersion::Massive: {
                const double w2 = k * k + grid.field_mass * grid.field_mass;
                return k * k / w2 * sinc;
            }
        }
        return 0.0;
    };

    double sum = integrand(0.0) + integrand(grid.k_max);
    for (int i = 1; i < grid.n_k; ++i)
        sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(i * dk);
    const double integral = sum * dk / 3.0;

    const double pi = std::numbers::pi;
    return -(grid.g * grid.g / (2.0 * pi * pi)) * integral;
}

PowerLawFit fit_power_law(std::span<const double> rs, std::span<const double> vs) {
    if (rs.size() != vs.size()) throw ConfigError("fit_power_law: size mismatch");
    if (rs.size() < 5) throw ConfigError("fit_power_law: need at least 5 points");
    const bool negative = vs[0] < 0.0;
    for (double v : vs) {
        if (v == 0.0 || (v < 0.0) != negative)
            throw ConfigError("fit_power_law: samples change sign");
    }
    for (double r : rs)
        if (!(r > 0.0)) throw ConfigError("fit_power_law: radii must be > 0");

    const auto n = static_cast<double>(rs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double x = std::log(rs[i]);
        const double y = std::log(std::abs(vs[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    const double var_x = sxx - sx * sx / n;
    if (var_x < 1e-12) throw ConfigError("fit_power_law: degenerate radius spread");
    const double cov = sxy - sx * sy / n;
    const double var_y = syy - sy * sy / n;

    PowerLawFit fit;
    fit.exponent = cov / var_x;
    fit.r_squared = (var_y < 1e-300) ? 1.0 : (cov * cov) / (var_x * var_y);
    return fit;
}

} // namespace gielab
