#pragma once

#include <stdexcept>

namespace cutfem {

/// Conductivities k, exchange coefficients b and ghost-penalty weights tau.
struct ModelCoefficients {
    double k_B = 1.0;
    double k_S = 1.0;
    double b_B = 1.0;
    double b_S = 1.0;
    double tau_B = 1e-2;
    double tau_S = 1e-2;

    /// Physical coefficients must be positive. Penalty weights may be zero,
    /// which switches stabilization off for diagnostics.
    void validate() const {
        if (!(k_B > 0.0 && k_S > 0.0 && b_B > 0.0 && b_S > 0.0))
            throw std::invalid_argument("k_B, k_S, b_B, b_S must be positive");
        if (!(tau_B >= 0.0 && tau_S >= 0.0)) throw std::invalid_argument("tau_B, tau_S must be non-negative");
    }
};

}  // namespace cutfem
