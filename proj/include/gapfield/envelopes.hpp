#pragma once

#include <gapfield/stats.hpp>

namespace gapfield {

// Recorded acceptance envelopes. The NEAR envelope is pinned around 1/(2pi);
// the others were measured in record mode at the reference revision and are
// regression-locked: geomeans moving by more than 20% fail the suite.

inline constexpr Envelope kNearEnvelope{0.05, 0.5};
inline constexpr Envelope kNearAxialEnvelope{0.025, 1.0}; // a = (0,1), widened x2
inline constexpr Envelope kFarEnvelope{0.05, 2.0};
inline constexpr Envelope kQestEnvelope{0.02, 2.0};

// Reference geomeans (record mode output). Regression lock: +-20%.
struct GeomeanRef {
    double epsilon;
    double value;
};

inline constexpr GeomeanRef kNearGeomeanRef[] = {
    {1e-2, 0.15818117061571688},
    {3e-3, 0.1590201994546454},
    {1e-3, 0.15935821996965302},
};

inline constexpr GeomeanRef kFarGeomeanRef[] = {
    {1e-1, 0.2774516134120672},
    {1e-2, 0.2802160025171753},
    {1e-3, 0.2783623622800806},
};

} // namespace gapfield
