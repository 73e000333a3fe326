#pragma once

#include <array>
#include <vector>

namespace sdrecon {

/// 32-tap linear-phase QMF lowpass, unit DC gain, cutoff pi/2. Used as the
/// conventional 2x interpolation baseline after scaling by 2.
extern const std::array<double, 32> kQmf32;

/// 127-tap equiripple lowpass for 4x audio interpolation at 44.1 kHz:
/// passband 0-5 kHz with gain 4, stopband from 6 kHz.
extern const std::array<double, 127> kEquiripple127;

std::vector<double> johnston_interpolator();  ///< 2 * kQmf32
std::vector<double> equiripple_interpolator();

}  // namespace sdrecon
