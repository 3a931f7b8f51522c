#pragma once

#include <vector>

#include "swreg/system_model.hpp"
#include "swreg/types.hpp"

namespace swreg::paper {

// Bundled two-mode regulation problem: a 6-state plant with 3 inputs and
// 2 outputs, and a 4-state exosystem generating one ramp reference per output.
// Dimensions: n = 6, m = 3, p = 2, q = 4, sampling time 0.1 s.
SwitchingPlant plant();
Exosystem exosystem();

// Common Lyapunov matrix certifying quadratic stability of the plant modes.
Mat lyapunov_Q();

// Published output injections for the extended system. These verify with a
// negative injection sign: spectral_radius(Ae_i - G_i * Ce_i) < 1, i.e. under
// the A + G*C form used throughout this library the stabilizing gains are the
// negatives of these matrices.
std::vector<Mat> output_injections();

// Published basis (10x8) of the maximal robust controlled invariant subspace.
Mat vstar_basis();

// Published basis (10x4) of the output-nulling invariant subspace V.
Mat v_basis();

// Published friend feedbacks for V (3x10 per mode).
std::vector<Mat> friend_feedbacks();

// Mode schedule used in the published simulation.
SwitchingSignal signal();

}  // namespace swreg::paper
