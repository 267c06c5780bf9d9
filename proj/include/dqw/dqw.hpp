#pragma once

// Umbrella header for the Dirac quantum walk library.

#include "dqw/core.hpp"
#include "dqw/fft.hpp"
#include "dqw/fixed_mu.hpp"
#include "dqw/io.hpp"
#include "dqw/mat2.hpp"
#include "dqw/nvector.hpp"
#include "dqw/rng.hpp"
#include "dqw/shell.hpp"
#include "dqw/spectral.hpp"
#include "dqw/symmetry.hpp"
#include "dqw/verify.hpp"
#include "dqw/walk.hpp"
