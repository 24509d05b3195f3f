#pragma once

// Optimized Schwarz waveform relaxation for the 1D damped wave equation.

#include "oswr/core_model.hpp"
#include "oswr/errors.hpp"
#include "oswr/fdtd.hpp"
#include "oswr/frequency.hpp"
#include "oswr/nelder_mead.hpp"
#include "oswr/optimizer.hpp"
#include "oswr/swr.hpp"
#include "oswr/tridiagonal.hpp"
