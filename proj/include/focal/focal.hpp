#pragma once

// Umbrella header for the focal-field library.
#include "focal/types.hpp"
#include "focal/quadrature.hpp"
#include "focal/special_functions.hpp"
#include "focal/beams.hpp"
#include "focal/debye_fields.hpp"
#include "focal/multipole.hpp"
#include "focal/scattering.hpp"
