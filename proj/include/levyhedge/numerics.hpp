#pragma once

#include "levyhedge/numerics/complex_math.hpp"
#include "levyhedge/numerics/quadrature.hpp"
#include "levyhedge/numerics/special_functions.hpp"
