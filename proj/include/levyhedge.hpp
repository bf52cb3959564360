#pragma once

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/numerics.hpp"
#include "levyhedge/path_grid.hpp"
#include "levyhedge/payoffs.hpp"
#include "levyhedge/random.hpp"
#include "levyhedge/simulate.hpp"
#include "levyhedge/sweep.hpp"
#include "levyhedge/tables.hpp"
