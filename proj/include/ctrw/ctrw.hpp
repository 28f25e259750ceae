#pragma once

#include "ctrw/asymptotics.hpp"
#include "ctrw/error.hpp"
#include "ctrw/green.hpp"
#include "ctrw/io.hpp"
#include "ctrw/lattice.hpp"
#include "ctrw/laws.hpp"
#include "ctrw/quadrature.hpp"
#include "ctrw/random.hpp"
#include "ctrw/specfun.hpp"
#include "ctrw/stats.hpp"
#include "ctrw/walk.hpp"
