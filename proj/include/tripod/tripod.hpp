#pragma once

#include "tripod/beams.hpp"
#include "tripod/config.hpp"
#include "tripod/constants.hpp"
#include "tripod/errors.hpp"
#include "tripod/linalg.hpp"
#include "tripod/master_equation.hpp"
#include "tripod/params.hpp"
#include "tripod/propagation.hpp"
#include "tripod/response.hpp"
#include "tripod/runner.hpp"
#include "tripod/steadystate.hpp"
#include "tripod/version.hpp"
