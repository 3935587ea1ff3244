#pragma once

#include "sellopt/errors.hpp"
#include "sellopt/dist_core.hpp"
#include "sellopt/policy.hpp"
#include "sellopt/price_dist.hpp"
#include "sellopt/stop_time.hpp"
#include "sellopt/asymptotics.hpp"
#include "sellopt/random.hpp"
#include "sellopt/simulator.hpp"
#include "sellopt/validate.hpp"
