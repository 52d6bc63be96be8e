#pragma once

#include "spincs/errors.hpp"
#include "spincs/spin_algebra.hpp"
#include "spincs/coherent_states.hpp"
#include "spincs/nmr_dynamics.hpp"
#include "spincs/geometric_phase.hpp"
#include "spincs/pulse_dsl.hpp"
#include "spincs/table.hpp"
#include "spincs/report.hpp"
