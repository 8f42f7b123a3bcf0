#pragma once

#include "kerr/config.hpp"
#include "kerr/entropy.hpp"
#include "kerr/errors.hpp"
#include "kerr/figures.hpp"
#include "kerr/fock_state.hpp"
#include "kerr/kerr_evolution.hpp"
#include "kerr/moments.hpp"
#include "kerr/parallel.hpp"
#include "kerr/revival_schedule.hpp"
#include "kerr/time_series.hpp"
#include "kerr/validation.hpp"
#include "kerr/wigner.hpp"
