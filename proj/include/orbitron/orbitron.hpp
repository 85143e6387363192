#ifndef ORBITRON_ORBITRON_HPP
#define ORBITRON_ORBITRON_HPP

#include "orbitron/config.hpp"
#include "orbitron/dynamics.hpp"
#include "orbitron/equilibrium.hpp"
#include "orbitron/field.hpp"
#include "orbitron/io.hpp"
#include "orbitron/montecarlo.hpp"
#include "orbitron/params.hpp"
#include "orbitron/potential.hpp"
#include "orbitron/stability.hpp"
#include "orbitron/state.hpp"
#include "orbitron/vec3.hpp"

#endif
