#pragma once

#include "torbit/arith.hpp"
#include "torbit/dynamics.hpp"
#include "torbit/error.hpp"
#include "torbit/fields.hpp"
#include "torbit/ideals.hpp"
#include "torbit/lattice.hpp"
#include "torbit/linalg.hpp"
#include "torbit/modular2.hpp"
#include "torbit/orbits.hpp"
#include "torbit/parallel.hpp"
#include "torbit/poly.hpp"
#include "torbit/quadratic.hpp"
#include "torbit/times23.hpp"
#include "torbit/units.hpp"
