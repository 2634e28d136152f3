#pragma once

#include "latkit/coproduct.hpp"
#include "latkit/counterexample.hpp"
#include "latkit/element_set.hpp"
#include "latkit/error.hpp"
#include "latkit/free_lattice.hpp"
#include "latkit/ideal_eps.hpp"
#include "latkit/jonsson.hpp"
#include "latkit/json_io.hpp"
#include "latkit/order.hpp"
#include "latkit/partial_lattice.hpp"
#include "latkit/partition.hpp"
#include "latkit/term.hpp"
