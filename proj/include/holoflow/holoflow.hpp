#pragma once

#include "holoflow/classify.hpp"
#include "holoflow/compactness.hpp"
#include "holoflow/dynamics.hpp"
#include "holoflow/error.hpp"
#include "holoflow/expression.hpp"
#include "holoflow/fock.hpp"
#include "holoflow/generator_criteria.hpp"
#include "holoflow/halfplane.hpp"
#include "holoflow/io.hpp"
#include "holoflow/moebius.hpp"
#include "holoflow/ode.hpp"
#include "holoflow/operator.hpp"
#include "holoflow/parallel.hpp"
#include "holoflow/quadratic.hpp"
#include "holoflow/radial.hpp"
#include "holoflow/semiflow.hpp"
#include "holoflow/taylor.hpp"
