#pragma once

#include "hessblow/expected.hpp"
#include "hessblow/rational.hpp"
#include "hessblow/poly2.hpp"
#include "hessblow/families.hpp"
#include "hessblow/grid.hpp"
#include "hessblow/stencils.hpp"
#include "hessblow/diagnostics.hpp"
#include "hessblow/solver.hpp"
#include "hessblow/regions.hpp"
#include "hessblow/serialization.hpp"
#include "hessblow/commands.hpp"
