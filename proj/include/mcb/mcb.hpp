// mcb.hpp
// Umbrella header for the multipartite concurrence bounds library.

#pragma once

#include "mcb/bound_engine.hpp"
#include "mcb/errors.hpp"
#include "mcb/linalg.hpp"
#include "mcb/oracle.hpp"
#include "mcb/parallel.hpp"
#include "mcb/pure_concurrence.hpp"
#include "mcb/qstate.hpp"
#include "mcb/state_io.hpp"
#include "mcb/substate_enum.hpp"
#include "mcb/wootters.hpp"
