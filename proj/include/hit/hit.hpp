#pragma once

// Umbrella header.

#include "hit/core/error.hpp"
#include "hit/core/filter.hpp"
#include "hit/core/hierarchy.hpp"
#include "hit/core/intention.hpp"
#include "hit/core/trajectory.hpp"
#include "hit/prediction/geometry.hpp"
#include "hit/prediction/gilm.hpp"
#include "hit/prediction/high_level.hpp"
#include "hit/prediction/mif.hpp"
#include "hit/prediction/tracker.hpp"
#include "hit/sim/control.hpp"
#include "hit/sim/human.hpp"
#include "hit/sim/kalman.hpp"
#include "hit/sim/observe.hpp"
#include "hit/sim/queues.hpp"
#include "hit/sim/rng.hpp"
#include "hit/sim/workcell.hpp"
#include "hit/sim/workspace.hpp"
#include "hit/sim/world.hpp"
#include "hit/harness/batch.hpp"
#include "hit/harness/config.hpp"
#include "hit/harness/metrics.hpp"
#include "hit/harness/protocol.hpp"
#include "hit/harness/scenarios.hpp"
#include "hit/harness/server.hpp"
#include "hit/harness/session.hpp"
#include "hit/harness/trial.hpp"
#include "hit/harness/trial_log.hpp"
