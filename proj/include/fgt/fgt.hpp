#pragma once

#include "fgt/bigint.hpp"
#include "fgt/certify.hpp"
#include "fgt/counting.hpp"
#include "fgt/error.hpp"
#include "fgt/event_kind.hpp"
#include "fgt/events.hpp"
#include "fgt/geometry.hpp"
#include "fgt/gf.hpp"
#include "fgt/montecarlo.hpp"
#include "fgt/oracle.hpp"
#include "fgt/report.hpp"
#include "fgt/rng.hpp"
#include "fgt/stats.hpp"
