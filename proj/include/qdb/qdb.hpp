#pragma once

#include "qdb/baselines.hpp"
#include "qdb/config.hpp"
#include "qdb/core.hpp"
#include "qdb/envgen.hpp"
#include "qdb/gp.hpp"
#include "qdb/ope.hpp"
#include "qdb/quickdraw.hpp"
#include "qdb/rng.hpp"
#include "qdb/simharness.hpp"
