#pragma once

#include "rl/ambient.hpp"
#include "rl/central.hpp"
#include "rl/check.hpp"
#include "rl/classify.hpp"
#include "rl/construct_group.hpp"
#include "rl/construct_n0.hpp"
#include "rl/density.hpp"
#include "rl/dsl.hpp"
#include "rl/error.hpp"
#include "rl/experiment.hpp"
#include "rl/family.hpp"
#include "rl/periodic.hpp"
#include "rl/rational.hpp"
#include "rl/semigroup.hpp"
#include "rl/serialize.hpp"
#include "rl/setexpr.hpp"
#include "rl/subshift.hpp"
#include "rl/verdict.hpp"
#include "rl/witness.hpp"
