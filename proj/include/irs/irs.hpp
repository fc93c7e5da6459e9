#pragma once

#include "irs/bayes.hpp"
#include "irs/bounds.hpp"
#include "irs/index_policy.hpp"
#include "irs/inner.hpp"
#include "irs/names.hpp"
#include "irs/opt_dp.hpp"
#include "irs/policies.hpp"
#include "irs/rng.hpp"
#include "irs/sim.hpp"
#include "irs/special.hpp"
