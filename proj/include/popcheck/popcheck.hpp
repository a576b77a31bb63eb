#pragma once

#include "popcheck/convexity.hpp"
#include "popcheck/derivatives.hpp"
#include "popcheck/error.hpp"
#include "popcheck/function_spec.hpp"
#include "popcheck/inequalities.hpp"
#include "popcheck/interval.hpp"
#include "popcheck/means.hpp"
#include "popcheck/random.hpp"
#include "popcheck/registry.hpp"
#include "popcheck/search.hpp"
#include "popcheck/specfun.hpp"
