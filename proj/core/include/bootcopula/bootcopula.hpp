#pragma once

#include "bootcopula/bootstrap.hpp"
#include "bootcopula/combiner.hpp"
#include "bootcopula/copula.hpp"
#include "bootcopula/correlation.hpp"
#include "bootcopula/coverage.hpp"
#include "bootcopula/distributions.hpp"
#include "bootcopula/error.hpp"
#include "bootcopula/expr.hpp"
#include "bootcopula/intervals.hpp"
#include "bootcopula/matrix.hpp"
#include "bootcopula/prevalence.hpp"
#include "bootcopula/quantile_fit.hpp"
#include "bootcopula/rng.hpp"
#include "bootcopula/version.hpp"
