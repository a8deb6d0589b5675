#pragma once

#include "nccalc/axioms.hpp"
#include "nccalc/calculus.hpp"
#include "nccalc/cmat.hpp"
#include "nccalc/errors.hpp"
#include "nccalc/expr.hpp"
#include "nccalc/io.hpp"
#include "nccalc/random.hpp"
#include "nccalc/realimag.hpp"
#include "nccalc/report.hpp"
#include "nccalc/spectral.hpp"
#include "nccalc/tuple.hpp"
