#pragma once

#include "nto1/error.hpp"
#include "nto1/numeric.hpp"
#include "nto1/ff_core.hpp"
#include "nto1/gf_linalg.hpp"
#include "nto1/poly.hpp"
#include "nto1/nto1_check.hpp"
#include "nto1/cyclo.hpp"
#include "nto1/walsh.hpp"
#include "nto1/lowdeg.hpp"
#include "nto1/agw.hpp"
#include "nto1/families.hpp"
#include "nto1/serialize.hpp"
