#pragma once

// Umbrella header for the library (the CLI front end lives in cli.hpp).

#include "autogroup.hpp"
#include "error.hpp"
#include "factor.hpp"
#include "field.hpp"
#include "linearize.hpp"
#include "linmap.hpp"
#include "matq.hpp"
#include "matrix.hpp"
#include "mpoly.hpp"
#include "poly.hpp"
#include "rational.hpp"
#include "separated.hpp"
#include "text.hpp"
