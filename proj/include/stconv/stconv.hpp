#pragma once

#include "stconv/error.hpp"
#include "stconv/format.hpp"
#include "stconv/primes.hpp"
#include "stconv/density.hpp"
#include "stconv/spaces.hpp"
#include "stconv/sequences.hpp"
#include "stconv/stanalysis.hpp"
#include "stconv/operators.hpp"
#include "stconv/parse.hpp"
#include "stconv/classify.hpp"
#include "stconv/theorems.hpp"
#include "stconv/report.hpp"
