#pragma once

#include "padic.hpp"
#include "field.hpp"
#include "series.hpp"
#include "matrix.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "diffmod.hpp"
#include "radii.hpp"
#include "pipeline.hpp"
#include "expr.hpp"
