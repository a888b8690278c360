#pragma once

#include "anodiff/discretization.hpp"
#include "anodiff/duhamel.hpp"
#include "anodiff/errors.hpp"
#include "anodiff/grid.hpp"
#include "anodiff/harness/config.hpp"
#include "anodiff/harness/csv.hpp"
#include "anodiff/harness/runner.hpp"
#include "anodiff/harness/sweep.hpp"
#include "anodiff/implicit_scheme.hpp"
#include "anodiff/kernels.hpp"
#include "anodiff/limit_solver.hpp"
#include "anodiff/micromacro.hpp"
#include "anodiff/model.hpp"
#include "anodiff/phase_space.hpp"
#include "anodiff/quadrature.hpp"
#include "anodiff/series.hpp"
#include "anodiff/spectral.hpp"
