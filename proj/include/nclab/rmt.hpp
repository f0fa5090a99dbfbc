#pragma once

#include "nclab/rmt/delta.hpp"
#include "nclab/rmt/export.hpp"
#include "nclab/rmt/matrix.hpp"
#include "nclab/rmt/model.hpp"
#include "nclab/rmt/montecarlo.hpp"
#include "nclab/rmt/norm.hpp"
