#pragma once

#include "revpark/csv_io.hpp"
#include "revpark/errors.hpp"
#include "revpark/geometry.hpp"
#include "revpark/kinematics.hpp"
#include "revpark/occupancy.hpp"
#include "revpark/planner.hpp"
#include "revpark/scenario.hpp"
#include "revpark/svg_render.hpp"
#include "revpark/validation.hpp"
