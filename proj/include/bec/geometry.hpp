#pragma once

#include "bec/geometry/boundary.hpp"
#include "bec/geometry/components.hpp"
#include "bec/geometry/discrete_set.hpp"
#include "bec/geometry/fuzz.hpp"
#include "bec/geometry/good_set.hpp"
#include "bec/geometry/intersection.hpp"
#include "bec/geometry/presets.hpp"
#include "bec/geometry/transversality.hpp"
