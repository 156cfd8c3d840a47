#pragma once

// Umbrella header: exact regenerating codes for distributed storage, with a
// minimum-bandwidth code (d = n-1), a minimum-storage code (d = k+1), the
// subspace checkers that certify the former, and a cluster simulator.

#include "regen/errors.hpp"
#include "regen/field.hpp"
#include "regen/matrix.hpp"
#include "regen/subspace.hpp"
#include "regen/types.hpp"
#include "regen/mds.hpp"
#include "regen/mbr.hpp"
#include "regen/msr.hpp"
#include "regen/verify.hpp"
#include "regen/packing.hpp"
#include "regen/storesim.hpp"
