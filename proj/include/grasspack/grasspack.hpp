#pragma once

// Umbrella header for the Grassmannian chordal-metric packing toolkit.

#include "grasspack/errors.hpp"
#include "grasspack/random.hpp"
#include "grasspack/subspace.hpp"
#include "grasspack/bounds.hpp"
#include "grasspack/blichfeldt.hpp"
#include "grasspack/packing.hpp"
#include "grasspack/volume.hpp"
#include "grasspack/verify.hpp"
#include "grasspack/io.hpp"
