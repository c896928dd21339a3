#pragma once

#include "nfrad/constants.hpp"
#include "nfrad/materials.hpp"
#include "nfrad/quadrature.hpp"
#include "nfrad/planar.hpp"
#include "nfrad/transmissivity.hpp"
#include "nfrad/spectral.hpp"
#include "nfrad/mesh.hpp"
#include "nfrad/blackbody_geometry.hpp"
#include "nfrad/config.hpp"
#include "nfrad/run.hpp"
