#pragma once

#include "geoops/core.hpp"
#include "geoops/curvature.hpp"
#include "geoops/featureset.hpp"
#include "geoops/fourier.hpp"
#include "geoops/io.hpp"
#include "geoops/moments.hpp"
#include "geoops/primitives.hpp"
#include "geoops/quality.hpp"
#include "geoops/sectioning.hpp"
#include "geoops/sensitivity.hpp"
#include "geoops/shapes.hpp"
#include "geoops/subspace.hpp"
#include "geoops/surrogate.hpp"
