#pragma once

#include "mrp/config.hpp"
#include "mrp/disintegration.hpp"
#include "mrp/error.hpp"
#include "mrp/kernel.hpp"
#include "mrp/mixing.hpp"
#include "mrp/model.hpp"
#include "mrp/parameter_map.hpp"
#include "mrp/path.hpp"
#include "mrp/properties/identities.hpp"
#include "mrp/properties/markov.hpp"
#include "mrp/properties/mpp.hpp"
#include "mrp/properties/multinomial.hpp"
#include "mrp/properties/regularity.hpp"
#include "mrp/properties/verdict.hpp"
#include "mrp/quadrature.hpp"
#include "mrp/random.hpp"
#include "mrp/report.hpp"
#include "mrp/stats.hpp"
