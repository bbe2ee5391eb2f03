#pragma once

#include "airy.hpp"
#include "edge.hpp"
#include "error.hpp"
#include "flow.hpp"
#include "identities.hpp"
#include "io.hpp"
#include "locallaw.hpp"
#include "montecarlo.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "spectrum.hpp"
#include "stieltjes.hpp"
#include "tracy_widom.hpp"
