#pragma once

#include "error.hpp"
#include "poset.hpp"
#include "sset.hpp"
#include "homology.hpp"
#include "smallcat.hpp"
#include "colim.hpp"
#include "flow.hpp"
#include "ball_diagrams.hpp"
#include "resolve.hpp"
#include "realize.hpp"
#include "suites.hpp"
