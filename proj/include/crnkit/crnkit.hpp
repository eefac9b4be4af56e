#pragma once

#include "crnkit/chains.hpp"
#include "crnkit/classify.hpp"
#include "crnkit/ctmc.hpp"
#include "crnkit/kinetics.hpp"
#include "crnkit/network.hpp"
#include "crnkit/ode.hpp"
#include "crnkit/parser.hpp"
#include "crnkit/polynomial.hpp"
#include "crnkit/rng.hpp"
#include "crnkit/series.hpp"
#include "crnkit/simulate.hpp"
#include "crnkit/stationary.hpp"
#include "crnkit/structure.hpp"
