#pragma once

#include "causal/config.hpp"
#include "causal/continuity.hpp"
#include "causal/dirac.hpp"
#include "causal/error.hpp"
#include "causal/io.hpp"
#include "causal/mass_profile.hpp"
#include "causal/packets.hpp"
#include "causal/parallel.hpp"
#include "causal/quantify.hpp"
#include "causal/spacetime.hpp"
#include "causal/transport.hpp"
