#pragma once

#include "evrep/dynamics.hpp"
#include "evrep/io.hpp"
#include "evrep/quorum.hpp"
#include "evrep/random_states.hpp"
#include "evrep/spin.hpp"
#include "evrep/swcheck.hpp"
#include "evrep/symbol_vector.hpp"
#include "evrep/symbols.hpp"
#include "evrep/tomography.hpp"
