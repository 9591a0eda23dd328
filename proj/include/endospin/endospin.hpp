#pragma once

#include "endospin/cli.hpp"
#include "endospin/dynamics.hpp"
#include "endospin/error.hpp"
#include "endospin/hamiltonian.hpp"
#include "endospin/protocol.hpp"
#include "endospin/pulseprog.hpp"
#include "endospin/spectrum.hpp"
#include "endospin/spinops.hpp"
#include "endospin/units.hpp"
#include "endospin/version.hpp"
