// SPDX-License-Identifier: Apache-2.0
//
// arisim - active RIS link-level simulator
//
// Umbrella header.

#ifndef ARISIM_ARISIM_HPP
#define ARISIM_ARISIM_HPP

#include "arisim/amplifier.hpp"
#include "arisim/channel.hpp"
#include "arisim/config.hpp"
#include "arisim/geometry.hpp"
#include "arisim/qcqp.hpp"
#include "arisim/solver.hpp"
#include "arisim/sweep.hpp"
#include "arisim/system.hpp"
#include "arisim/units.hpp"
#include "arisim/validate.hpp"

#endif // ARISIM_ARISIM_HPP
