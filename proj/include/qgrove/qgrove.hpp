#pragma once

#include "qgrove/circuit.hpp"
#include "qgrove/common.hpp"
#include "qgrove/density.hpp"
#include "qgrove/distribution.hpp"
#include "qgrove/euler.hpp"
#include "qgrove/gates.hpp"
#include "qgrove/grover.hpp"
#include "qgrove/kernels.hpp"
#include "qgrove/mcz.hpp"
#include "qgrove/metrics.hpp"
#include "qgrove/noise.hpp"
#include "qgrove/oracle.hpp"
#include "qgrove/oracle_enum.hpp"
#include "qgrove/presets.hpp"
#include "qgrove/rng.hpp"
#include "qgrove/serialize.hpp"
#include "qgrove/simulate.hpp"
#include "qgrove/suppress.hpp"
#include "qgrove/transpile.hpp"
#include "qgrove/twirl.hpp"
#include "qgrove/unitary.hpp"
