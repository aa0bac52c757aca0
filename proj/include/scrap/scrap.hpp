#pragma once

#include "scrap/adiabatic.hpp"
#include "scrap/dynamics.hpp"
#include "scrap/error.hpp"
#include "scrap/pulses.hpp"
#include "scrap/scrap_single.hpp"
#include "scrap/scrap_two.hpp"
#include "scrap/sweep.hpp"
