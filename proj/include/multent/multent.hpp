#pragma once

#include "multent/analysis.hpp"
#include "multent/coupled.hpp"
#include "multent/counting.hpp"
#include "multent/entropy.hpp"
#include "multent/gamma.hpp"
#include "multent/lattice.hpp"
#include "multent/smooth.hpp"
