#pragma once

#include "milnebands/errors.hpp"
#include "milnebands/floquet.hpp"
#include "milnebands/milne.hpp"
#include "milnebands/oracle.hpp"
#include "milnebands/potential.hpp"
#include "milnebands/spectrum.hpp"
