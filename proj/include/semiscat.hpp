#ifndef SEMISCAT_HPP
#define SEMISCAT_HPP

#include "semiscat/core.hpp"
#include "semiscat/critical.hpp"
#include "semiscat/delta_step.hpp"
#include "semiscat/eckart.hpp"
#include "semiscat/ode.hpp"
#include "semiscat/parallel.hpp"
#include "semiscat/profile.hpp"
#include "semiscat/scan.hpp"
#include "semiscat/special_functions.hpp"
#include "semiscat/transfer.hpp"

#endif  // SEMISCAT_HPP
