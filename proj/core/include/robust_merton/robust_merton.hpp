#pragma once

#include "robust_merton/asymptotics.hpp"
#include "robust_merton/errors.hpp"
#include "robust_merton/market.hpp"
#include "robust_merton/oracle.hpp"
#include "robust_merton/random.hpp"
#include "robust_merton/solver.hpp"
#include "robust_merton/spectral.hpp"
