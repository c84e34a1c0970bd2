#pragma once

#include "tgd/baselines.hpp"
#include "tgd/convolve.hpp"
#include "tgd/error.hpp"
#include "tgd/field.hpp"
#include "tgd/io.hpp"
#include "tgd/kernel.hpp"
#include "tgd/metrics.hpp"
#include "tgd/noise.hpp"
#include "tgd/operator1d.hpp"
#include "tgd/operator_nd.hpp"
#include "tgd/quadrature.hpp"
#include "tgd/rotation_weight.hpp"
#include "tgd/spectrum.hpp"
