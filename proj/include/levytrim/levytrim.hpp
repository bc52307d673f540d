#pragma once

#include "levytrim/common.hpp"
#include "levytrim/diagnostics.hpp"
#include "levytrim/jump_sampler.hpp"
#include "levytrim/levy_measure.hpp"
#include "levytrim/parallel.hpp"
#include "levytrim/quadrature.hpp"
#include "levytrim/report_io.hpp"
#include "levytrim/representation.hpp"
#include "levytrim/rng.hpp"
#include "levytrim/roots.hpp"
#include "levytrim/smoother.hpp"
#include "levytrim/stable_limits.hpp"
#include "levytrim/tail_function.hpp"
#include "levytrim/trimmer.hpp"
