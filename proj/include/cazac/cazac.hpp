#pragma once

#include "cazac/types.hpp"
#include "cazac/number_theory.hpp"
#include "cazac/fft.hpp"
#include "cazac/rng.hpp"
#include "cazac/parallel.hpp"
#include "cazac/sequence.hpp"
#include "cazac/correlation.hpp"
#include "cazac/design.hpp"
#include "cazac/radar.hpp"
#include "cazac/io.hpp"
#include "cazac/plot.hpp"
#include "cazac/experiments.hpp"
#include "cazac/runner.hpp"
