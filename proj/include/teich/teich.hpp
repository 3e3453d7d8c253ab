#pragma once

#include "teich/beltrami.hpp"
#include "teich/circle_maps.hpp"
#include "teich/config.hpp"
#include "teich/error.hpp"
#include "teich/experiments.hpp"
#include "teich/fourier.hpp"
#include "teich/io.hpp"
#include "teich/map_spec.hpp"
#include "teich/random.hpp"
#include "teich/siegel.hpp"
#include "teich/svg.hpp"
#include "teich/symplectic.hpp"
#include "teich/wp_metric.hpp"
