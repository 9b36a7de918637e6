#pragma once

#include "frechet/clustering.hpp"
#include "frechet/diagnostics.hpp"
#include "frechet/embed.hpp"
#include "frechet/error.hpp"
#include "frechet/euclid.hpp"
#include "frechet/experiment.hpp"
#include "frechet/io.hpp"
#include "frechet/kmeans.hpp"
#include "frechet/mean.hpp"
#include "frechet/metrics.hpp"
#include "frechet/refpoints.hpp"
#include "frechet/rng.hpp"
#include "frechet/spd.hpp"
#include "frechet/synth.hpp"
