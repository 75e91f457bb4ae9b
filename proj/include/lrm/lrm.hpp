#pragma once

#include "lrm/acf.hpp"
#include "lrm/chaos.hpp"
#include "lrm/error.hpp"
#include "lrm/hurst.hpp"
#include "lrm/ingest.hpp"
#include "lrm/permtest.hpp"
#include "lrm/stats.hpp"
#include "lrm/synth.hpp"
#include "lrm/time_series.hpp"
