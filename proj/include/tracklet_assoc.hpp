#pragma once

#include "tracklet_assoc/associator.hpp"
#include "tracklet_assoc/config.hpp"
#include "tracklet_assoc/evaluation.hpp"
#include "tracklet_assoc/hungarian.hpp"
#include "tracklet_assoc/interpolate.hpp"
#include "tracklet_assoc/mot_io.hpp"
#include "tracklet_assoc/pipeline.hpp"
#include "tracklet_assoc/scoring.hpp"
#include "tracklet_assoc/synth.hpp"
#include "tracklet_assoc/tracklet_model.hpp"
#include "tracklet_assoc/types.hpp"
