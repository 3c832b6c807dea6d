#ifndef RADIOMAP_RADIOMAP_HPP
#define RADIOMAP_RADIOMAP_HPP

#include "radiomap/antenna.hpp"
#include "radiomap/error.hpp"
#include "radiomap/graph.hpp"
#include "radiomap/line.hpp"
#include "radiomap/measurements.hpp"
#include "radiomap/nn/adam.hpp"
#include "radiomap/nn/checkpoint.hpp"
#include "radiomap/nn/model.hpp"
#include "radiomap/nn/tabular.hpp"
#include "radiomap/oracle.hpp"
#include "radiomap/scene.hpp"
#include "radiomap/scene_gen.hpp"
#include "radiomap/scene_io.hpp"
#include "radiomap/training/experiment.hpp"

#endif  // RADIOMAP_RADIOMAP_HPP
