#pragma once

#include "awesom/bench.hpp"
#include "awesom/blobs.hpp"
#include "awesom/cluster.hpp"
#include "awesom/dataset.hpp"
#include "awesom/error.hpp"
#include "awesom/io.hpp"
#include "awesom/metrics.hpp"
#include "awesom/parallel.hpp"
#include "awesom/pipeline.hpp"
#include "awesom/random.hpp"
#include "awesom/sce.hpp"
#include "awesom/som.hpp"
#include "awesom/union_find.hpp"
